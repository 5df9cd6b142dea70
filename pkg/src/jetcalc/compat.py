"""Compatibility decision procedures.

Brackets are reduced modulo the algebraic ideal of the capped prolongations.
Because the module-theoretic reduction allows arbitrary jet-function
coefficients, a bracket that vanishes "due to the system" may fail plain
polynomial membership by a factor that is nonzero on the equation; the
checks therefore saturate by the separants of the equations (coefficients
of their highest-ranked derivatives) and by exponential kernels, and every
multiplier used is reported alongside the cleared denominators.
"""
from dataclasses import dataclass, field
from fractions import Fraction

from .context import JetContext
from .errors import (JetCalcError, ShapeMismatch, SubstitutionCycle,
                     UnsupportedRegime)
from .expr import Expr, ExpKernel, JetVar, BaseVar, substitute
from .jet import (evaluate_on_ansatz, diff_wrt_jet, jet_expr, jet_occurrences,
                  make_jet, prolong_system, symbol, symbol_mul,
                  total_derivative_sigma, weighted_order)
from .linops import CDiffOp, apply_op, jacobi_bracket, multi_bracket
from .ideal import groebner, symbol_gcd_resultant, DEFAULT_BUDGET

COMPATIBLE = "compatible"
OBSTRUCTION = "obstruction"
INCONCLUSIVE = "inconclusive"

SATURATION_POWER = 3


@dataclass(frozen=True)
class EquationSystem:
    ctx: JetContext
    equations: tuple
    cap_override: int = None
    budget: int = DEFAULT_BUDGET

    def __post_init__(self):
        eqs = tuple(self.equations)
        object.__setattr__(self, "equations", eqs)
        if not eqs:
            raise JetCalcError("equation system needs at least one equation")
        if any(e.is_zero() for e in eqs):
            raise JetCalcError("equation system contains the zero equation")

    @property
    def orders(self):
        return tuple(weighted_order(self.ctx, e) for e in self.equations)

    @property
    def r(self):
        return len(self.equations)


@dataclass
class CompatReport:
    verdict: str
    obstructions: list = field(default_factory=list)
    transversal: bool = None
    cleared_denominators: list = field(default_factory=list)

    def as_dict(self):
        return {
            "verdict": self.verdict,
            "obstructions": [o.text() for o in self.obstructions],
            "transversal": self.transversal,
            "clearedDenominators": [d.text() for d in self.cleared_denominators],
        }


def _verdict(obstructions, transversal):
    if obstructions:
        return OBSTRUCTION
    return COMPATIBLE if transversal else INCONCLUSIVE


# ---------------------------------------------------------------------------
# separants (saturation multipliers)

def leader(ctx, F):
    """Highest-ranked jet of F: maximal weighted order, then the ring's
    variable ranking."""
    jets = jet_occurrences(F)
    if not jets:
        raise JetCalcError("expression contains no jet variable")
    return min(jets, key=lambda k: (-ctx.weight(k.sigma), k.dep, k.text))


def separant(ctx, F):
    """Coefficient of the leader: dF/d(leading jet)."""
    k = leader(ctx, F)
    return diff_wrt_jet(ctx, F, k.dep, k.sigma)


def _multipliers(ctx, equations, gb):
    out = []
    for e in equations:
        s = separant(ctx, e)
        if not s.is_zero() and s.constant_value() is None:
            out.append(s)
    for k in gb.ring.variables:
        if type(k) is ExpKernel:
            out.append(Expr.kernel(k))
    return out


def _reduce_with_saturation(gb, ctx, equations, query):
    """(plain normal form, vanishes-due-to-system flag, multipliers used)."""
    nf = gb.normal_form(query)
    if nf.is_zero():
        return nf, True, []
    mults = _multipliers(ctx, equations, gb)
    ok, power = gb.contains_saturated(query, mults, SATURATION_POWER)
    if ok:
        return Expr.zero(), True, mults if power else []
    return nf, False, []


# ---------------------------------------------------------------------------
# Mayer bracket and pairwise compatibility

def _pair_ideal(sys, order="block"):
    ctx = sys.ctx
    cap = sys.cap_override
    if cap is None:
        cap = sum(sys.orders) - 1
    gens = prolong_system(ctx, sys.equations, cap, sys.orders)
    gb = groebner(ctx, gens, order=order, budget=sys.budget, source_cap=cap)
    return gb, cap


def mayer_reduce(sys, order="block"):
    """Mayer bracket: the Jacobi bracket of the two equations reduced by the
    capped prolongation ideal; zero (exactly) when the pair is compatible in
    the bracket sense."""
    ctx = sys.ctx
    if ctx.n_dep != 1 or sys.r != 2:
        raise UnsupportedRegime("Mayer bracket needs one dependent variable "
                                "and exactly two equations")
    F, G = sys.equations
    gb, _ = _pair_ideal(sys, order)
    br = jacobi_bracket(ctx, F, G)
    nf, _, _ = _reduce_with_saturation(gb, ctx, sys.equations, br)
    return nf


def is_compatible_pair(ctx, F, G, cap=None, budget=DEFAULT_BUDGET):
    """Pairwise compatibility: Mayer bracket vanishing plus the complete
    intersection (transversality) flag."""
    sys = EquationSystem(ctx, (F, G), cap_override=cap, budget=budget)
    gb, _ = _pair_ideal(sys)
    br = jacobi_bracket(ctx, F, G)
    nf, zero, used = _reduce_with_saturation(gb, ctx, sys.equations, br)
    try:
        transversal, _, _ = complete_intersection_check(ctx, F, G)
    except JetCalcError:
        transversal = False
    report = CompatReport(
        verdict=_verdict([] if zero else [nf], transversal),
        obstructions=[] if zero else [nf],
        transversal=transversal,
        cleared_denominators=list(gb.cleared) + used,
    )
    return report


def complete_intersection_check(ctx, F, G):
    """Transversality of the two symbols: constant gcd and nonzero resultant.

    Returns (flag, gcd component dict, resultant-nonzero flag).
    """
    sF = symbol(ctx, F)
    sG = symbol(ctx, G)
    gcd_comp, gdeg, res_ok = symbol_gcd_resultant(sF, sG)
    return (gdeg == 0 and res_ok), gcd_comp, res_ok


# ---------------------------------------------------------------------------
# full systems

def check_compatibility(sys):
    """Multi-bracket criterion: every (m+1)-tuple bracket must vanish due to
    the system (with transversality for the verdict)."""
    ctx = sys.ctx
    n, m, r = ctx.n_indep, ctx.n_dep, sys.r
    if not (m <= r < n + m):
        raise UnsupportedRegime(
            f"criterion covers m <= r < n + m; got m={m}, r={r}, n={n}")
    from itertools import combinations
    obstructions = []
    cleared = []
    for tup in combinations(range(r), m + 1):
        orders = [sys.orders[i] for i in tup]
        cap = sys.cap_override or (sum(orders) - 1)
        gens = prolong_system(ctx, sys.equations, cap, sys.orders)
        gb = groebner(ctx, gens, budget=sys.budget, source_cap=cap)
        br = multi_bracket(ctx, [sys.equations[i] for i in tup])
        nf, zero, used = _reduce_with_saturation(gb, ctx, sys.equations, br)
        cleared.extend(gb.cleared)
        cleared.extend(used)
        if not zero:
            obstructions.append(nf)
    transversal = None
    if m == 1 and n == 2 and ctx.weights == (1, 1):
        transversal = True
        for i in range(r):
            for j in range(i + 1, r):
                try:
                    ok, _, _ = complete_intersection_check(
                        ctx, sys.equations[i], sys.equations[j])
                except JetCalcError:
                    ok = False
                transversal = transversal and ok
    return CompatReport(
        verdict=_verdict(obstructions, transversal),
        obstructions=obstructions,
        transversal=transversal,
        cleared_denominators=cleared,
    )


def integrability_conditions(sys):
    """Nonzero Mayer normal forms of all pairs: candidate equations for one
    projection step.  Empty iff check_compatibility reports no obstruction."""
    ctx = sys.ctx
    if ctx.n_dep != 1:
        raise UnsupportedRegime("projection step implemented for one "
                                "dependent variable")
    from itertools import combinations
    out = []
    for i, j in combinations(range(sys.r), 2):
        cap = sys.cap_override or (sys.orders[i] + sys.orders[j] - 1)
        gens = prolong_system(ctx, sys.equations, cap, sys.orders)
        gb = groebner(ctx, gens, budget=sys.budget, source_cap=cap)
        br = jacobi_bracket(ctx, sys.equations[i], sys.equations[j])
        nf, zero, _ = _reduce_with_saturation(gb, ctx, sys.equations, br)
        if not zero:
            out.append(nf)
    return out


# ---------------------------------------------------------------------------
# symmetries

def symmetry_check(ctx, F, G, cap=None, budget=DEFAULT_BUDGET):
    """Symmetry condition: {F,G} must lie in the prolongation ideal of F
    alone (default cap ord F + ord G - 1)."""
    if ctx.n_dep != 1:
        raise UnsupportedRegime(
            "vector symmetry check is not implemented; the membership cap "
            "for m > 1 is an open parameter")
    kF = weighted_order(ctx, F)
    kG = weighted_order(ctx, G)
    if cap is None:
        cap = kF + kG - 1
    # a cap below ord F leaves no room for lambda o F: the ideal is empty
    # and the bracket must vanish identically
    gens = prolong_system(ctx, [F], cap, [kF]) if cap >= kF else []
    gb = groebner(ctx, gens, budget=budget, source_cap=cap)
    br = jacobi_bracket(ctx, F, G)
    nf, zero, used = _reduce_with_saturation(gb, ctx, [F], br)
    return CompatReport(
        verdict=COMPATIBLE if zero else OBSTRUCTION,
        obstructions=[] if zero else [nf],
        transversal=None,
        cleared_denominators=list(gb.cleared) + used,
    )


# ---------------------------------------------------------------------------
# reduced bracket for common symbol divisors

def reduced_bracket(ctx, F, G, S, T, q, budget=DEFAULT_BUDGET):
    """T(F) - S(G) reduced modulo the ideal capped at k + l - ord(q) - 1,
    for operators S, T whose symbols are the symbol quotients by q.

    q is a scalar symbol component: dict sigma -> Expr.
    """
    if ctx.n_dep != 1:
        raise UnsupportedRegime("reduced bracket implemented for m = 1")
    q = dict(q)
    if not q:
        raise JetCalcError("zero symbol divisor")
    sF = symbol(ctx, F).component(0)
    sG = symbol(ctx, G).component(0)
    if symbol_mul(S.top_symbol(), q) != sF:
        raise JetCalcError("symbol of S times q does not equal the symbol of F")
    if symbol_mul(T.top_symbol(), q) != sG:
        raise JetCalcError("symbol of T times q does not equal the symbol of G")
    k = weighted_order(ctx, F)
    l = weighted_order(ctx, G)
    tq = max(ctx.weight(s) for s in q)
    cap = k + l - tq - 1
    # equations deeper than the cap contribute nothing to the ideal
    eqs = [(eq, o) for eq, o in ((F, k), (G, l)) if o <= cap]
    gens = prolong_system(ctx, [eq for eq, _ in eqs], cap, [o for _, o in eqs])
    gb = groebner(ctx, gens, budget=budget, source_cap=cap)
    query = apply_op(T, F) - apply_op(S, G)
    nf, zero, _ = _reduce_with_saturation(gb, ctx, [eq for eq, _ in eqs], query)
    return Expr.zero() if zero else nf


def op_from_symbol(ctx, comp):
    """Operator with the given top symbol and zero lower-order part."""
    return CDiffOp.scalar(ctx, comp)


# ---------------------------------------------------------------------------
# Frobenius-type systems

def frobenius_check(ctx, rules, max_steps=10000):
    """Cross-derivative residuals of a solved (Frobenius-type) system.

    rules: list of (leading JetVar kernel | (dep, sigma), rhs Expr).
    Compatible iff every residual reduces to zero after exhaustive
    substitution of the rules.
    """
    norm = []
    for lead, rhs in rules:
        if not isinstance(lead, JetVar):
            dep, sigma = lead
            lead = make_jet(ctx, dep, tuple(sigma))
        norm.append((lead, rhs))
    leads = [l for l, _ in norm]
    if len({l.text for l in leads}) != len(leads):
        raise JetCalcError("leading jets must be pairwise distinct")
    rank = {l.text: (-ctx.weight(l.sigma), l.dep, l.text) for l in leads}
    low = min(rank.values())
    for lead, rhs in norm:
        for k in jet_occurrences(rhs):
            if (-ctx.weight(k.sigma), k.dep, k.text) <= low:
                raise JetCalcError(
                    f"rule for {lead.text} has right side containing "
                    f"{k.text}, not lower than every leading jet")
    # deterministic processing order regardless of input order
    norm.sort(key=lambda it: rank[it[0].text])

    deriv_cache = {}

    def rewrite(e):
        for _ in range(max_steps):
            hit = None
            for k in jet_occurrences(e):
                for lead, rhs in norm:
                    if k.dep == lead.dep and all(
                            a >= b for a, b in zip(k.sigma, lead.sigma)):
                        delta = tuple(a - b for a, b in zip(k.sigma, lead.sigma))
                        hit = (k, lead, rhs, delta)
                        break
                if hit:
                    break
            if hit is None:
                return e
            k, lead, rhs, delta = hit
            key = (lead.text, delta)
            if key not in deriv_cache:
                deriv_cache[key] = total_derivative_sigma(ctx, rhs, delta)
            e = substitute(e, {k: deriv_cache[key]})
        raise SubstitutionCycle("substitution did not terminate below the step cap")

    obstructions = []
    for i in range(len(norm)):
        for j in range(i + 1, len(norm)):
            si, ri = norm[i][0].sigma, norm[i][1]
            sj, rj = norm[j][0].sigma, norm[j][1]
            if norm[i][0].dep != norm[j][0].dep:
                continue
            join = tuple(max(a, b) for a, b in zip(si, sj))
            di = tuple(a - b for a, b in zip(join, si))
            dj = tuple(a - b for a, b in zip(join, sj))
            left = rewrite(total_derivative_sigma(ctx, ri, di))
            right = rewrite(total_derivative_sigma(ctx, rj, dj))
            residual = left - right
            if not residual.is_zero():
                obstructions.append(residual)
    return CompatReport(
        verdict=COMPATIBLE if not obstructions else OBSTRUCTION,
        obstructions=obstructions,
        transversal=True,
        cleared_denominators=[],
    )


# ---------------------------------------------------------------------------
# ODE intermediate integrals

def ode_intermediate_context(parameters=()):
    """Context for the intermediate-integral residual: independent (x, u),
    dependent phi."""
    return JetContext(independent=("x", "u"), dependent=("phi",),
                      parameters=tuple(parameters))


def ode_intermediate_pde(F_rhs, parameters=()):
    """Residual phi_x + phi_u * phi - F(x, u, phi) for the constraint
    u' = phi(x, u) on u'' = F(x, u, u').

    F_rhs is an Expr over kernels x, u (base variables) and p (dependent);
    the result lives in a context with independent (x, u), dependent phi.
    """
    ctx_out = ode_intermediate_context(parameters)
    phi = jet_expr(ctx_out, 0, (0, 0))
    phi_x = jet_expr(ctx_out, 0, (1, 0))
    phi_u = jet_expr(ctx_out, 0, (0, 1))
    # map kernels of F_rhs into the output context
    table = {}
    for k in F_rhs.all_kernels():
        if type(k) is BaseVar and k.name in ("x", "u"):
            continue
        if type(k) is JetVar:
            if k.dep_name == "p" and not any(k.sigma):
                table[k] = phi
            else:
                raise JetCalcError(f"stray kernel {k.text} in the right side; "
                                   "only x, u and p are allowed")
    F_mapped = substitute(F_rhs, table)
    return ctx_out, phi_x + phi_u * phi - F_mapped
