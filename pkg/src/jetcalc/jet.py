"""Total derivatives, prolongation, symbols, and ansatz evaluation."""
from dataclasses import dataclass
from fractions import Fraction

from .context import JetContext
from .errors import DerivativeCapExceeded, JetCalcError, UndeclaredIdentifier
from .expr import (Expr, Term, JetVar, BaseVar, FuncKernel, ExpKernel,
                   partial_derivative, substitute)


def make_jet(ctx, dep, sigma):
    return JetVar(dep, sigma, ctx.dependent[dep], ctx.subscript(sigma))


def jet_expr(ctx, dep, sigma):
    return Expr.kernel(make_jet(ctx, dep, sigma))


def base_expr(ctx, name):
    return Expr.kernel(BaseVar(name))


def kernel_weight(ctx, k):
    """Weighted jet order of a kernel, recursing into arguments."""
    if type(k) is JetVar:
        return ctx.weight(k.sigma)
    if isinstance(k, (FuncKernel, ExpKernel)):
        return weighted_order(ctx, k.arg)
    return 0


def weighted_order(ctx, e):
    """Max weighted order of any jet occurring in e; 0 if jet-free."""
    w = 0
    for k in e.all_kernels():
        if type(k) is JetVar:
            w = max(w, ctx.weight(k.sigma))
    return w


# ---------------------------------------------------------------------------
# total derivatives

def _d_kernel(ctx, k, i):
    if type(k) is BaseVar:
        return Expr.one() if k.name == ctx.independent[i] else Expr.zero()
    if type(k) is JetVar:
        return jet_expr(ctx, k.dep, ctx.bump(k.sigma, i))
    if type(k) is FuncKernel:
        ctx.check_func_order(k.name, k.order + 1)
        darg = total_derivative(ctx, k.arg, i)
        if darg.is_zero():
            return Expr.zero()
        return Expr.kernel(FuncKernel(k.name, k.order + 1, k.arg)) * darg
    if type(k) is ExpKernel:
        darg = total_derivative(ctx, k.arg, i)
        if darg.is_zero():
            return Expr.zero()
        return Expr.kernel(k) * darg
    raise JetCalcError(f"cannot differentiate kernel {k!r}")


def total_derivative(ctx, e, i):
    """D_i(e): derivation shifting jets and applying the chain rule."""
    out = Expr.zero()
    for t in e.terms:
        for idx, (k, q) in enumerate(t.factors):
            dk = _d_kernel(ctx, k, i)
            if dk.is_zero():
                continue
            if q == 1:
                rest = t.factors[:idx] + t.factors[idx + 1:]
            else:
                rest = t.factors[:idx] + ((k, q - 1),) + t.factors[idx + 1:]
            out = out + Expr((Term(t.coeff * q, rest),)) * dk
    return out


def total_derivative_sigma(ctx, e, sigma):
    for i, s in enumerate(sigma):
        for _ in range(s):
            e = total_derivative(ctx, e, i)
    return e


# ---------------------------------------------------------------------------
# jet partials with chain rule (linearization coefficients)

def diff_wrt_jet(ctx, e, dep, sigma):
    """d e / d p^dep_sigma as a function on jet space (chain rule through
    function and exponential kernel arguments)."""
    target = make_jet(ctx, dep, sigma)
    out = partial_derivative(e, target)
    for t in e.terms:
        for idx, (k, q) in enumerate(t.factors):
            if not isinstance(k, (FuncKernel, ExpKernel)):
                continue
            darg = diff_wrt_jet(ctx, k.arg, dep, sigma)
            if darg.is_zero():
                continue
            if type(k) is FuncKernel:
                ctx.check_func_order(k.name, k.order + 1)
                dkdw = Expr.kernel(FuncKernel(k.name, k.order + 1, k.arg))
            else:
                dkdw = Expr.kernel(k)
            rest = t.factors[:idx] + ((k, q - 1),) + t.factors[idx + 1:]
            rest = tuple(f for f in rest if f[1] != 0)
            out = out + Expr((Term(t.coeff * q, rest),)) * dkdw * darg
    return out


def jet_occurrences(e):
    """Distinct JetVar kernels occurring anywhere in e."""
    return [k for k in e.all_kernels() if type(k) is JetVar]


# ---------------------------------------------------------------------------
# prolongation

def prolong_system(ctx, eqs, cap, orders=None):
    """All D_sigma(F_i) with weight(sigma) <= cap - k_i, by equation then
    graded-lex sigma."""
    eqs = list(eqs)
    if orders is None:
        orders = [weighted_order(ctx, e) for e in eqs]
    for e, k in zip(eqs, orders):
        if cap < k:
            raise JetCalcError(f"prolongation cap {cap} below equation order {k}")
    out = []
    for e, k in zip(eqs, orders):
        for sigma in ctx.sigmas_bounded(cap - k):
            out.append(total_derivative_sigma(ctx, e, sigma))
    return out


# ---------------------------------------------------------------------------
# symbols

@dataclass(frozen=True)
class SymbolPoly:
    """Top weighted-order part of an operator: homogeneous polynomial in the
    covector variables, one component per dependent variable."""
    ctx: JetContext
    order: int
    comps: tuple   # per dependent: tuple of (sigma, Expr) sorted by sigma

    def component(self, dep):
        return dict(self.comps[dep])

    def is_zero(self):
        return all(not c for c in self.comps)

    def nonzero_deps(self):
        return [i for i, c in enumerate(self.comps) if c]

    def text(self):
        bits = []
        for dep, comp in enumerate(self.comps):
            for sigma, c in comp:
                mono = "*".join(
                    f"xi_{v}" + (f"^{s}" if s > 1 else "")
                    for v, s in zip(self.ctx.independent, sigma) if s)
                ctext = c.text()
                if len(c.terms) > 1:
                    ctext = f"({ctext})"
                if not mono:
                    body = ctext
                elif ctext == "1":
                    body = mono
                elif ctext == "-1":
                    body = f"-{mono}"
                else:
                    body = f"{ctext}*{mono}"
                if len(self.comps) > 1:
                    body = f"[{self.ctx.dependent[dep]}] {body}"
                bits.append(body)
        return " + ".join(bits) if bits else "0"

    def __eq__(self, other):
        return (isinstance(other, SymbolPoly) and self.order == other.order
                and self.comps == other.comps)


def symbol(ctx, e):
    """sigma(e): coefficients of the top weighted-order jets, as a
    homogeneous covector polynomial per dependent variable."""
    jets = jet_occurrences(e)
    if not jets:
        raise JetCalcError("expression contains no jet variable")
    top = max(ctx.weight(k.sigma) for k in jets)
    comps = [dict() for _ in ctx.dependent]
    for k in jets:
        if ctx.weight(k.sigma) != top:
            continue
        c = diff_wrt_jet(ctx, e, k.dep, k.sigma)
        if not c.is_zero():
            comps[k.dep][k.sigma] = c
    return SymbolPoly(ctx, top,
                      tuple(tuple(sorted(c.items())) for c in comps))


def symbol_mul(a, b):
    """Product of two scalar (m-agnostic single-component) symbol dicts."""
    out = {}
    for s1, c1 in a.items():
        for s2, c2 in b.items():
            s = tuple(x + y for x, y in zip(s1, s2))
            cur = out.get(s)
            v = c1 * c2 if cur is None else cur + c1 * c2
            if v.is_zero():
                out.pop(s, None)
            else:
                out[s] = v
    return out


# ---------------------------------------------------------------------------
# ansatz evaluation

@dataclass(frozen=True)
class AnsatzBinding:
    dep: str
    value: Expr

    def __post_init__(self):
        bad = [k for k in self.value.all_kernels() if type(k) is JetVar]
        if bad:
            raise JetCalcError(
                f"ansatz value for {self.dep!r} contains jet variables: "
                f"{', '.join(k.text for k in bad)}")


def evaluate_on_ansatz(ctx, e, bindings):
    """Replace every jet of a bound dependent variable by the corresponding
    total derivative of its ansatz value, computed in the base ring."""
    if isinstance(bindings, dict):
        bindings = [AnsatzBinding(d, v) for d, v in bindings.items()]
    by_dep = {}
    for b in bindings:
        by_dep[ctx.dep_index(b.dep)] = b.value
    jets = jet_occurrences(e)
    unbound = sorted({k.dep_name for k in jets if k.dep not in by_dep})
    if unbound:
        raise JetCalcError(f"unbound dependent variables: {', '.join(unbound)}")

    deriv_cache = {}

    def value_at(dep, sigma):
        key = (dep, sigma)
        if key in deriv_cache:
            return deriv_cache[key]
        if not any(sigma):
            v = by_dep[dep]
        else:
            i = max(j for j, s in enumerate(sigma) if s)
            prev = sigma[:i] + (sigma[i] - 1,) + sigma[i + 1:]
            v = total_derivative(ctx, value_at(dep, prev), i)
        deriv_cache[key] = v
        return v

    table = {make_jet(ctx, k.dep, k.sigma): value_at(k.dep, k.sigma) for k in jets}
    out = substitute(e, table)
    leftover = [k for k in out.all_kernels() if type(k) is JetVar]
    if leftover:
        raise JetCalcError("ansatz evaluation left jet variables behind")
    return out
