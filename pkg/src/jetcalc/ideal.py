"""Polynomial ideal machinery over jet-coordinate kernels.

Exprs convert to polynomials with integer (or parameter-polynomial)
coefficients after clearing monomial denominators; membership and normal
forms come from a reduced Groebner basis computed by the reduction engine
(compiled extension when available, pure Python otherwise).
"""
import os
from fractions import Fraction
from math import gcd as _igcd

from .coeffs import (ParamRat, make_rat, pz_const, pz_mul, pz_gcd, pz_divexact,
                     pz_is_const, pz_const_value)
from .errors import ExprError, JetCalcError
from .expr import Expr, Term, Kernel, JetVar, FuncKernel, ExpKernel, BaseVar
from .jet import weighted_order

if os.environ.get("JETCALC_PURE"):
    from . import _reduce_py as engine
else:
    try:
        from . import _reduce_cy as engine
    except ImportError:
        from . import _reduce_py as engine

DEFAULT_BUDGET = 10000

ORDERS = ("block", "grevlex", "lex")


class RootKernel(Kernel):
    """Internal ring variable standing for base_kernel ** (1/den)."""

    __slots__ = ("base", "den")

    def __init__(self, base, den):
        super().__init__(f"root{den}({base.text})")
        self.base = base
        self.den = den


def _kernel_rank(ctx, k):
    """Sort class for ring variables: jets by weighted order (descending),
    then roots, function kernels, exponential kernels, base variables."""
    if type(k) is JetVar:
        return (0, -ctx.weight(k.sigma), k.dep, k.text)
    if type(k) is RootKernel:
        return (1, 0, 0, k.text)
    if type(k) is FuncKernel:
        return (2, 0, 0, k.text)
    if type(k) is ExpKernel:
        return (3, 0, 0, k.text)
    return (4, 0, 0, k.text)


class PolyRingSpec:
    """Ordered kernel variables with a block monomial order."""

    __slots__ = ("ctx", "order_name", "variables", "index", "blocks", "kit",
                 "roots")

    def __init__(self, ctx, kernels, order_name="block", root_dens=None):
        if order_name not in ORDERS:
            raise JetCalcError(f"unknown monomial order {order_name!r}")
        self.ctx = ctx
        self.order_name = order_name
        self.roots = {}
        kernels = {k.text: k for k in kernels}
        if root_dens:
            for text, den in root_dens.items():
                base = kernels[text]
                root = RootKernel(base, den)
                self.roots[text] = root
                kernels[root.text] = root
        self.variables = tuple(sorted(kernels.values(),
                                      key=lambda k: _kernel_rank(ctx, k)))
        self.index = {k.text: i for i, k in enumerate(self.variables)}
        self.blocks = self._make_blocks()
        self.kit = engine.PzKit if ctx.parameters else engine.IntKit

    def _make_blocks(self):
        n = len(self.variables)
        if self.order_name == "grevlex":
            return (tuple(range(n)),)
        if self.order_name == "lex":
            return tuple((i,) for i in range(n))
        blocks = []
        cur = []
        cur_rank = None
        for i, k in enumerate(self.variables):
            r = _kernel_rank(self.ctx, k)[:2]
            if r != cur_rank:
                if cur:
                    blocks.append(tuple(cur))
                cur = []
                cur_rank = r
            cur.append(i)
        if cur:
            blocks.append(tuple(cur))
        return tuple(blocks)

    @property
    def nvars(self):
        return len(self.variables)

    def extended(self, extra_kernels, extra_roots=None):
        """Ring with additional variables; returns (ring, old->new index map)."""
        kernels = {k.text: k for k in self.variables
                   if type(k) is not RootKernel}
        dens = {t: r.den for t, r in self.roots.items()}
        for k in extra_kernels:
            kernels.setdefault(k.text, k)
        if extra_roots:
            for t, d in extra_roots.items():
                g = dens.get(t, 1)
                dens[t] = g * d // _igcd(g, d)
        ring = PolyRingSpec(self.ctx, kernels.values(), self.order_name, dens)
        remap = tuple(ring.index[k.text] for k in self.variables)
        return ring, remap

    def mono_of(self, factors):
        """Exponent tuple for non-negative integer factor powers."""
        m = [0] * self.nvars
        for k, e in factors:
            m[self.index[k.text]] = e
        return tuple(m)


def remap_poly(p, remap, nvars):
    out = {}
    for m, c in p.items():
        mm = [0] * nvars
        for old, e in enumerate(m):
            if e:
                mm[remap[old]] = e
        out[tuple(mm)] = c
    return out


# ---------------------------------------------------------------------------
# conversion

def _collect_ring_data(exprs):
    """Factor kernels and fractional-exponent denominators of the exprs."""
    kernels = {}
    dens = {}
    for e in exprs:
        for t in e.terms:
            for k, q in t.factors:
                kernels.setdefault(k.text, k)
                if q.denominator != 1:
                    d = dens.get(k.text, 1)
                    dens[k.text] = d * q.denominator // _igcd(d, q.denominator)
    return kernels, dens


def build_ring(ctx, exprs, order="block"):
    kernels, dens = _collect_ring_data(exprs)
    return PolyRingSpec(ctx, kernels.values(), order, dens)


def _coeff_parts(c, params):
    """(numerator pz or int, denominator pz or int) for a coefficient."""
    if isinstance(c, ParamRat):
        return c.num, c.den
    if params:
        n = len(params)
        return pz_const(c.numerator, n), pz_const(c.denominator, n)
    return c.numerator, c.denominator


def to_polynomial(e, ring):
    """Clear monomial denominators: returns (poly, den) with e = poly / den
    as field elements, den a single-term Expr."""
    params = ring.ctx.parameters
    # common kernel denominator: worst negative exponent per kernel
    neg = {}
    for t in e.terms:
        for k, q in t.factors:
            if q < 0:
                cur = neg.get(k.text, Fraction(0))
                neg[k.text] = max(cur, -q)
    # common coefficient denominator
    if params:
        cden = pz_const(1, len(params))
        for t in e.terms:
            _, d = _coeff_parts(t.coeff, params)
            g = pz_gcd(cden, d)
            cden = pz_divexact(pz_mul(cden, d), g)
    else:
        cden = 1
        for t in e.terms:
            cden = cden * t.coeff.denominator // _igcd(cden, t.coeff.denominator)
    poly = {}
    for t in e.terms:
        num, d = _coeff_parts(t.coeff, params)
        if params:
            c = pz_mul(num, pz_divexact(cden, d))
        else:
            c = num * (cden // d)
        factors = []
        for k, q in t.factors:
            q = q + neg.get(k.text, 0)
            if q:
                root = ring.roots.get(k.text)
                if root is not None:
                    qq = q * root.den
                    if qq.denominator != 1:
                        raise ExprError(f"exponent {q} of {k.text} not covered "
                                        f"by ring root of degree {root.den}")
                    factors.append((root, int(qq)))
                elif q.denominator != 1:
                    raise ExprError(f"fractional exponent {q} of {k.text} "
                                    "outside the ring")
                else:
                    factors.append((k, int(q)))
        m = ring.mono_of(factors)
        if m in poly:
            c = ring.kit.add(poly[m], c)
        if (c if isinstance(c, int) else bool(c)):
            poly[m] = c
        else:
            poly.pop(m, None)
    den_factors = tuple(sorted(
        ((ring.variables[ring.index[t]], q) for t, q in neg.items()),
        key=lambda f: f[0].text))
    if params:
        den_coeff = make_rat(params, cden, pz_const(1, len(params)))
    else:
        den_coeff = Fraction(cden)
    den = Expr((Term(den_coeff, den_factors),)) if (den_factors or den_coeff != 1) \
        else Expr.one()
    return poly, den


def root_relations(ring, only=None):
    """Defining polynomials root**den - base for registered roots."""
    out = []
    one = pz_const(1, len(ring.ctx.parameters)) if ring.ctx.parameters else 1
    for text in sorted(only if only is not None else ring.roots):
        root = ring.roots[text]
        m1 = [0] * ring.nvars
        m1[ring.index[root.text]] = root.den
        m2 = [0] * ring.nvars
        m2[ring.index[text]] = 1
        out.append({tuple(m1): one, tuple(m2): ring.kit.neg(one)})
    return out


def poly_to_expr(p, ring, scale=None):
    """Rebuild an Expr from an engine polynomial, mapping roots back to
    fractional powers; scale is an optional coefficient multiplier.

    Built by kernel multiplication so exponential factors re-merge into
    canonical form.
    """
    params = ring.ctx.parameters
    out = Expr.zero()
    for m, c in p.items():
        if params:
            coeff = make_rat(params, c, pz_const(1, len(params)))
        else:
            coeff = Fraction(c)
        if scale is not None:
            coeff = coeff * scale
        term = Expr.const(coeff)
        for i, e in enumerate(m):
            if not e:
                continue
            k = ring.variables[i]
            if type(k) is RootKernel:
                term = term * Expr.kernel(k.base, Fraction(e, k.den))
            else:
                term = term * Expr.kernel(k, Fraction(e))
        out = out + term
    return out


# ---------------------------------------------------------------------------
# Groebner bases

class GroebnerBasis:
    """Reduced basis of the ideal generated by the converted numerators."""

    __slots__ = ("ring", "polys", "leads", "source_cap", "cleared", "budget")

    def __init__(self, ring, polys, source_cap=None, cleared=(), budget=DEFAULT_BUDGET):
        self.ring = ring
        self.polys = polys
        self.leads = [engine.lead_mono(p, ring.blocks) for p in polys]
        self.source_cap = source_cap
        self.cleared = list(cleared)
        self.budget = budget

    def generators(self):
        return [poly_to_expr(p, self.ring) for p in self.polys]

    def _ensure_ring(self, e):
        kernels, dens = _collect_ring_data([e])
        missing = [k for t, k in kernels.items() if t not in self.ring.index]
        new_roots = {}
        for t, d in dens.items():
            root = self.ring.roots.get(t)
            if root is None or root.den % d:
                new_roots[t] = d
        if missing or new_roots:
            ring, remap = self.ring.extended(kernels.values(), dens)
            self.polys = [remap_poly(p, remap, ring.nvars) for p in self.polys]
            if new_roots:
                # new root relations join the basis; completing it is cheap
                # because the root variables are fresh
                self.polys.extend(root_relations(ring, new_roots))
                self.polys = engine.buchberger(self.polys, ring.blocks,
                                               ring.kit, self.budget)
            self.ring = ring
            self.leads = [engine.lead_mono(p, ring.blocks) for p in self.polys]

    def normal_form_info(self, e):
        """(normal form Expr, cleared denominator Expr)."""
        self._ensure_ring(e)
        q, den = to_polynomial(e, self.ring)
        r, num, den2 = engine.reduce_full(q, self.polys, self.leads,
                                          self.ring.blocks, self.ring.kit)
        if not r:
            return Expr.zero(), den
        params = self.ring.ctx.parameters
        if params:
            scale = make_rat(params, den2, num)
        else:
            scale = Fraction(den2, num)
        nf = poly_to_expr(r, self.ring, scale)
        if not (den == Expr.one()):
            nf = nf / den
        return nf, den

    def normal_form(self, e):
        return self.normal_form_info(e)[0]

    def contains(self, e):
        return self.normal_form_info(e)[0].is_zero()

    def contains_saturated(self, e, multipliers, max_power=3):
        """Membership of e in the ideal saturated by the product of the
        multipliers.  Returns (True, power) or (False, None).

        Multipliers that are constants or reduce to zero modulo the basis
        contribute nothing and are skipped; the product is formed at the
        polynomial level so exponential variables stay separate.
        """
        self._ensure_ring(e)
        for m in multipliers:
            self._ensure_ring(m)
        q, _ = to_polynomial(e, self.ring)
        if not q:
            return True, 0
        sat = None
        for m in multipliers:
            mp, _ = to_polynomial(m, self.ring)
            if len(mp) == 1 and not any(next(iter(mp))):
                continue  # constant
            r, _, _ = engine.reduce_full(mp, self.polys, self.leads,
                                         self.ring.blocks, self.ring.kit)
            if not r:
                continue  # vanishes on the system: degenerate, unusable
            sat = mp if sat is None else engine.poly_mul(sat, mp, self.ring.kit)
        r, _, _ = engine.reduce_full(q, self.polys, self.leads,
                                     self.ring.blocks, self.ring.kit)
        if not r:
            return True, 0
        if sat is None:
            return False, None
        cur = q
        for k in range(1, max_power + 1):
            cur = engine.poly_mul(cur, sat, self.ring.kit)
            r, _, _ = engine.reduce_full(cur, self.polys, self.leads,
                                         self.ring.blocks, self.ring.kit)
            if not r:
                return True, k
        return False, None


def groebner(ctx, gens, order="block", budget=DEFAULT_BUDGET, source_cap=None):
    """Reduced Groebner basis of the numerators of gens (plus any root
    relations introduced by fractional exponents)."""
    gens = [g for g in gens if not g.is_zero()]
    ring = build_ring(ctx, gens, order)
    polys = []
    cleared = []
    for g in gens:
        p, den = to_polynomial(g, ring)
        polys.append(p)
        if not (den == Expr.one()):
            cleared.append(den)
    polys.extend(root_relations(ring))
    basis = engine.buchberger(polys, ring.blocks, ring.kit, budget)
    return GroebnerBasis(ring, basis, source_cap, cleared, budget)


# ---------------------------------------------------------------------------
# symbol gcd and resultant (n = 2, m = 1)

def _dehomogenize(comp, ctx):
    """Binary form {sigma: Expr} -> (degree, coefficient list by xi_t power)."""
    d = max(ctx.weight(s) for s in comp)
    coeffs = [Expr.zero()] * (d + 1)
    for s, c in comp.items():
        coeffs[s[0]] = coeffs[s[0]] + c
    return d, coeffs


def _poly_deg(c):
    for i in range(len(c) - 1, -1, -1):
        if not c[i].is_zero():
            return i
    return -1


def _pseudo_rem(a, b):
    """Pseudo-remainder of coefficient lists (univariate, Expr coefficients)."""
    da, db = _poly_deg(a), _poly_deg(b)
    lb = b[db]
    r = list(a)
    dr = da
    while dr >= db:
        lr = r[dr]
        r = [lb * c for c in r]
        for i in range(db + 1):
            r[i + dr - db] = r[i + dr - db] - lr * b[i]
        dr2 = _poly_deg(r)
        if dr2 == dr:
            raise JetCalcError("pseudo-division failed to decrease degree")
        dr = dr2
        if dr < 0:
            break
    return r[:max(dr + 1, 0)]


def _uni_gcd(a, b):
    A, B = list(a), list(b)
    if _poly_deg(A) < _poly_deg(B):
        A, B = B, A
    while _poly_deg(B) >= 0:
        R = _pseudo_rem(A, B)
        A, B = B, R
    return A[:_poly_deg(A) + 1]


def _det(rows):
    """Determinant by first-row expansion, memoized on column subsets."""
    n = len(rows)
    cache = {}

    def rec(r, cols):
        if r == n:
            return Expr.one()
        key = (r, cols)
        if key in cache:
            return cache[key]
        total = Expr.zero()
        sign = 1
        for idx, c in enumerate(cols):
            a = rows[r][c]
            if not a.is_zero():
                sub = rec(r + 1, cols[:idx] + cols[idx + 1:])
                term = a * sub
                total = total + (term if sign > 0 else -term)
            sign = -sign
        cache[key] = total
        return total

    return rec(0, tuple(range(n)))


def symbol_gcd_resultant(p, q):
    """GCD of two binary symbols and a nonzero-resultant flag.

    The gcd is returned as {sigma: Expr} homogeneous of its degree; the flag
    is True iff the resultant of the two (degree-padded) dehomogenizations
    is not identically zero.
    """
    ctx = p.ctx
    if ctx.n_indep != 2 or ctx.n_dep != 1:
        raise JetCalcError("symbol gcd/resultant implemented for n=2, m=1")
    if ctx.weights != (1, 1):
        raise JetCalcError("symbol gcd/resultant needs unit weights "
                           "(binary forms must be homogeneous)")
    if p.is_zero() or q.is_zero():
        raise JetCalcError("zero symbol")
    cp = p.component(0)
    cq = q.component(0)
    dp, ap = _dehomogenize(cp, ctx)
    dq, aq = _dehomogenize(cq, ctx)
    # gcd: common xi_x multiplicity is the common degree defect
    defect = min(dp - _poly_deg(ap), dq - _poly_deg(aq))
    g = _uni_gcd(ap, aq)
    dg = len(g) - 1
    lead = g[dg]
    cv = lead.constant_value()
    if cv is not None:
        g = [c / cv for c in g]
    gdeg = dg + defect
    gcd_comp = {}
    for i, c in enumerate(g):
        if not c.is_zero():
            gcd_comp[(i, gdeg - i)] = c
    # resultant with homogeneous padding (degree-aware Sylvester matrix)
    size = dp + dq
    rows = []
    prow = [ap[dp - i] if 0 <= dp - i <= dp else Expr.zero() for i in range(dp + 1)]
    qrow = [aq[dq - i] if 0 <= dq - i <= dq else Expr.zero() for i in range(dq + 1)]
    for sh in range(dq):
        rows.append([Expr.zero()] * sh + prow + [Expr.zero()] * (size - dp - 1 - sh))
    for sh in range(dp):
        rows.append([Expr.zero()] * sh + qrow + [Expr.zero()] * (size - dq - 1 - sh))
    res = _det(rows) if rows else Expr.one()
    return gcd_comp, gdeg, not res.is_zero()
