"""C-differential operators: linearization, brackets, Hessian.

A CDiffOp is a matrix whose entries map multi-indices to Expr coefficients;
application is sum of coeff * D_sigma.  Scalar operators are 1x1.
"""
from fractions import Fraction
from itertools import permutations
from math import factorial

from .errors import ShapeMismatch, JetCalcError
from .expr import Expr
from .jet import (diff_wrt_jet, jet_occurrences, total_derivative,
                  total_derivative_sigma, weighted_order)


def _perm_sign(p):
    s = 1
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                s = -s
    return s


class CDiffOp:
    __slots__ = ("ctx", "entries", "shape")

    def __init__(self, ctx, entries):
        self.ctx = ctx
        self.entries = tuple(
            tuple({s: c for s, c in ent.items() if not c.is_zero()} for ent in row)
            for row in entries)
        rows = len(self.entries)
        cols = len(self.entries[0]) if rows else 0
        self.shape = (rows, cols)

    # -- constructors

    @staticmethod
    def zero(ctx, rows=1, cols=1):
        return CDiffOp(ctx, [[{} for _ in range(cols)] for _ in range(rows)])

    @staticmethod
    def identity(ctx):
        return CDiffOp(ctx, [[{ctx.zero_sigma(): Expr.one()}]])

    @staticmethod
    def total(ctx, i):
        return CDiffOp(ctx, [[{ctx.unit_sigma(i): Expr.one()}]])

    @staticmethod
    def scalar(ctx, coeffs):
        """Scalar operator from a map sigma -> Expr."""
        return CDiffOp(ctx, [[dict(coeffs)]])

    # -- basic structure

    def entry(self, r=0, c=0):
        return self.entries[r][c]

    def is_zero(self):
        return all(not ent for row in self.entries for ent in row)

    def order(self):
        w = None
        for row in self.entries:
            for ent in row:
                for s in ent:
                    sw = self.ctx.weight(s)
                    w = sw if w is None else max(w, sw)
        return w

    def top_symbol(self, r=0, c=0):
        """Top weighted-order coefficients of one entry: sigma -> Expr."""
        ent = self.entries[r][c]
        if not ent:
            return {}
        top = max(self.ctx.weight(s) for s in ent)
        return {s: c for s, c in ent.items() if self.ctx.weight(s) == top}

    def __eq__(self, other):
        return (isinstance(other, CDiffOp) and self.shape == other.shape
                and self.entries == other.entries)

    def __repr__(self):
        return f"<CDiffOp {self.shape[0]}x{self.shape[1]} {self.text()}>"

    def text(self):
        rows = []
        for row in self.entries:
            cells = []
            for ent in row:
                bits = []
                for s in sorted(ent, key=lambda s: (self.ctx.weight(s), s)):
                    c = ent[s]
                    d = "".join(f"D_{v}" + (f"^{k}" if k > 1 else "")
                                for v, k in zip(self.ctx.independent, s) if k)
                    ct = c.text()
                    if len(c.terms) > 1:
                        ct = f"({ct})"
                    bits.append(d if ct == "1" and d else (ct if not d else f"{ct}*{d}"))
                cells.append(" + ".join(bits) if bits else "0")
            rows.append("[" + ", ".join(cells) + "]")
        return "; ".join(rows)

    # -- algebra

    def __add__(self, other):
        self._check_same_shape(other)
        out = []
        for r1, r2 in zip(self.entries, other.entries):
            row = []
            for e1, e2 in zip(r1, r2):
                ent = dict(e1)
                for s, c in e2.items():
                    ent[s] = ent[s] + c if s in ent else c
                row.append(ent)
            out.append(row)
        return CDiffOp(self.ctx, out)

    def __neg__(self):
        return CDiffOp(self.ctx, [[{s: -c for s, c in ent.items()} for ent in row]
                                  for row in self.entries])

    def __sub__(self, other):
        return self + (-other)

    def scale(self, e):
        e = e if isinstance(e, Expr) else Expr.const(e)
        return CDiffOp(self.ctx, [[{s: c * e for s, c in ent.items()} for ent in row]
                                  for row in self.entries])

    def _check_same_shape(self, other):
        if self.shape != other.shape:
            raise ShapeMismatch(f"operator shapes {self.shape} and {other.shape}")


# ---------------------------------------------------------------------------
# application and composition

def _apply_entry(ctx, ent, e):
    out = Expr.zero()
    for sigma, c in ent.items():
        out = out + c * total_derivative_sigma(ctx, e, sigma)
    return out


def apply_op(op, arg):
    """Apply an operator to an Expr (cols=1) or a sequence of Exprs."""
    ctx = op.ctx
    rows, cols = op.shape
    if isinstance(arg, Expr):
        args = (arg,)
    else:
        args = tuple(arg)
    if len(args) != cols:
        raise ShapeMismatch(f"operator with {cols} columns applied to {len(args)} expressions")
    results = []
    for r in range(rows):
        acc = Expr.zero()
        for c in range(cols):
            acc = acc + _apply_entry(ctx, op.entries[r][c], args[c])
        results.append(acc)
    return results[0] if rows == 1 else tuple(results)


def _di_compose(ctx, i, ent):
    """D_i composed with a scalar coefficient map."""
    out = {}
    for sigma, c in ent.items():
        dc = total_derivative(ctx, c, i)
        if not dc.is_zero():
            out[sigma] = out[sigma] + dc if sigma in out else dc
        s2 = ctx.bump(sigma, i)
        out[s2] = out[s2] + c if s2 in out else c
    return out


def _scalar_compose(ctx, a, b):
    """Composition of scalar coefficient maps: (a o b)(e) = a(b(e))."""
    out = {}
    for tau, c in a.items():
        cur = b
        for i, s in enumerate(tau):
            for _ in range(s):
                cur = _di_compose(ctx, i, cur)
        for sigma, c2 in cur.items():
            v = c * c2
            if v.is_zero():
                continue
            out[sigma] = out[sigma] + v if sigma in out else v
    return out


def compose(a, b):
    """Operator composition: apply(compose(a,b), e) == apply(a, apply(b, e))."""
    if a.shape[1] != b.shape[0]:
        raise ShapeMismatch(f"cannot compose shapes {a.shape} and {b.shape}")
    ctx = a.ctx
    rows, mid, cols = a.shape[0], a.shape[1], b.shape[1]
    out = []
    for r in range(rows):
        row = []
        for c in range(cols):
            ent = {}
            for j in range(mid):
                part = _scalar_compose(ctx, a.entries[r][j], b.entries[j][c])
                for s, v in part.items():
                    ent[s] = ent[s] + v if s in ent else v
            row.append(ent)
        out.append(row)
    return CDiffOp(ctx, out)


def commutator(a, b):
    return compose(a, b) - compose(b, a)


# ---------------------------------------------------------------------------
# linearization and brackets

def linearize(ctx, F):
    """ell_F: row operator whose j-th component is sum_s dF/dp^j_s D_s."""
    row = [dict() for _ in ctx.dependent]
    for k in jet_occurrences(F):
        c = diff_wrt_jet(ctx, F, k.dep, k.sigma)
        if not c.is_zero():
            row[k.dep][k.sigma] = c
    return CDiffOp(ctx, [row])


def lin_component(ctx, F, j):
    """Scalar operator ell_j(F)."""
    return CDiffOp(ctx, [[linearize(ctx, F).entries[0][j]]])


def evolutionary_derivative(ctx, G, F):
    """Evolutionary action of G on F: apply(ell_F, G)."""
    return apply_op(linearize(ctx, F), G)


def jacobi_bracket(ctx, F, G):
    """{F, G} = ell_F(G) - ell_G(F) for one dependent variable."""
    if ctx.n_dep != 1:
        raise ShapeMismatch("Jacobi bracket needs one dependent variable; "
                            "use multi_bracket")
    return apply_op(linearize(ctx, F), G) - apply_op(linearize(ctx, G), F)


def multi_bracket(ctx, ops):
    """Signed permutation sum of composed linearization components applied
    to the remaining operator; reduces to the Jacobi bracket for m = 1."""
    m = ctx.n_dep
    ops = list(ops)
    if len(ops) != m + 1:
        raise ShapeMismatch(f"multi-bracket of {m} dependent variables needs "
                            f"{m + 1} operators, got {len(ops)}")
    lins = [linearize(ctx, F) for F in ops]
    total = Expr.zero()
    for beta in permutations(range(m + 1)):
        sb = _perm_sign(beta)
        for alpha in permutations(range(m)):
            sa = _perm_sign(alpha)
            e = ops[beta[m]]
            for idx in range(m - 1, -1, -1):
                ent = lins[beta[idx]].entries[0][alpha[idx]]
                e = _apply_entry(ctx, ent, e)
            term = e * Fraction(sa * sb, 1)
            total = total + term
    return total * Fraction(1, factorial(m))


def hessian(ctx, F, G, H):
    """Hess_F(G,H) = sum F_{p_s p_t} D_s(G) D_t(H)   (one dependent variable)."""
    if ctx.n_dep != 1:
        raise ShapeMismatch("Hessian defined here for one dependent variable")
    out = Expr.zero()
    dG = {}
    dH = {}

    def ds(e, sigma, cache):
        if sigma not in cache:
            cache[sigma] = total_derivative_sigma(ctx, e, sigma)
        return cache[sigma]

    for k1 in jet_occurrences(F):
        c1 = diff_wrt_jet(ctx, F, 0, k1.sigma)
        if c1.is_zero():
            continue
        for k2 in jet_occurrences(c1):
            c2 = diff_wrt_jet(ctx, c1, 0, k2.sigma)
            if c2.is_zero():
                continue
            out = out + c2 * ds(G, k1.sigma, dG) * ds(H, k2.sigma, dH)
    return out
