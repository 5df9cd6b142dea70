"""Exact coefficient arithmetic.

Coefficients of expression terms are either plain ``fractions.Fraction``
(no parameters involved) or :class:`ParamRat`, a reduced ratio of
integer-coefficient polynomials in the declared parameter symbols.
Parameter polynomials are dicts mapping exponent tuples to ints.
"""
from fractions import Fraction
from math import gcd as igcd


# ---------------------------------------------------------------------------
# integer-coefficient parameter polynomials (dict: exponent tuple -> int)

def pz_const(c, nvars):
    return {(0,) * nvars: c} if c else {}

def pz_var(i, nvars):
    e = [0] * nvars
    e[i] = 1
    return {tuple(e): 1}

def pz_is_const(p):
    return all(all(x == 0 for x in m) for m in p)

def pz_const_value(p):
    if not p:
        return 0
    ((m, c),) = p.items()
    return c

def pz_add(a, b):
    r = dict(a)
    for m, c in b.items():
        s = r.get(m, 0) + c
        if s:
            r[m] = s
        else:
            r.pop(m, None)
    return r

def pz_neg(a):
    return {m: -c for m, c in a.items()}

def pz_sub(a, b):
    return pz_add(a, pz_neg(b))

def pz_mul(a, b):
    r = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = tuple(x + y for x, y in zip(ma, mb))
            s = r.get(m, 0) + ca * cb
            if s:
                r[m] = s
            else:
                r.pop(m, None)
    return r

def pz_scale(a, k):
    if k == 0:
        return {}
    return {m: c * k for m, c in a.items()}

def pz_icontent(a):
    g = 0
    for c in a.values():
        g = igcd(g, abs(c))
        if g == 1:
            break
    return g

def pz_lead_sign(a):
    """Sign of the coefficient at the lex-largest monomial."""
    if not a:
        return 0
    return 1 if a[max(a)] > 0 else -1

def _pz_split(p, v):
    """View p as univariate in variable v: degree -> coefficient poly."""
    out = {}
    for m, c in p.items():
        d = m[v]
        rest = m[:v] + (0,) + m[v + 1:]
        layer = out.setdefault(d, {})
        s = layer.get(rest, 0) + c
        if s:
            layer[rest] = s
        else:
            layer.pop(rest, None)
    return {d: layer for d, layer in out.items() if layer}

def _pz_join(split, v):
    out = {}
    for d, layer in split.items():
        for rest, c in layer.items():
            m = rest[:v] + (d,) + rest[v + 1:]
            out[m] = c
    return out

def _pz_used_var(p):
    for m in p:
        for i, e in enumerate(m):
            if e:
                return i
    return None

def pz_divexact(a, b):
    """Exact division a/b; raises ValueError if not exact."""
    if not b:
        raise ZeroDivisionError("parameter polynomial division by zero")
    if not a:
        return {}
    q = {}
    r = dict(a)
    mb = max(b)
    cb = b[mb]
    while r:
        mr = max(r)
        cr = r[mr]
        m = tuple(x - y for x, y in zip(mr, mb))
        if any(x < 0 for x in m) or cr % cb:
            raise ValueError("inexact parameter polynomial division")
        c = cr // cb
        q[m] = c
        for mbb, cbb in b.items():
            mm = tuple(x + y for x, y in zip(m, mbb))
            s = r.get(mm, 0) - c * cbb
            if s:
                r[mm] = s
            else:
                r.pop(mm, None)
    return q

def _pz_prem(a, b, v):
    """Pseudo-remainder of a by b in variable v."""
    sa = _pz_split(a, v)
    sb = _pz_split(b, v)
    db = max(sb)
    lb = sb[db]
    while sa and max(sa) >= db:
        da = max(sa)
        la = sa[da]
        new = {}
        for d, c in sa.items():
            if d != da:
                new[d] = pz_mul(lb, c)
        for d, c in sb.items():
            if d != db:
                dd = d + da - db
                t = pz_mul(la, c)
                cur = new.get(dd)
                new[dd] = pz_sub(cur, t) if cur is not None else pz_neg(t)
        sa = {d: c for d, c in new.items() if c}
    return _pz_join(sa, v)

def _pz_content_in(p, v):
    g = {}
    for layer in _pz_split(p, v).values():
        g = pz_gcd(g, layer)
    return g

def pz_gcd(a, b):
    """GCD of parameter polynomials, primitive PRS; lex-lead positive."""
    if not a:
        return a if not b else (b if pz_lead_sign(b) > 0 else pz_neg(b))
    if not b:
        return a if pz_lead_sign(a) > 0 else pz_neg(a)
    va, vb = _pz_used_var(a), _pz_used_var(b)
    if va is None and vb is None:
        return pz_const(igcd(pz_const_value(a), pz_const_value(b)), len(next(iter(a))))
    if va is None or vb is None:
        # one side constant: gcd = gcd of integer contents
        nv = len(next(iter(a)))
        return pz_const(igcd(pz_icontent(a), pz_icontent(b)), nv)
    v = min(va, vb)
    ca = _pz_content_in(a, v)
    cb = _pz_content_in(b, v)
    cg = pz_gcd(ca, cb)
    A = pz_divexact(a, ca)
    B = pz_divexact(b, cb)
    while B:
        R = _pz_prem(A, B, v)
        if R:
            R = pz_divexact(R, _pz_content_in(R, v))
        A, B = B, R
    if pz_lead_sign(A) < 0:
        A = pz_neg(A)
    g = pz_mul(cg, A)
    return g

def pz_pow(a, k):
    r = pz_const(1, len(next(iter(a)))) if a else {}
    for _ in range(k):
        r = pz_mul(r, a)
    return r

_SUP = {1: ""}

def pz_text(p, params):
    """Canonical text, lex-descending monomials: '2*a^2*b - 3'."""
    if not p:
        return "0"
    parts = []
    for m in sorted(p, reverse=True):
        c = p[m]
        facs = []
        for name, e in zip(params, m):
            if e == 1:
                facs.append(name)
            elif e:
                facs.append(f"{name}^{e}")
        if not facs:
            body = str(abs(c))
        elif abs(c) == 1:
            body = "*".join(facs)
        else:
            body = "*".join([str(abs(c))] + facs)
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(parts)


# ---------------------------------------------------------------------------
# reduced ratios of parameter polynomials

class ParamRat:
    """Reduced ratio num/den of integer polynomials in fixed parameters.

    Instances always involve at least one parameter; parameter-free values
    are demoted to Fraction by :func:`make_rat`.
    """

    __slots__ = ("params", "num", "den", "_hash")

    def __init__(self, params, num, den):
        self.params = params
        self.num = num
        self.den = den
        self._hash = None

    # -- construction

    @staticmethod
    def var(params, name):
        i = params.index(name)
        n = len(params)
        return ParamRat(params, pz_var(i, n), pz_const(1, n))

    def _lift(self, other):
        if isinstance(other, ParamRat):
            if other.params != self.params:
                raise ValueError("mixed parameter namespaces")
            return other
        if isinstance(other, (int, Fraction)):
            f = Fraction(other)
            n = len(self.params)
            return ParamRat(self.params, pz_const(f.numerator, n),
                            pz_const(f.denominator, n))
        return None

    # -- predicates

    def is_zero(self):
        return not self.num

    # -- arithmetic

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        num = pz_add(pz_mul(self.num, o.den), pz_mul(o.num, self.den))
        return make_rat(self.params, num, pz_mul(self.den, o.den))

    __radd__ = __add__

    def __neg__(self):
        return ParamRat(self.params, pz_neg(self.num), self.den)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return make_rat(self.params, pz_mul(self.num, o.num),
                        pz_mul(self.den, o.den))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if not o.num:
            raise ZeroDivisionError("division by zero coefficient")
        return make_rat(self.params, pz_mul(self.num, o.den),
                        pz_mul(self.den, o.num))

    def __rtruediv__(self, other):
        o = self._lift(other)
        return o / self

    def __pow__(self, k):
        if not isinstance(k, int):
            if isinstance(k, Fraction) and k.denominator == 1:
                k = k.numerator
            else:
                raise ValueError("parameter coefficients allow integer powers only")
        if k >= 0:
            return make_rat(self.params, pz_pow(self.num, k), pz_pow(self.den, k))
        return make_rat(self.params, pz_pow(self.den, -k), pz_pow(self.num, -k))

    # -- identity

    def __eq__(self, other):
        if isinstance(other, ParamRat):
            return (self.params == other.params and self.num == other.num
                    and self.den == other.den)
        if isinstance(other, (int, Fraction)):
            return False  # reduced ParamRat is never parameter-free
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((tuple(sorted(self.num.items())),
                               tuple(sorted(self.den.items()))))
        return self._hash

    def __repr__(self):
        return f"ParamRat({self.as_text()})"

    # -- rendering

    def as_text(self):
        n = pz_text(self.num, self.params)
        if pz_is_const(self.den):
            d = pz_const_value(self.den)
            return n if d == 1 else f"({n})/{d}"
        return f"({n})/({pz_text(self.den, self.params)})"

    def content(self):
        """Positive rational content: self/content has coprime integer parts."""
        cn = pz_icontent(self.num)
        cd = pz_icontent(self.den)
        return Fraction(cn, cd)


def make_rat(params, num, den):
    """Reduce and normalize; demote parameter-free results to Fraction."""
    if not num:
        return Fraction(0)
    if pz_lead_sign(den) < 0:
        num, den = pz_neg(num), pz_neg(den)
    g = pz_gcd(num, den)
    if not pz_is_const(g) or pz_const_value(g) != 1:
        num = pz_divexact(num, g)
        den = pz_divexact(den, g)
    if pz_is_const(num) and pz_is_const(den):
        return Fraction(pz_const_value(num), pz_const_value(den))
    return ParamRat(params, num, den)


def coeff_is_zero(c):
    if isinstance(c, ParamRat):
        return c.is_zero()
    return c == 0


def coeff_content(c):
    """Positive rational content of a coefficient."""
    if isinstance(c, ParamRat):
        return c.content()
    return abs(c) if c else Fraction(0)


def frac_root(c, k):
    """Exact k-th root of a positive Fraction, or None."""
    if c <= 0:
        return None
    n = round(c.numerator ** (1.0 / k))
    d = round(c.denominator ** (1.0 / k))
    for dn in (n - 1, n, n + 1):
        for dd in (d - 1, d, d + 1):
            if dn > 0 and dd > 0 and Fraction(dn ** k, dd ** k) == c:
                return Fraction(dn, dd)
    return None
