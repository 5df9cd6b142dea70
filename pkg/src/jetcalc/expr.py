"""Canonical symbolic expressions over jet coordinates.

An Expr is a canonically ordered sum of terms; a term is an exact
coefficient (Fraction or ParamRat) times a product of kernel powers with
rational exponents.  Construction normalizes: like terms merge, zero terms
drop, exponential kernels combine through their arguments, and the result
is independent of the build path.
"""
from fractions import Fraction

from .coeffs import (ParamRat, coeff_is_zero, coeff_content, frac_root,
                     pz_lead_sign, pz_text, pz_is_const, pz_const_value)
from .errors import ExprError

ONE = Fraction(1)
ZEROF = Fraction(0)


# ---------------------------------------------------------------------------
# kernels

class Kernel:
    """A coordinate on jet space; equality and order via canonical text."""

    __slots__ = ("text", "_hash")

    def __init__(self, text):
        self.text = text
        self._hash = hash(text)

    def __eq__(self, other):
        return self is other or (type(self) is type(other) and self.text == other.text)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return self.text


class BaseVar(Kernel):
    __slots__ = ("name",)

    def __init__(self, name):
        super().__init__(name)
        self.name = name


class JetVar(Kernel):
    __slots__ = ("dep", "sigma", "dep_name")

    def __init__(self, dep, sigma, dep_name, subscript):
        text = dep_name if not any(sigma) else f"{dep_name}_{subscript}"
        super().__init__(text)
        self.dep = dep
        self.sigma = sigma
        self.dep_name = dep_name


class FuncKernel(Kernel):
    __slots__ = ("name", "order", "arg")

    def __init__(self, name, order, arg):
        if order <= 3:
            marks = "'" * order
        else:
            marks = f"^({order})"
        super().__init__(f"{name}{marks}({arg.text()})")
        self.name = name
        self.order = order
        self.arg = arg


class ExpKernel(Kernel):
    __slots__ = ("arg",)

    def __init__(self, arg):
        super().__init__(f"exp({arg.text()})")
        self.arg = arg


# ---------------------------------------------------------------------------
# terms

class Term:
    """coeff * product(kernel ** exponent); factors sorted, exponents nonzero."""

    __slots__ = ("coeff", "factors", "_key")

    def __init__(self, coeff, factors):
        self.coeff = coeff
        self.factors = factors
        self._key = None

    def key(self):
        if self._key is None:
            self._key = tuple((k.text, -e) for k, e in self.factors)
        return self._key


def _coeff_sign(c):
    if isinstance(c, ParamRat):
        return pz_lead_sign(c.num)
    return -1 if c < 0 else (1 if c > 0 else 0)


def _merge_factors(fac1, fac2):
    """Merge two sorted factor tuples, adding exponents of equal kernels."""
    out = []
    i = j = 0
    n1, n2 = len(fac1), len(fac2)
    while i < n1 and j < n2:
        k1, e1 = fac1[i]
        k2, e2 = fac2[j]
        if k1.text == k2.text:
            e = e1 + e2
            if e:
                out.append((k1, e))
            i += 1
            j += 1
        elif k1.text < k2.text:
            out.append(fac1[i])
            i += 1
        else:
            out.append(fac2[j])
            j += 1
    out.extend(fac1[i:])
    out.extend(fac2[j:])
    return out


def _combine_exp_factors(factors):
    """Fold all exponential factors of a term into one canonical factor."""
    exps = [(k, e) for k, e in factors if type(k) is ExpKernel]
    if len(exps) <= 1:
        return factors
    rest = [f for f in factors if type(f[0]) is not ExpKernel]
    total = Expr.zero()
    for k, e in exps:
        total = total + k.arg * e
    folded = exp_power(total)
    if folded is not None:
        rest.append(folded)
        rest.sort(key=lambda f: f[0].text)
    return rest


def exp_power(arg, power=ONE):
    """Canonical (ExpKernel, exponent) for exp(arg)**power, or None if arg=0.

    The argument is scaled primitive: positive rational content pulled into
    the exponent, leading term sign positive.
    """
    if arg.is_zero():
        return None
    terms = arg.terms
    content = None
    for t in terms:
        c = coeff_content(t.coeff)
        content = c if content is None else Fraction(
            # gcd of fractions: gcd of numerators / lcm of denominators
            _igcd(content.numerator, c.numerator),
            _ilcm(content.denominator, c.denominator))
        if content == 1:
            break
    sign = _coeff_sign(terms[0].coeff)
    scale = content * sign
    if scale != 1:
        arg = arg * Fraction(scale.denominator, scale.numerator)
    return ExpKernel(arg), power * scale


def _igcd(a, b):
    from math import gcd
    return gcd(a, b)


def _ilcm(a, b):
    from math import gcd
    return a * b // gcd(a, b)


# ---------------------------------------------------------------------------
# expressions

class Expr:
    __slots__ = ("terms", "_hash", "_text")

    def __init__(self, terms):
        self.terms = terms
        self._hash = None
        self._text = None

    # -- constructors

    @staticmethod
    def zero():
        return _ZERO

    @staticmethod
    def one():
        return _ONE_EXPR

    @staticmethod
    def const(c):
        if isinstance(c, int):
            c = Fraction(c)
        if coeff_is_zero(c):
            return _ZERO
        return Expr((Term(c, ()),))

    @staticmethod
    def kernel(k, exponent=ONE):
        if not isinstance(exponent, Fraction):
            exponent = Fraction(exponent)
        if exponent == 0:
            return _ONE_EXPR
        if type(k) is ExpKernel:
            f = exp_power(k.arg, exponent)
            if f is None:
                return _ONE_EXPR
            return Expr((Term(ONE, (f,)),))
        return Expr((Term(ONE, ((k, exponent),)),))

    @staticmethod
    def from_terms(terms):
        """Normalize an arbitrary iterable of Terms into a canonical Expr."""
        acc = {}
        for t in terms:
            if coeff_is_zero(t.coeff):
                continue
            key = t.key()
            if key in acc:
                prev = acc[key]
                c = prev.coeff + t.coeff
                if coeff_is_zero(c):
                    del acc[key]
                else:
                    acc[key] = Term(c, prev.factors)
            else:
                acc[key] = t
        return Expr(tuple(sorted(acc.values(), key=Term.key)))

    # -- predicates

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1 and not self.terms[0].factors)

    def constant_value(self):
        if not self.terms:
            return ZEROF
        if len(self.terms) == 1 and not self.terms[0].factors:
            return self.terms[0].coeff
        return None

    def is_single_term(self):
        return len(self.terms) == 1

    # -- arithmetic

    def __add__(self, other):
        other = as_expr(other)
        if not self.terms:
            return other
        if not other.terms:
            return self
        return Expr.from_terms(self.terms + other.terms)

    __radd__ = __add__

    def __neg__(self):
        return Expr(tuple(Term(-t.coeff, t.factors) for t in self.terms))

    def __sub__(self, other):
        return self + (-as_expr(other))

    def __rsub__(self, other):
        return as_expr(other) + (-self)

    def __mul__(self, other):
        other = as_expr(other)
        if not self.terms or not other.terms:
            return _ZERO
        out = []
        for t1 in self.terms:
            for t2 in other.terms:
                c = t1.coeff * t2.coeff
                if coeff_is_zero(c):
                    continue
                factors = _merge_factors(t1.factors, t2.factors)
                factors = _combine_exp_factors(factors)
                out.append(Term(c, tuple(factors)))
        return Expr.from_terms(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = as_expr(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero expression")
        if not other.is_single_term():
            raise ExprError("division by a multi-term expression is not representable")
        return self * _invert_term(other.terms[0])

    def __rtruediv__(self, other):
        return as_expr(other) / self

    def __pow__(self, q):
        if isinstance(q, int):
            q = Fraction(q)
        if q == 0:
            return _ONE_EXPR
        if q.denominator == 1 and q >= 1:
            n = q.numerator
            result = _ONE_EXPR
            base = self
            while n:
                if n & 1:
                    result = result * base
                base = base * base if n > 1 else base
                n >>= 1
            return result
        if self.is_single_term():
            return Expr.from_terms([_pow_term(self.terms[0], q)])
        raise ExprError(f"power {q} of a multi-term expression is not representable")

    def __eq__(self, other):
        if isinstance(other, Expr):
            if len(self.terms) != len(other.terms):
                return False
            for a, b in zip(self.terms, other.terms):
                if a.coeff != b.coeff or a.key() != b.key():
                    return False
            return True
        if isinstance(other, (int, Fraction)):
            return self == Expr.const(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple((t.coeff, t.key()) for t in self.terms))
        return self._hash

    def __repr__(self):
        return f"<Expr {self.text()}>"

    # -- structure

    def factor_kernels(self):
        """Kernels appearing as factors (not descending into arguments)."""
        seen = {}
        for t in self.terms:
            for k, _ in t.factors:
                seen[k.text] = k
        return list(seen.values())

    def all_kernels(self):
        """Kernels appearing anywhere, including inside func/exp arguments."""
        seen = {}

        def visit(e):
            for t in e.terms:
                for k, _ in t.factors:
                    if k.text not in seen:
                        seen[k.text] = k
                        if isinstance(k, (FuncKernel, ExpKernel)):
                            visit(k.arg)
        visit(self)
        return list(seen.values())

    def jet_vars(self):
        return [k for k in self.all_kernels() if type(k) is JetVar]

    # -- rendering

    def text(self):
        if self._text is None:
            self._text = _render(self)
        return self._text


_ZERO = Expr(())
_ONE_EXPR = Expr((Term(ONE, ()),))


def as_expr(x):
    if isinstance(x, Expr):
        return x
    if isinstance(x, (int, Fraction, ParamRat)):
        return Expr.const(x)
    raise TypeError(f"cannot interpret {x!r} as an expression")


def _invert_term(t):
    c = t.coeff
    if isinstance(c, ParamRat):
        inv = 1 / c
    else:
        inv = Fraction(c.denominator, c.numerator)
    return Expr((Term(inv, tuple((k, -e) for k, e in t.factors)),))


def _pow_term(t, q):
    c = t.coeff
    if isinstance(c, ParamRat):
        if q.denominator != 1:
            raise ExprError("fractional power of a parameter coefficient")
        new_c = c ** q.numerator
    else:
        if q.denominator == 1:
            new_c = c ** q.numerator
        else:
            root = frac_root(c, q.denominator)
            if root is None:
                raise ExprError(f"no exact rational root of coefficient {c}")
            new_c = root ** q.numerator
    factors = []
    exp_fold = None
    for k, e in t.factors:
        if type(k) is ExpKernel:
            exp_fold = exp_power(k.arg, e * q)
        else:
            factors.append((k, e * q))
    if exp_fold is not None:
        factors.append(exp_fold)
        factors.sort(key=lambda f: f[0].text)
    return Term(new_c, tuple(factors))


def sqrt_expr(e):
    return e ** Fraction(1, 2)


# ---------------------------------------------------------------------------
# coordinate partial derivative and substitution

def partial_derivative(e, kernel):
    """d e / d kernel, treating every kernel as an independent coordinate."""
    out = []
    for t in e.terms:
        for i, (k, q) in enumerate(t.factors):
            if k == kernel:
                rest = t.factors[:i] + t.factors[i + 1:]
                if q != 1:
                    rest = tuple(sorted(rest + ((k, q - 1),), key=lambda f: f[0].text))
                out.append(Term(t.coeff * q, rest))
                break
    return Expr.from_terms(out)


def substitute(e, bindings):
    """Simultaneous single-pass substitution kernel -> Expr, then renormalize.

    Arguments of function/exponential kernels are substituted recursively
    before the rebuilt kernel itself is looked up.
    """
    if not bindings:
        return e
    table = {k.text: (k, v) for k, v in bindings.items()}
    return _subst(e, table)


def _subst(e, table):
    out = Expr.zero()
    for t in e.terms:
        acc = Expr.const(t.coeff)
        for k, q in t.factors:
            acc = acc * _subst_factor(k, q, table)
            if acc.is_zero():
                break
        out = out + acc
    return out


def _subst_factor(k, q, table):
    k2 = k
    if isinstance(k, (FuncKernel, ExpKernel)):
        arg2 = _subst(k.arg, table)
        if not (arg2 == k.arg):
            if type(k) is FuncKernel:
                k2 = FuncKernel(k.name, k.order, arg2)
            else:
                f = exp_power(arg2, q)
                if f is None:
                    return Expr.one()
                k2, q = f
    hit = table.get(k2.text)
    if hit is not None:
        return hit[1] ** q
    return Expr.kernel(k2, q)


# ---------------------------------------------------------------------------
# canonical text

def _coeff_text(c):
    """Multiplier text for a positive coefficient; '' when it is 1."""
    if isinstance(c, ParamRat):
        num = c.num
        den = c.den
        ntext = pz_text(num, c.params)
        if len(num) > 1:
            ntext = f"({ntext})"
        if pz_is_const(den):
            d = pz_const_value(den)
            return ntext if d == 1 else f"{ntext}/{d}"
        dtext = pz_text(den, c.params)
        return f"{ntext}/({dtext})"
    if c == 1:
        return ""
    if c.denominator == 1:
        return str(c.numerator)
    return f"({c.numerator}/{c.denominator})"


def _factor_text(k, e):
    if type(k) is ExpKernel:
        body = (k.arg * abs(e)).text() if abs(e) != 1 else k.arg.text()
        base = f"exp({body})"
        return base if e > 0 else f"{base}^(-1)"
    if e == 1:
        return k.text
    if e.denominator == 1 and e > 0:
        return f"{k.text}^{e.numerator}"
    return f"{k.text}^({e})"


def _render(e):
    if not e.terms:
        return "0"
    parts = []
    for t in e.terms:
        sign = _coeff_sign(t.coeff)
        c = -t.coeff if sign < 0 else t.coeff
        ct = _coeff_text(c)
        bits = [ct] if ct else []
        bits.extend(_factor_text(k, q) for k, q in t.factors)
        body = "*".join(bits) if bits else "1"
        if not parts:
            parts.append(body if sign > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if sign > 0 else f"- {body}")
    return " ".join(parts)
