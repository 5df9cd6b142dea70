"""Expression grammar, parser, canonical printer, and context configuration.

Grammar (UTF-8 text, '*' mandatory between factors):
  rationals 3, 1/2; parameters; dependent names bare (u) or with jet
  subscripts (u_txx) or bracket multi-indices (u[1,2]); function symbols
  f(u), f'(u), f''(u), f^(k)(u); builtins exp, sqrt, cosh, sinh; total
  derivatives D_t(...), D_x(...); operators + - * / ^ and parentheses.
"""
import json
from fractions import Fraction

from .coeffs import ParamRat
from .context import JetContext
from .errors import ParseError, UndeclaredIdentifier
from .expr import Expr, BaseVar, FuncKernel, exp_power, sqrt_expr
from .jet import make_jet, total_derivative

BUILTINS = ("exp", "sqrt", "cosh", "sinh")


# ---------------------------------------------------------------------------
# tokenizer

class _Tok:
    __slots__ = ("kind", "value", "line", "col")

    def __init__(self, kind, value, line, col):
        self.kind = kind
        self.value = value
        self.line = line
        self.col = col

    def __repr__(self):
        return f"{self.kind}:{self.value!r}"


def _tokenize(src):
    toks = []
    i = 0
    line = 1
    col = 1
    n = len(src)
    while i < n:
        ch = src[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch.isspace():
            i += 1
            col += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and src[j].isdigit():
                j += 1
            toks.append(_Tok("int", int(src[i:j]), line, col))
            col += j - i
            i = j
            continue
        if ch.isalpha():
            j = i
            while j < n and src[j].isalnum():
                j += 1
            base = src[i:j]
            sub = None
            if j < n and src[j] == "_" and j + 1 < n and src[j + 1].isalpha():
                k = j + 1
                while k < n and src[k].isalpha():
                    k += 1
                sub = src[j + 1:k]
                j = k
            primes = 0
            while j < n and src[j] == "'":
                primes += 1
                j += 1
            toks.append(_Tok("name", (base, sub, primes), line, col))
            col += j - i
            i = j
            continue
        if ch in "+-*/^()[],=":
            toks.append(_Tok(ch, ch, line, col))
            i += 1
            col += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", line, col)
    toks.append(_Tok("end", None, line, col))
    return toks


# ---------------------------------------------------------------------------
# parser

class _Parser:
    def __init__(self, src, ctx):
        self.toks = _tokenize(src)
        self.pos = 0
        self.ctx = ctx

    def peek(self, ahead=0):
        return self.toks[min(self.pos + ahead, len(self.toks) - 1)]

    def take(self, kind=None):
        t = self.toks[self.pos]
        if kind is not None and t.kind != kind:
            raise ParseError(f"unexpected token {t.value!r}", t.line, t.col,
                             expected=kind)
        self.pos += 1
        return t

    def fail(self, msg, expected=None):
        t = self.peek()
        raise ParseError(msg, t.line, t.col, expected=expected)

    # expr := term (('+'|'-') term)*
    def expr(self):
        e = self.term()
        while self.peek().kind in "+-":
            op = self.take().kind
            rhs = self.term()
            e = e + rhs if op == "+" else e - rhs
        return e

    # term := ['-'|'+'] power (('*'|'/') power)*
    def term(self):
        neg = False
        while self.peek().kind in "+-":
            if self.take().kind == "-":
                neg = not neg
        e = self.power()
        while self.peek().kind in "*/":
            op = self.take().kind
            rhs = self.power()
            e = e * rhs if op == "*" else e / rhs
        return -e if neg else e

    # power := atom ['^' exponent]
    def power(self):
        e = self.atom()
        if self.peek().kind == "^":
            self.take()
            e = e ** self.exponent()
        return e

    def exponent(self):
        t = self.peek()
        if t.kind == "int":
            return Fraction(self.take().value)
        if t.kind == "(":
            self.take()
            sign = 1
            if self.peek().kind == "-":
                self.take()
                sign = -1
            num = self.take("int").value
            den = 1
            if self.peek().kind == "/":
                self.take()
                den = self.take("int").value
            self.take(")")
            return Fraction(sign * num, den)
        self.fail("malformed exponent", expected="integer or (rational)")

    def atom(self):
        t = self.peek()
        if t.kind == "int":
            return Expr.const(self.take().value)
        if t.kind == "(":
            self.take()
            e = self.expr()
            self.take(")")
            return e
        if t.kind == "name":
            return self.name_atom()
        self.fail(f"unexpected token {t.value!r}",
                  expected="number, name or parenthesis")

    def name_atom(self):
        ctx = self.ctx
        t = self.take("name")
        base, sub, primes = t.value

        if base == "D":
            if sub is None:
                raise ParseError("total derivative needs a variable subscript",
                                 t.line, t.col, expected="D_<var>(...)")
            self.take("(")
            e = self.expr()
            self.take(")")
            for v in sub:
                if v not in ctx.independent:
                    raise ParseError(f"unknown derivative direction {v!r}",
                                     t.line, t.col)
                e = total_derivative(ctx, e, ctx.indep_index(v))
            return e

        if base in BUILTINS:
            if sub or primes:
                raise ParseError(f"malformed builtin {base!r}", t.line, t.col)
            self.take("(")
            e = self.expr()
            self.take(")")
            if base == "sqrt":
                return sqrt_expr(e)
            f = exp_power(e)
            pos = Expr.one() if f is None else Expr.kernel(*f)
            if base == "exp":
                return pos
            negf = exp_power(e, Fraction(-1))
            neg = Expr.one() if negf is None else Expr.kernel(*negf)
            half = Fraction(1, 2)
            if base == "cosh":
                return half * pos + half * neg
            return half * pos - half * neg

        if sub is not None:
            if base not in ctx.dependent:
                raise ParseError(f"{base!r} is not a dependent variable",
                                 t.line, t.col)
            dep = ctx.dep_index(base)
            sigma = [0] * ctx.n_indep
            for v in sub:
                if v not in ctx.independent:
                    raise ParseError(f"unknown jet subscript {v!r} in "
                                     f"{base}_{sub}", t.line, t.col)
                sigma[ctx.indep_index(v)] += 1
            if primes:
                raise ParseError("prime marks apply to function symbols only",
                                 t.line, t.col)
            return Expr.kernel(make_jet(ctx, dep, tuple(sigma)))

        if ctx.is_function(base) or primes:
            if not ctx.is_function(base):
                raise ParseError(f"{base!r} is not a declared function symbol",
                                 t.line, t.col)
            order = primes
            # general derivative marker f^(k)(arg)
            if (not primes and self.peek().kind == "^"
                    and self.peek(1).kind == "(" and self.peek(2).kind == "int"
                    and self.peek(3).kind == ")" and self.peek(4).kind == "("):
                self.take("^")
                self.take("(")
                order = self.take("int").value
                self.take(")")
            ctx.check_func_order(base, order)
            self.take("(")
            arg = self.expr()
            self.take(")")
            return Expr.kernel(FuncKernel(base, order, arg))

        if base in ctx.dependent:
            dep = ctx.dep_index(base)
            if self.peek().kind == "[":
                self.take()
                sigma = [self.take("int").value]
                while self.peek().kind == ",":
                    self.take()
                    sigma.append(self.take("int").value)
                self.take("]")
                if len(sigma) != ctx.n_indep:
                    raise ParseError(
                        f"multi-index length {len(sigma)} does not match "
                        f"{ctx.n_indep} independent variables", t.line, t.col)
                return Expr.kernel(make_jet(ctx, dep, tuple(sigma)))
            return Expr.kernel(make_jet(ctx, dep, ctx.zero_sigma()))

        if base in ctx.independent:
            return Expr.kernel(BaseVar(base))

        if base in ctx.parameters:
            return Expr.const(ParamRat.var(ctx.parameters, base))

        raise ParseError(f"undeclared identifier {base!r}", t.line, t.col)


def parse(src, ctx):
    """Parse source text into a normalized Expr."""
    p = _Parser(src, ctx)
    e = p.expr()
    p.take("end")
    return e


def parse_rule(src, ctx):
    """Parse a solved equation 'lead = rhs' into (JetVar kernel, Expr)."""
    p = _Parser(src, ctx)
    lead = p.atom()
    if not (lead.is_single_term() and len(lead.terms[0].factors) == 1
            and lead.terms[0].coeff == 1):
        p.fail("left side must be a single jet variable")
    kernel, exp = lead.terms[0].factors[0]
    from .expr import JetVar
    if type(kernel) is not JetVar or exp != 1:
        p.fail("left side must be a single jet variable")
    p.take("=")
    rhs = p.expr()
    p.take("end")
    return kernel, rhs


def format_expr(e):
    """Canonical deterministic text; parse(format_expr(e)) == e."""
    return e.text()


# ---------------------------------------------------------------------------
# context configuration

def context_from_dict(doc):
    if not isinstance(doc, dict):
        raise UndeclaredIdentifier("context configuration must be an object")
    known = {"independent", "weights", "dependent", "parameters", "functions",
             "derivCap"}
    extra = set(doc) - known
    if extra:
        raise UndeclaredIdentifier(f"unknown context keys: {sorted(extra)}")
    funcs = tuple((f["name"], f.get("arity", 1))
                  for f in doc.get("functions", ()))
    return JetContext(
        independent=tuple(doc["independent"]),
        dependent=tuple(doc["dependent"]),
        weights=tuple(doc.get("weights", ())),
        parameters=tuple(doc.get("parameters", ())),
        functions=funcs,
        deriv_cap=doc.get("derivCap", 8),
    )


def load_context(path):
    with open(path, "r", encoding="utf-8") as fh:
        return context_from_dict(json.load(fh))
