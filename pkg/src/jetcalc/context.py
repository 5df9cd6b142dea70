"""Jet-space declarations: variables, weights, parameters, function symbols.

Multi-indices are plain tuples of non-negative ints, one slot per
independent variable; all orders are weighted orders.
"""
from dataclasses import dataclass, field

from .errors import UndeclaredIdentifier, DerivativeCapExceeded

RESERVED = {"D", "exp", "sqrt", "cosh", "sinh"}

DEFAULT_DERIV_CAP = 8


@dataclass(frozen=True)
class JetContext:
    independent: tuple
    dependent: tuple
    weights: tuple = ()
    parameters: tuple = ()
    functions: tuple = ()          # ((name, arity), ...)
    deriv_cap: int = DEFAULT_DERIV_CAP

    def __post_init__(self):
        indep = tuple(self.independent)
        dep = tuple(self.dependent)
        weights = tuple(self.weights) if self.weights else (1,) * len(indep)
        params = tuple(self.parameters)
        funcs = tuple((n, int(a)) for n, a in self.functions)
        object.__setattr__(self, "independent", indep)
        object.__setattr__(self, "dependent", dep)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "parameters", params)
        object.__setattr__(self, "functions", funcs)
        if not indep or not dep:
            raise ValueError("need at least one independent and one dependent variable")
        if len(weights) != len(indep):
            raise ValueError("weights length must match independent variables")
        if any(w < 1 for w in weights):
            raise ValueError("weights must be >= 1")
        for v in indep:
            if len(v) != 1 or not v.isalpha():
                raise ValueError(f"independent variable {v!r} must be a single letter")
        names = list(indep) + list(dep) + list(params) + [n for n, _ in funcs]
        if len(set(names)) != len(names):
            raise ValueError("declared names must be pairwise distinct")
        clash = set(names) & RESERVED
        if clash:
            raise ValueError(f"reserved names declared: {sorted(clash)}")
        if self.deriv_cap < 1:
            raise ValueError("derivative cap must be positive")

    # -- lookups ------------------------------------------------------------

    @property
    def n_indep(self):
        return len(self.independent)

    @property
    def n_dep(self):
        return len(self.dependent)

    def indep_index(self, name):
        try:
            return self.independent.index(name)
        except ValueError:
            raise UndeclaredIdentifier(f"unknown independent variable {name!r}") from None

    def dep_index(self, name):
        try:
            return self.dependent.index(name)
        except ValueError:
            raise UndeclaredIdentifier(f"unknown dependent variable {name!r}") from None

    def func_arity(self, name):
        for n, a in self.functions:
            if n == name:
                return a
        raise UndeclaredIdentifier(f"unknown function symbol {name!r}")

    def is_function(self, name):
        return any(n == name for n, _ in self.functions)

    def check_func_order(self, name, order):
        if order > self.deriv_cap:
            raise DerivativeCapExceeded(
                f"derivative order {order} of {name!r} exceeds cap {self.deriv_cap}")

    # -- multi-indices ------------------------------------------------------

    def zero_sigma(self):
        return (0,) * self.n_indep

    def unit_sigma(self, i):
        s = [0] * self.n_indep
        s[i] = 1
        return tuple(s)

    def weight(self, sigma):
        return sum(w * s for w, s in zip(self.weights, sigma))

    def bump(self, sigma, i):
        sigma = sigma[:i] + (sigma[i] + 1,) + sigma[i + 1:]
        if self.weight(sigma) > self.deriv_cap:
            raise DerivativeCapExceeded(
                f"jet order {self.weight(sigma)} exceeds cap {self.deriv_cap}")
        return sigma

    def subscript(self, sigma):
        return "".join(v * s for v, s in zip(self.independent, sigma))

    def sigmas_bounded(self, wbound):
        """All multi-indices of weighted order <= wbound, graded-lex order."""
        out = []
        n = self.n_indep

        def rec(prefix, i, remaining):
            if i == n - 1:
                top = remaining // self.weights[i]
                for s in range(top + 1):
                    out.append(prefix + (s,))
                return
            top = remaining // self.weights[i]
            for s in range(top + 1):
                rec(prefix + (s,), i + 1, remaining - s * self.weights[i])

        rec((), 0, wbound)
        out.sort(key=lambda s: (self.weight(s), s))
        return out
