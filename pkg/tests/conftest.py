import random
from fractions import Fraction

import pytest

from jetcalc import JetContext, parse
from jetcalc.expr import Expr


@pytest.fixture
def heat():
    return JetContext(independent=("t", "x"), dependent=("u",))


@pytest.fixture
def heat_p():
    return JetContext(independent=("t", "x"), dependent=("u",),
                      parameters=("alpha", "c", "c1", "c2"))


@pytest.fixture
def kpp():
    return JetContext(independent=("t", "x"), dependent=("u",),
                      functions=(("f", 1),))


def random_expr(ctx, rng, max_order=2, max_terms=3, allow_base=True):
    """Small random polynomial expression in jets of order <= max_order."""
    sigmas = ctx.sigmas_bounded(max_order)
    from jetcalc.jet import jet_expr, base_expr
    e = Expr.zero()
    for _ in range(rng.randint(1, max_terms)):
        coeff = Fraction(rng.randint(-3, 3))
        if coeff == 0:
            coeff = Fraction(1)
        term = Expr.const(coeff)
        for _ in range(rng.randint(1, 2)):
            pick = rng.random()
            if allow_base and pick < 0.2:
                term = term * base_expr(ctx, rng.choice(ctx.independent))
            else:
                dep = rng.randrange(ctx.n_dep)
                term = term * jet_expr(ctx, dep, rng.choice(sigmas))
        e = e + term
    return e


@pytest.fixture
def rng():
    return random.Random(20240817)
