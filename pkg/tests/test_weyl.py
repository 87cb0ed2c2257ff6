import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from charp_diffops.parsing import ParseError
from charp_diffops.poly import Ambient, Polynomial, random_poly
from charp_diffops.weyl import WeylOp, parse_weyl, weyl_apply, weyl_dual, weyl_eval, weyl_mul

A5 = Ambient.standard(5, 2)
A7 = Ambient.standard(7, 3)


def random_op(ambient, rng, terms=3, deg=3):
    out = {}
    for _ in range(terms):
        a = tuple(rng.randint(0, deg) for _ in range(ambient.n))
        b = tuple(rng.randint(0, deg) for _ in range(ambient.n))
        out[(a, b)] = rng.randrange(1, ambient.p)
    return WeylOp(ambient, out)


def weyl_ops(ambient):
    idx = st.tuples(*[st.integers(0, 3)] * ambient.n)
    return st.dictionaries(st.tuples(idx, idx), st.integers(1, ambient.p - 1), max_size=3).map(
        lambda d: WeylOp(ambient, d))


def test_defining_relations():
    d1, x1 = WeylOp.d(A5, 1), WeylOp.x(A5, 1)
    assert d1 * x1 == x1 * d1 + 1
    assert str(d1 * x1) == "x1*D1 + 1"
    assert d1 * d1 == 2 * WeylOp.d(A5, 1, 2)
    assert (d1**5).is_zero()
    # [d^[k], x_j] = delta_ij d^[k-1]
    for k in range(1, 7):
        dk = WeylOp.d(A5, 1, k)
        assert dk * x1 - x1 * dk == WeylOp.d(A5, 1, k - 1)
        assert (WeylOp.d(A5, 2, k) * x1 - x1 * WeylOp.d(A5, 2, k)).is_zero()


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_first_partial_is_nilpotent_of_order_p(p):
    A = Ambient.standard(p, 1)
    d = WeylOp.d(A, 1)
    assert not (d ** (p - 1)).is_zero()
    assert (d**p).is_zero()


def test_calculator_examples():
    assert weyl_eval("D1 * x1", A5) == "x1*D1 + 1"
    assert weyl_eval("D1^5", A5) == "0"
    assert weyl_eval("x1 + x1", A5) == "2*x1"
    assert weyl_eval("D1^[2] * D1^[3]", A5) == "0"
    assert weyl_eval("(x2 + D2)^2", A5) == "2*D2^[2] + 2*x2*D2 + x2^2 + 1"
    with pytest.raises(ParseError):
        parse_weyl("D3", A5)
    with pytest.raises(ParseError):
        parse_weyl("x1^[2]", A5)


def test_dual_examples():
    d1, x1 = WeylOp.d(A5, 1), WeylOp.x(A5, 1)
    assert weyl_dual(d1) == -d1
    assert weyl_dual(x1) == x1
    u = x1 * WeylOp.d(A5, 1, 2)
    assert weyl_dual(weyl_dual(u)) == u


def test_apply_examples():
    x = A5.var(0)
    assert weyl_apply(WeylOp.d(A5, 1, 2), x**7) == x**5
    f = random_poly(A5, random.Random(1), 5)
    assert weyl_apply(WeylOp.scalar(A5, 1), f) == f
    assert weyl_apply(WeylOp.x(A5, 1) * WeylOp.d(A5, 1), x) == x


@pytest.mark.parametrize("ambient", [A5, A7], ids=["p5n2", "p7n3"])
def test_associativity_and_distributivity(ambient):
    rng = random.Random(ambient.p)
    for _ in range(200):
        u, v, w = (random_op(ambient, rng) for _ in range(3))
        assert (u * v) * w == u * (v * w)
        assert u * (v + w) == u * v + u * w
        assert (u + v) * w == u * w + v * w


@pytest.mark.parametrize("ambient", [A5, A7], ids=["p5n2", "p7n3"])
def test_dual_is_involutive_antihomomorphism(ambient):
    rng = random.Random(ambient.p + 1)
    for _ in range(100):
        u, v = random_op(ambient, rng), random_op(ambient, rng)
        assert weyl_dual(u * v) == weyl_dual(v) * weyl_dual(u)
        assert weyl_dual(weyl_dual(u)) == u


@given(weyl_ops(A5), weyl_ops(A5))
def test_filtration(u, v):
    if not (u * v).is_zero():
        assert (u * v).order() <= u.order() + v.order()


@given(weyl_ops(A5), weyl_ops(A5), st.integers(0, 50))
def test_action_is_a_module_action(u, v, seed):
    f = random_poly(A5, random.Random(seed), 6)
    assert weyl_apply(weyl_mul(u, v), f) == weyl_apply(u, weyl_apply(v, f))


@given(weyl_ops(A7))
def test_print_parse_roundtrip(u):
    assert parse_weyl(str(u), A7) == u


def test_polynomial_coercion():
    f = Polynomial.from_terms(A5, {(1, 1): 2})
    assert WeylOp.from_poly(f) * WeylOp.d(A5, 2) == parse_weyl("2*x1*x2*D2", A5)
