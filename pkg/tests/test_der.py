import random

import pytest

from charp_diffops.der import (Derivation, LocDerivation, apply_derivation, build_det_derivation,
                               check_descends, derivation_generators, membership_der,
                               membership_from_values, reconstruct, rewrite_P3, verify_derel)
from charp_diffops.fixtures import FIXTURES, fixture
from charp_diffops.poly import random_poly
from charp_diffops.ring import LocRing

ALL = sorted(FIXTURES)


def test_circle_generator():
    V = fixture("CIRCLE")
    D = build_det_derivation(V.jd, (1,), (1, 2))
    assert D.to_strings() == ["-2*x2", "2*x1"]
    assert str(D) == "-2*x2*D1 + 2*x1*D2"


def test_affine_generators_are_partials():
    V = fixture("AFFINE")
    gens = derivation_generators(V.jd)
    assert [str(D) for D in gens.values()] == ["D1", "D2"]


def test_twisted_generator():
    V = fixture("TWISTED")
    D = build_det_derivation(V.jd, (1, 2), (1, 2, 3))
    assert D == Derivation(V.ideal, ["1", "2*x1", "3*x1^2"])
    assert D(V.poly("x2")).nf == V.poly("2*x1")


def test_sphere_generators_match_rotations():
    V = fixture("SPHERE3")
    for (i, jj), D in derivation_generators(V.jd).items():
        a, b = jj
        coeffs = ["0"] * 3
        coeffs[a - 1] = "-2*x%d" % b
        coeffs[b - 1] = "2*x%d" % a
        assert D == Derivation(V.ideal, coeffs)


def test_rejects_unregistered_tuples():
    V = fixture("CIRCLE")
    with pytest.raises(ValueError):
        build_det_derivation(V.jd, (2,), (1, 2))
    with pytest.raises(ValueError):
        build_det_derivation(V.jd, (1,), (1,))


def test_check_descends_examples():
    V = fixture("CIRCLE")
    assert check_descends(build_det_derivation(V.jd, (1,), (1, 2)))
    assert not check_descends(Derivation(V.ideal, ["1", "0"]))
    assert check_descends(Derivation(V.ideal, ["0", "0"]))
    with pytest.raises(ValueError):
        Derivation(V.ideal, ["1", "0"], checked=True)


def test_apply_examples():
    V = fixture("CIRCLE")
    D = Derivation(V.ideal, ["x2", "-x1"])
    assert apply_derivation(D, V.poly("x1")).nf == V.poly("x2")
    assert apply_derivation(D, V.poly("1")).is_zero()


@pytest.mark.parametrize("name", ALL)
def test_generators_kill_ideal(name):
    V = fixture(name)
    for D in derivation_generators(V.jd).values():
        assert check_descends(D)
        for f in V.ideal.generators:
            assert D(f).is_zero()


@pytest.mark.parametrize("name", ALL)
def test_leibniz_random_pairs(name):
    V = fixture(name)
    rng = random.Random(sum(map(ord, name)))
    gens = list(derivation_generators(V.jd).values())
    for _ in range(50):
        D = gens[rng.randrange(len(gens))]
        a, b = (random_poly(V.ambient, rng, 4) for _ in range(2))
        assert D(a * b) == D(a) * V.ideal.normal_form(b) + V.ideal.normal_form(a) * D(b)


@pytest.mark.parametrize("name", ["CIRCLE", "TWISTED", "SPHERE3", "AFFINE", "HYPER", "CUSP"])
def test_derel_exhaustive(name):
    jd = fixture(name).jd
    ts = jd.tuples
    count = 0
    for i in ts.Ir:
        for i2 in ts.Ir:
            for j in ts.Jr:
                for j2 in ts.Jr1:
                    assert verify_derel(jd, i, i2, j, j2), (i, i2, j, j2)
                    count += 1
    assert count == len(ts.Ir) ** 2 * len(ts.Jr) * len(ts.Jr1)


def test_derel_rejects_bad_tuples():
    jd = fixture("CIRCLE").jd
    with pytest.raises(ValueError):
        verify_derel(jd, (1,), (1,), (1, 2), (1, 2))


def test_membership_circle():
    V = fixture("CIRCLE")
    D = Derivation(V.ideal, ["x2", "-x1"])
    res = membership_der(V.jd, D, (1,), (1,))
    assert res.member
    assert res.values == {2: V.poly("-x1")}
    assert reconstruct(V.jd, res.values, (1,), (1,)) == D


def test_membership_trivial_and_twisted():
    V = fixture("CIRCLE")
    res = membership_der(V.jd, Derivation(V.ideal, [0, 0]), (1,), (1,))
    assert res.member and all(v.is_zero() for v in res.values.values())
    T = fixture("TWISTED")
    D = build_det_derivation(T.jd, (1, 2), (1, 2, 3))
    res = membership_der(T.jd, D, (1, 2), (2, 3))
    assert res.member and res.values == {1: T.poly("1")}


def test_membership_rejects_non_derivation_values():
    V = fixture("CIRCLE")
    # x2 -> 1 forces x1 -> -x2/x1, which is not in A
    res = membership_from_values(V.jd, {2: V.poly("1")}, (1,), (1,))
    assert not res.member and res.failing == 1
    assert reconstruct(V.jd, {2: V.poly("1")}, (1,), (1,)) is None


@pytest.mark.parametrize("name", ALL)
def test_membership_round_trip(name):
    V = fixture(name)
    rng = random.Random(len(name))
    gens = list(derivation_generators(V.jd).values())
    ts = V.jd.tuples
    for _ in range(20):
        D = Derivation(V.ideal, [0] * V.ambient.n)
        for g in gens:
            D = D + g.scale(random_poly(V.ambient, rng, 2, 3))
        for i in ts.Ir:
            for j in ts.Jr:
                res = membership_der(V.jd, D, i, j)
                assert res.member
                assert reconstruct(V.jd, res.values, i, j) == D


def test_rewrite_examples():
    V = fixture("CIRCLE")
    res = rewrite_P3(V.jd, (1,), (1, 2), (1,), (1,))
    assert res.identity_holds and res.lambdas == {2: V.poly("2*x1")}
    T = fixture("TWISTED")
    res = rewrite_P3(T.jd, (1, 2), (1, 2, 3), (1, 2), (2, 3))
    assert res.identity_holds and res.lambdas == {1: T.poly("1")}


def test_rewrite_vanishing_coefficients():
    S = fixture("SPHERE3")
    # d_{(1),(1,2)} does not touch x3, so its x3 coefficient against base j=(1) vanishes
    res = rewrite_P3(S.jd, (1,), (1, 2), (1,), (1,))
    assert res.identity_holds and res.lambdas[3].is_zero()
    for i2 in S.jd.tuples.Ir:
        for j2 in S.jd.tuples.Jr1:
            for j in S.jd.tuples.Jr:
                assert rewrite_P3(S.jd, i2, j2, (1,), j).identity_holds


def test_loc_derivation_quotient_rule():
    V = fixture("CIRCLE")
    R = LocRing(V.ideal, V.poly("2*x1"))
    D = LocDerivation.from_derivation(Derivation(V.ideal, ["x2", "-x1"]), R)
    a = R.elem("x2 + 1", 2)
    b = R.elem("x1*x2", 1)
    assert D(a * b) == D(a) * b + a * D(b)
    # D(1/Delta) = -D(Delta)/Delta^2 with D(2*x1) = 2*x2
    assert D(R.elem("1", 1)) == R.elem("-2*x2", 2)
