"""Cross-checks against sympy as an independent computer-algebra oracle."""

import random

import pytest

from charp_diffops.der import derivation_generators
from charp_diffops.fixtures import FIXTURES, fixture
from charp_diffops.hs import hs_lift
from charp_diffops.poly import Ambient, Polynomial, random_poly
from charp_diffops.ring import Ideal

sp = pytest.importorskip("sympy")


def to_sympy(f: Polynomial, syms):
    return sum((c * sp.prod([s**e for s, e in zip(syms, m)]) for m, c in f.terms.items()), sp.Integer(0))


def from_sympy(expr, syms, ambient):
    poly = sp.Poly(sp.expand(expr), *syms)
    out = {}
    for m, c in poly.terms():
        c = sp.Rational(c)
        out[tuple(m)] = int(c.p) * pow(int(c.q), -1, ambient.p)
    return Polynomial.from_terms(ambient, out)


def sympy_gb(I: Ideal):
    syms = sp.symbols(I.ambient.names)
    gens = [to_sympy(g, syms) for g in I.generators]
    if not gens:
        return set()
    G = sp.groebner(gens, *syms, modulus=I.ambient.p, order=I.order)
    return {str(from_sympy(g.as_expr(), syms, I.ambient)) for g in G.exprs}


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_groebner_matches_sympy_on_fixtures(name):
    I = fixture(name).ideal
    assert {str(g) for g in I.gb} == sympy_gb(I)


@pytest.mark.parametrize("order", ["grevlex", "lex"])
def test_groebner_matches_sympy_on_random_ideals(order):
    rng = random.Random(99)
    for p, n in ((5, 2), (7, 3), (3, 3)):
        A = Ambient.standard(p, n)
        for _ in range(4):
            gens = [random_poly(A, rng, 3, 3) for _ in range(2)]
            I = Ideal(gens, A, order)
            assert {str(g) for g in I.gb} == sympy_gb(I)


@pytest.mark.parametrize("name", ["CIRCLE", "TWISTED", "SPHERE3", "HYPER", "CUSP"])
def test_det_derivations_match_sympy_determinant(name):
    V = fixture(name)
    syms = sp.symbols(V.ambient.names)
    F = [to_sympy(g, syms) for g in V.ideal.generators]
    for (i, jj), D in derivation_generators(V.jd).items():
        r = len(i)
        # coefficient of d_{jj[nu]} is the cofactor of the operator row
        for nu, col in enumerate(jj):
            rows = [[sp.diff(F[a - 1], syms[b - 1]) for b in jj] for a in i]
            minor = sp.Matrix([row[:nu] + row[nu + 1:] for row in rows]).det() if r else sp.Integer(1)
            cof = (-1) ** (r + nu) * minor
            want = V.ideal.reduce(from_sympy(cof, syms, V.ambient))
            assert D.coeffs[col - 1] == want


def implicit_derivatives(f_expr, bound, free, kmax):
    """k-th derivatives of the bound variable along the free one, over Q.

    Returned as expressions in both variables; divided by k! later.
    """
    out = [bound]
    fb, ff = sp.diff(f_expr, bound), sp.diff(f_expr, free)
    first = sp.together(-ff / fb)
    cur = bound
    for _ in range(kmax):
        cur = sp.together(sp.diff(cur, free) + sp.diff(cur, bound) * first)
        out.append(cur)
    return out


@pytest.mark.parametrize("name,bound,free,p", [("CIRCLE", 1, 2, 5), ("HYPER", 2, 1, 7)])
def test_hs_values_match_implicit_differentiation(name, bound, free, p):
    V = fixture(name)
    syms = sp.symbols(V.ambient.names)
    f = to_sympy(V.ideal.generators[0], syms)
    jd = V.jd
    H = hs_lift(jd, (1,), (bound,), free, N=p - 1)
    R = H.ring
    derivs = implicit_derivatives(f, syms[bound - 1], syms[free - 1], p - 1)
    for k in range(1, p):
        num, den = sp.fraction(sp.together(derivs[k] / sp.factorial(k)))
        # den is (constant) * (partial in the bound variable)^m
        dpart = sp.diff(f, syms[bound - 1])
        m = sp.degree(sp.Poly(den, *syms).as_expr(), syms[bound - 1])
        scale = sp.simplify(den / dpart**m)
        assert scale.is_number
        numer = from_sympy(num / scale, syms, V.ambient)
        want = R.elem(numer) * R.inverse_of(V.ideal.reduce(from_sympy(dpart, syms, V.ambient))) ** m
        assert H.value(bound, k) == want, k
