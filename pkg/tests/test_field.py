from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from charp_diffops.field import FieldElement, PrimeField, binomial_mod_p, is_prime


def test_field_examples():
    F = PrimeField(5)
    assert F(3) + F(4) == 2
    assert F(2).inverse() == 3
    with pytest.raises(ZeroDivisionError):
        F(0).inverse()


@pytest.mark.parametrize("p", [0, 1, 4, 9, 2**31 + 11])
def test_rejects_non_primes(p):
    with pytest.raises(ValueError):
        PrimeField(p)


def test_prime_check_against_sieve():
    limit = 2000
    sieve = [True] * limit
    sieve[0] = sieve[1] = False
    for q in range(2, limit):
        if sieve[q]:
            for m in range(q * q, limit, q):
                sieve[m] = False
    assert [n for n in range(limit) if is_prime(n)] == [n for n in range(limit) if sieve[n]]


def test_binomial_examples():
    assert binomial_mod_p(7, 2, 5) == 1
    assert binomial_mod_p(5, 1, 5) == 0
    assert all(binomial_mod_p(l, 0, 7) == 1 for l in range(50))
    assert binomial_mod_p(3, 5, 5) == 0


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_lucas_matches_integer_binomial(p):
    for l in range(201):
        for k in range(l + 1):
            assert binomial_mod_p(l, k, p) == comb(l, k) % p


@given(
    p=st.sampled_from([2, 3, 5, 7, 11]),
    a=st.integers(0, 300),
    b=st.integers(0, 300),
    k=st.integers(0, 600),
)
def test_vandermonde(p, a, b, k):
    lhs = sum(binomial_mod_p(a, j, p) * binomial_mod_p(b, k - j, p) for j in range(k + 1)) % p
    assert lhs == binomial_mod_p(a + b, k, p)


@given(st.integers(1000, 20000), st.integers(0, 400))
def test_lucas_large_arguments(l, k):
    assert binomial_mod_p(l, k, 13) == comb(l, k) % 13


@given(p=st.sampled_from([2, 5, 7, 101]), a=st.integers(), b=st.integers())
def test_field_ops_reduce(p, a, b):
    F = PrimeField(p)
    x, y = F(a), F(b)
    for z in (x + y, x - y, x * y, -x):
        assert isinstance(z, FieldElement)
        assert 0 <= z.residue < p
    if x:
        assert x * x.inverse() == 1
        assert (x ** (p - 1)) == 1
