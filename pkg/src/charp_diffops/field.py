"""Arithmetic in the prime field F_p and binomial coefficients mod p."""

from __future__ import annotations

from functools import lru_cache
from math import comb


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for q in small:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class PrimeField:
    """The field F_p.

    Elements are plain ints in ``[0, p)`` inside the polynomial kernels;
    :class:`FieldElement` wraps them when a standalone value is wanted.
    """

    __slots__ = ("p",)

    def __init__(self, p: int):
        p = int(p)
        if not 2 <= p < 2**31:
            raise ValueError("p must be a prime with 2 <= p < 2^31")
        if not is_prime(p):
            raise ValueError("p must be prime, got %d" % p)
        self.p = p

    def __repr__(self):
        return "PrimeField(%d)" % self.p

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("F", self.p))

    def __call__(self, value: int) -> "FieldElement":
        return FieldElement(value, self)

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.p

    def mul(self, a: int, b: int) -> int:
        return a * b % self.p

    def neg(self, a: int) -> int:
        return -a % self.p

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("0 has no inverse in F_%d" % self.p)
        return pow(a, self.p - 2, self.p)

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return pow(self.inv(a), -e, self.p)
        return pow(a, e, self.p)

    def signed(self, a: int) -> int:
        """Representative of ``a`` in the symmetric range (-p/2, p/2]."""
        a %= self.p
        return a - self.p if a > self.p // 2 else a

    def binomial(self, l: int, k: int) -> int:
        return binomial_mod_p(l, k, self.p)


class FieldElement:
    """An element of F_p; always fully reduced."""

    __slots__ = ("residue", "field")

    def __init__(self, value: int, field: PrimeField):
        self.field = field
        self.residue = int(value) % field.p

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise ValueError("field mismatch")
            return other.residue
        if isinstance(other, int):
            return other % self.field.p
        return NotImplemented

    def __add__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.residue + b, self.field)

    __radd__ = __add__

    def __sub__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.residue - b, self.field)

    def __rsub__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElement(b - self.residue, self.field)

    def __mul__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.residue * b, self.field)

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(-self.residue, self.field)

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field.inv(self.residue), self.field)

    def __truediv__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.residue * self.field.inv(b), self.field)

    def __pow__(self, e: int):
        return FieldElement(self.field.pow(self.residue, e), self.field)

    def __eq__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return False
        return self.residue == b

    def __hash__(self):
        return hash((self.residue, self.field.p))

    def __int__(self):
        return self.residue

    def __bool__(self):
        return self.residue != 0

    def __repr__(self):
        return "%d (mod %d)" % (self.residue, self.field.p)


@lru_cache(maxsize=1 << 16)
def binomial_mod_p(l: int, k: int, p: int) -> int:
    """C(l, k) mod p via Lucas' theorem; zero when k > l or k < 0."""
    if k < 0 or k > l:
        return 0
    result = 1
    while l or k:
        li, ki = l % p, k % p
        if ki > li:
            return 0
        result = result * comb(li, ki) % p
        l //= p
        k //= p
    return result
