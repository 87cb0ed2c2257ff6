"""Ideals, the quotient domain A = P_n/I, its localization A_D, and the
Jacobian rank / tuple-set machinery.

I is assumed prime (A is a domain); nothing here certifies that.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

from .groebner import GBElement, buchberger, reduce_full
from .poly import Ambient, PolyMatrix, Polynomial, Terms, jacobian, order_key, t_key, t_mul


class Ideal:
    """An ideal of P_n with its reduced Groebner basis (computed eagerly)."""

    def __init__(self, generators: Sequence[Polynomial], ambient: Ambient = None, order: str = "grevlex"):
        generators = list(generators)
        if ambient is None:
            if not generators:
                raise ValueError("ambient required for the zero ideal")
            ambient = generators[0].ambient
        for g in generators:
            if g.ambient != ambient:
                raise ValueError("generator in a different ambient")
        self.ambient = ambient
        self.generators = tuple(generators)
        self.order = order
        self.key = order_key(order)
        self._gb = buchberger([g.terms for g in generators], self.key, ambient.p)
        self._division_cache: Dict[tuple, List[GBElement]] = {}
        self._nf_cache: Dict[tuple, Terms] = {}

    @property
    def p(self) -> int:
        return self.ambient.p

    @property
    def gb(self) -> List[Polynomial]:
        return [Polynomial(self.ambient, g.terms) for g in self._gb]

    def is_unit(self) -> bool:
        return len(self._gb) == 1 and not any(self._gb[0].lm)

    def is_zero(self) -> bool:
        return not self._gb

    def __repr__(self):
        return "Ideal(%s)" % ", ".join(str(g) for g in self.generators)

    # -- normal forms -------------------------------------------------------
    def reduce_terms(self, terms: Terms) -> Terms:
        if not self._gb or not terms:
            return terms
        rem, _, _ = reduce_full(terms, self._gb, self.key, self.p)
        return rem

    def reduce(self, f: Polynomial) -> Polynomial:
        return Polynomial(self.ambient, self.reduce_terms(f.terms))

    def normal_form(self, f: Polynomial) -> "QuotElem":
        return QuotElem(self, self.reduce(f))

    def contains(self, f: Polynomial) -> bool:
        return not self.reduce_terms(f.terms)

    def __contains__(self, f: Polynomial) -> bool:
        return self.contains(f)

    def extend(self, more: Sequence[Polynomial]) -> "Ideal":
        return Ideal(list(self.generators) + list(more), self.ambient, self.order)

    def quotient_ring(self) -> "QuotientRing":
        return QuotientRing(self)

    # -- exact division in A ------------------------------------------------
    def _division_basis(self, den: Terms) -> List[GBElement]:
        k = t_key(den)
        basis = self._division_cache.get(k)
        if basis is None:
            gens = [g.terms for g in self._gb] + [den]
            one = {(0,) * self.ambient.n: 1}
            cofs = [[{}] for _ in self._gb] + [[one]]
            basis = buchberger(gens, self.key, self.p, cofs=cofs, cof_reduce=self.reduce_terms)
            self._division_cache[k] = basis
        return basis

    def divide(self, num: Polynomial, den: Polynomial) -> Optional[Polynomial]:
        """Return ``q`` (in normal form) with ``q*den = num`` in A, or None.

        Exact: ``num`` is divisible iff it lies in I + (den); the quotient
        is read off from cofactors of a Groebner basis of I + (den).
        """
        den_t = self.reduce_terms(den.terms)
        if not den_t:
            raise ZeroDivisionError("divisor lies in the ideal")
        num_t = self.reduce_terms(num.terms)
        if not num_t:
            return self.ambient.zero()
        basis = self._division_basis(den_t)
        rem, _, quots = reduce_full(num_t, basis, self.key, self.p, quotients=True)
        if rem:
            return None
        q: Terms = {}
        p = self.p
        for qi, g in zip(quots, basis):
            if qi and g.cof[0]:
                for m, c in t_mul(qi, g.cof[0], p).items():
                    v = (q.get(m, 0) + c) % p
                    if v:
                        q[m] = v
                    else:
                        q.pop(m, None)
        q = self.reduce_terms(q)
        assert self.reduce_terms(
            _sub(t_mul(q, den_t, p), num_t, p)
        ) == {}, "division certificate failed"
        return Polynomial(self.ambient, q)


def _sub(a: Terms, b: Terms, p: int) -> Terms:
    out = dict(a)
    for m, c in b.items():
        v = (out.get(m, 0) - c) % p
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return out


def groebner(gens: Sequence[Polynomial], order: str = "grevlex", ambient: Ambient = None) -> List[Polynomial]:
    """Reduced Groebner basis as a list of monic polynomials."""
    return Ideal(gens, ambient, order).gb


def normal_form(f: Polynomial, I: Ideal) -> "QuotElem":
    return I.normal_form(f)


def ideal_member(f: Polynomial, I: Ideal) -> bool:
    return I.contains(f)


# -- quotient ring A = P_n / I ---------------------------------------------

class QuotientRing:
    def __init__(self, ideal: Ideal):
        self.ideal = ideal
        self.ambient = ideal.ambient

    def __call__(self, f) -> "QuotElem":
        if isinstance(f, str):
            f = self.ambient.parse(f)
        elif isinstance(f, int):
            f = self.ambient.const(f)
        return self.ideal.normal_form(f)

    def gens(self) -> List["QuotElem"]:
        return [self(x) for x in self.ambient.gens()]


class QuotElem:
    """An element of A, stored as its normal form."""

    __slots__ = ("ideal", "nf")

    def __init__(self, ideal: Ideal, nf: Polynomial):
        self.ideal = ideal
        self.nf = nf

    def _lift(self, other) -> Polynomial:
        if isinstance(other, QuotElem):
            if other.ideal is not self.ideal:
                raise ValueError("elements of different quotient rings")
            return other.nf
        if isinstance(other, Polynomial):
            return self.ideal.reduce(other)
        if isinstance(other, int):
            return self.ideal.ambient.const(other)
        return NotImplemented

    def __add__(self, other):
        b = self._lift(other)
        if b is NotImplemented:
            return b
        return QuotElem(self.ideal, self.nf + b)

    __radd__ = __add__

    def __sub__(self, other):
        b = self._lift(other)
        if b is NotImplemented:
            return b
        return QuotElem(self.ideal, self.nf - b)

    def __rsub__(self, other):
        b = self._lift(other)
        if b is NotImplemented:
            return b
        return QuotElem(self.ideal, b - self.nf)

    def __mul__(self, other):
        b = self._lift(other)
        if b is NotImplemented:
            return b
        return QuotElem(self.ideal, self.ideal.reduce(self.nf * b))

    __rmul__ = __mul__

    def __neg__(self):
        return QuotElem(self.ideal, -self.nf)

    def __pow__(self, e: int):
        return QuotElem(self.ideal, self.ideal.reduce(self.nf ** e))

    def __eq__(self, other):
        b = self._lift(other)
        if b is NotImplemented:
            return False
        return self.nf == b

    def __hash__(self):
        return hash(self.nf)

    def is_zero(self) -> bool:
        return self.nf.is_zero()

    def __bool__(self):
        return not self.nf.is_zero()

    def __str__(self):
        return str(self.nf)

    def __repr__(self):
        return "QuotElem(%s)" % self.nf


# -- localization A_D ------------------------------------------------------

class LocRing:
    """The localization A_D of A = P_n/I at the powers of ``delta``."""

    def __init__(self, ideal: Ideal, delta: Polynomial):
        self.ideal = ideal
        self.ambient = ideal.ambient
        d = ideal.reduce(delta)
        if d.is_zero():
            raise ValueError("localizing element lies in the ideal")
        self.delta = d
        self._powers: List[Terms] = [{(0,) * self.ambient.n: 1}, d.terms]

    def __repr__(self):
        return "LocRing(delta=%s)" % self.delta

    def power_terms(self, k: int) -> Terms:
        pw = self._powers
        while len(pw) <= k:
            pw.append(self.ideal.reduce_terms(t_mul(pw[-1], pw[1], self.ambient.p)))
        return pw[k]

    def power(self, k: int) -> Polynomial:
        return Polynomial(self.ambient, self.power_terms(k))

    def elem(self, num, s: int = 0) -> "LocElem":
        if isinstance(num, str):
            num = self.ambient.parse(num)
        elif isinstance(num, int):
            num = self.ambient.const(num)
        elif isinstance(num, QuotElem):
            num = num.nf
        return LocElem(self, self.ideal.reduce(num), s)

    __call__ = elem

    def zero(self) -> "LocElem":
        return LocElem(self, self.ambient.zero(), 0)

    def one(self) -> "LocElem":
        return LocElem(self, self.ambient.one(), 0)

    def delta_elem(self) -> "LocElem":
        return LocElem(self, self.delta, 0)

    def inverse_of(self, f: Polynomial, max_power: int = 16) -> "LocElem":
        """1/f for an f that divides some power of the localizing element."""
        f = self.ideal.reduce(f)
        if f.is_zero():
            raise ZeroDivisionError("inverse of zero")
        for s in range(max_power + 1):
            q = self.ideal.divide(self.power(s), f)
            if q is not None:
                return LocElem(self, q, s)
        raise ZeroDivisionError("%s is not a unit of the localization (searched D^%d)" % (f, max_power))

    def divide_once(self, num: Polynomial) -> Optional[Polynomial]:
        return self.ideal.divide(num, self.delta)

    def combine(self, items: Sequence[Tuple[Terms, int]]) -> "LocElem":
        """Sum of unreduced fractions ``terms / D^s`` with a single reduction."""
        items = [(t, s) for t, s in items if t]
        if not items:
            return self.zero()
        p = self.ambient.p
        u = max(s for _, s in items)
        total: Terms = {}
        for t, s in items:
            if s < u:
                t = t_mul(t, self.power_terms(u - s), p)
            for m, c in t.items():
                v = (total.get(m, 0) + c) % p
                if v:
                    total[m] = v
                else:
                    total.pop(m, None)
        return LocElem(self, Polynomial(self.ambient, self.ideal.reduce_terms(total)), u)


class LocElem:
    """num / D^s in A_D; the representation need not be minimal."""

    __slots__ = ("ring", "num", "s")

    def __init__(self, ring: LocRing, num: Polynomial, s: int = 0):
        self.ring = ring
        self.num = num
        self.s = s if num.terms else 0

    def _coerce(self, other) -> "LocElem":
        if isinstance(other, LocElem):
            if other.ring is not self.ring:
                raise ValueError("localization mismatch")
            return other
        if isinstance(other, (int, Polynomial, QuotElem)):
            return self.ring.elem(other)
        return NotImplemented

    def _raised(self, u: int) -> Terms:
        if u == self.s:
            return self.num.terms
        R = self.ring
        return R.ideal.reduce_terms(t_mul(self.num.terms, R.power_terms(u - self.s), R.ambient.p))

    def __add__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        if not b.num.terms:
            return self
        if not self.num.terms:
            return b
        u = max(self.s, b.s)
        A = Polynomial(self.ring.ambient, self._raised(u))
        B = Polynomial(self.ring.ambient, b._raised(u))
        return LocElem(self.ring, A + B, u)

    __radd__ = __add__

    def __neg__(self):
        return LocElem(self.ring, -self.num, self.s)

    def __sub__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return self + (-b)

    def __rsub__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return b + (-self)

    def __mul__(self, other):
        if isinstance(other, int):
            return LocElem(self.ring, self.num.scale(other), self.s)
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        if not self.num.terms or not b.num.terms:
            return self.ring.zero()
        R = self.ring
        prod = R.ideal.reduce_terms(t_mul(self.num.terms, b.num.terms, R.ambient.p))
        return LocElem(R, Polynomial(R.ambient, prod), self.s + b.s)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("use LocRing.inverse_of for negative powers")
        result = self.ring.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def times_delta_power(self, k: int) -> "LocElem":
        """Multiply by D^k (k may be negative)."""
        if k >= 0:
            return LocElem(self.ring, Polynomial(self.ring.ambient, self._raised(self.s + k)), self.s)
        return LocElem(self.ring, self.num, self.s - k)

    def __eq__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return False
        return loc_equal(self, b)

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.num.terms

    def __bool__(self):
        return bool(self.num.terms)

    def normalized(self) -> "LocElem":
        """Strip factors of D from the numerator while possible."""
        num, s = self.num, self.s
        while s > 0:
            q = self.ring.divide_once(num)
            if q is None:
                break
            num, s = q, s - 1
        return LocElem(self.ring, num, s)

    def min_exponent(self) -> int:
        """Least s with D^s * self in A."""
        return self.normalized().s

    def in_base(self) -> Optional[Polynomial]:
        """The element of A equal to self, or None when it is not in A."""
        e = self.normalized()
        return e.num if e.s == 0 else None

    def key(self):
        return (self.num.key(), self.s)

    def __str__(self):
        if self.s == 0:
            return str(self.num)
        return "(%s)/D^%d" % (self.num, self.s)

    __repr__ = __str__

    def to_json(self) -> dict:
        e = self.normalized()
        return {"num": str(e.num), "s": e.s}


def loc_equal(a: LocElem, b: LocElem) -> bool:
    """Cross-multiplication test a_num * D^s_b == b_num * D^s_a in A."""
    if a.ring is not b.ring:
        raise ValueError("localization mismatch")
    u = max(a.s, b.s)
    return a._raised(u) == b._raised(u)


# -- Jacobian rank and tuple sets -----------------------------------------

@dataclass
class TupleSets:
    r: int
    Ir: List[Tuple[int, ...]]
    Jr: List[Tuple[int, ...]]
    Jr1: List[Tuple[int, ...]] = field(default_factory=list)


class JacobianData:
    """Jacobi matrix of the generators of I, its minors mod I, rank and tuple sets.

    Tuples use 1-based indices (as in reports); minors are cached.
    """

    def __init__(self, ideal: Ideal):
        if ideal.is_unit():
            raise ValueError("the unit ideal defines the empty variety")
        self.ideal = ideal
        self.ambient = ideal.ambient
        self.m = len(ideal.generators)
        self.n = self.ambient.n
        self.J: PolyMatrix = jacobian(list(ideal.generators), self.ambient)
        self._minors: Dict[tuple, Polynomial] = {}
        self.r = self._rank()
        self._tuples: Optional[TupleSets] = None

    def minor(self, rows: Sequence[int], cols: Sequence[int]) -> Polynomial:
        """Delta(rows, cols) reduced mod I; 1-based, columns taken in the given order."""
        key = (tuple(rows), tuple(cols))
        v = self._minors.get(key)
        if v is None:
            v = self.ideal.reduce(self.J.minor([i - 1 for i in rows], [j - 1 for j in cols]))
            self._minors[key] = v
        return v

    def _rank(self) -> int:
        for s in range(min(self.m, self.n), 0, -1):
            for rows in combinations(range(1, self.m + 1), s):
                for cols in combinations(range(1, self.n + 1), s):
                    if not self.minor(rows, cols).is_zero():
                        return s
        return 0

    def row_tuples(self) -> List[Tuple[int, ...]]:
        return list(combinations(range(1, self.m + 1), self.r))

    def col_tuples(self, size: int = None) -> List[Tuple[int, ...]]:
        return list(combinations(range(1, self.n + 1), self.r if size is None else size))

    @property
    def tuples(self) -> TupleSets:
        if self._tuples is None:
            rows, cols = self.row_tuples(), self.col_tuples()
            nz = {(i, j) for i in rows for j in cols if not self.minor(i, j).is_zero()}
            Ir = [i for i in rows if any((i, j) in nz for j in cols)]
            Jr = [j for j in cols if any((i, j) in nz for i in rows)]
            for i in Ir:
                for j in Jr:
                    if (i, j) not in nz:
                        raise AssertionError(
                            "minor vanishes for %s, %s although both tuples are nonsingular: is the ideal prime?" % (i, j))
            Jset = set(Jr)
            Jr1 = [
                jj for jj in self.col_tuples(self.r + 1)
                if any(jj[:v] + jj[v + 1:] in Jset for v in range(len(jj)))
            ]
            self._tuples = TupleSets(self.r, Ir, Jr, Jr1)
        return self._tuples

    def jacobian_ideal_generators(self) -> List[Polynomial]:
        """All r x r minors (the empty minor 1 when r = 0)."""
        return [self.minor(i, j) for i in self.row_tuples() for j in self.col_tuples()]

    def jacobian_ideal(self) -> Ideal:
        """a_r + I as an ideal of P_n."""
        return self.ideal.extend(self.jacobian_ideal_generators())

    def regular_check(self) -> "RegularityResult":
        minors = [g for g in self.jacobian_ideal_generators() if not g.is_zero()]
        gens = list(self.ideal.generators) + minors
        p, n = self.ambient.p, self.n
        one = {(0,) * n: 1}
        cofs = [[one if k == idx else {} for k in range(len(gens))] for idx in range(len(gens))]
        basis = buchberger([g.terms for g in gens], self.ideal.key, p, cofs=cofs)
        regular = len(basis) == 1 and not any(basis[0].lm)
        if regular:
            cert = [Polynomial(self.ambient, c) for c in basis[0].cof]
            total = self.ambient.zero()
            for c, g in zip(cert, gens):
                total = total + c * g
            assert total == self.ambient.one(), "regularity certificate does not reduce to 1"
            return RegularityResult(True, gens, cert, [])
        return RegularityResult(False, gens, [], [Polynomial(self.ambient, g.terms) for g in basis])

    def default_base(self) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
        """The pair (i, j) whose minor has the smallest (degree, term count)."""
        ts = self.tuples
        best = None
        for i in ts.Ir:
            for j in ts.Jr:
                d = self.minor(i, j)
                k = (d.degree(), len(d))
                if best is None or k < best[0]:
                    best = (k, (i, j))
        return best[1]


@dataclass
class RegularityResult:
    regular: bool
    generators: List[Polynomial]
    certificate: List[Polynomial]
    groebner_basis: List[Polynomial]

    def __bool__(self):
        return self.regular


def jacobian_rank(I: Ideal) -> int:
    return JacobianData(I).r


def nonsingular_tuples(I: Ideal) -> TupleSets:
    return JacobianData(I).tuples


def critical_set(I: Ideal) -> List[Tuple[int, ...]]:
    return JacobianData(I).tuples.Jr1


def regular_check(I: Ideal) -> RegularityResult:
    return JacobianData(I).regular_check()
