"""Truncated iterative higher derivations of the localization A_D.

A family is stored as the truncated algebra homomorphism
``e: x_c -> sum_k delta^[k](x_c) t^k``.  Complement variables move
linearly (``x + t`` for the distinguished one, fixed otherwise); the bound
variables are solved for order by order with the adjugate of the r x r
Jacobian block, so the only division is by its determinant.
"""

from __future__ import annotations

from itertools import product
from typing import Dict, List, Sequence, Tuple

from .der import complement, det_derivation
from .field import binomial_mod_p
from .poly import Polynomial, det, t_divided_partial, t_mul
from .ring import JacobianData, LocElem, LocRing

MAX_ORDER = 64


class TruncSeries:
    """sum_k c_k t^k modulo t^(N+1), coefficients in a LocRing."""

    __slots__ = ("ring", "c")

    def __init__(self, ring: LocRing, coeffs: Sequence, N: int = None):
        coeffs = [ring.elem(a) if not isinstance(a, LocElem) else a for a in coeffs]
        if N is not None:
            coeffs = coeffs[: N + 1] + [ring.zero()] * (N + 1 - len(coeffs))
        self.ring = ring
        self.c = coeffs

    @property
    def N(self) -> int:
        return len(self.c) - 1

    @classmethod
    def constant(cls, ring: LocRing, a, N: int) -> "TruncSeries":
        return cls(ring, [a], N)

    def __getitem__(self, k: int) -> LocElem:
        return self.c[k]

    def __len__(self):
        return len(self.c)

    def truncate(self, N: int) -> "TruncSeries":
        return TruncSeries(self.ring, self.c, N)

    def _lift(self, other) -> "TruncSeries":
        if isinstance(other, TruncSeries):
            if other.ring is not self.ring:
                raise ValueError("series over different rings")
            return other
        if isinstance(other, (int, LocElem, Polynomial)):
            return TruncSeries.constant(self.ring, other, self.N)
        return NotImplemented

    def __add__(self, other):
        b = self._lift(other)
        if b is NotImplemented:
            return b
        N = min(self.N, b.N)
        return TruncSeries(self.ring, [self.c[k] + b.c[k] for k in range(N + 1)])

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries(self.ring, [-a for a in self.c])

    def __sub__(self, other):
        b = self._lift(other)
        if b is NotImplemented:
            return b
        return self + (-b)

    def __rsub__(self, other):
        b = self._lift(other)
        if b is NotImplemented:
            return b
        return b + (-self)

    def __mul__(self, other):
        if isinstance(other, int):
            return TruncSeries(self.ring, [a * other for a in self.c])
        if isinstance(other, (LocElem, Polynomial)):
            other = self.ring.elem(other) if isinstance(other, Polynomial) else other
            return TruncSeries(self.ring, [a * other for a in self.c])
        b = self._lift(other)
        if b is NotImplemented:
            return b
        N = min(self.N, b.N)
        p = self.ring.ambient.p
        out = []
        for k in range(N + 1):
            items = []
            for i in range(k + 1):
                x, y = self.c[i], b.c[k - i]
                if x.num.terms and y.num.terms:
                    items.append((t_mul(x.num.terms, y.num.terms, p), x.s + y.s))
            out.append(self.ring.combine(items))
        return TruncSeries(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = TruncSeries.constant(self.ring, 1, self.N)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def inverse(self) -> "TruncSeries":
        c0 = self.c[0]
        if c0.is_zero():
            raise ZeroDivisionError("series with zero constant term is not invertible")
        try:
            inv0 = self.ring.inverse_of(c0.num).times_delta_power(c0.s)
        except ZeroDivisionError:
            raise ZeroDivisionError("constant term %s is not a unit" % c0) from None
        out = [inv0]
        for k in range(1, self.N + 1):
            acc = self.ring.zero()
            for i in range(1, k + 1):
                if self.c[i]:
                    acc = acc + self.c[i] * out[k - i]
            out.append(-(inv0 * acc))
        return TruncSeries(self.ring, out)

    def is_zero(self) -> bool:
        return all(a.is_zero() for a in self.c)

    def __eq__(self, other):
        b = self._lift(other)
        if b is NotImplemented:
            return False
        return self.N == b.N and all(x == y for x, y in zip(self.c, b.c))

    __hash__ = None

    def normalized(self) -> "TruncSeries":
        return TruncSeries(self.ring, [a.normalized() for a in self.c])

    def __repr__(self):
        return "TruncSeries(%s)" % ", ".join(str(a) for a in self.c)


# -- families ----------------------------------------------------------------

class HSFamily:
    """The iterative higher derivation attached to Delta^{-1} d_{i;j,nu}.

    ``images[c]`` is e(x_{c+1}); tuples and ``nu`` are 1-based.
    """

    def __init__(self, jd: JacobianData, ring: LocRing, i, j, nu: int, images: List[TruncSeries]):
        self.jd = jd
        self.ring = ring
        self.i, self.j, self.nu = tuple(i), tuple(j), nu
        self.images = images
        self.N = images[0].N if images else 0
        self.comp = complement(jd.n, self.j)
        # variables whose image is not constant in t
        self.moving = [c - 1 for c in self.j] + [nu - 1]
        self._ypow: Dict[tuple, TruncSeries] = {}
        self._invpow: List[TruncSeries] = []
        self._cache: Dict[tuple, TruncSeries] = {}

    @property
    def n(self) -> int:
        return self.jd.n

    @property
    def base(self):
        return (self.i, self.j)

    def value(self, var: int, k: int) -> LocElem:
        """delta^[k](x_var), 1-based variable."""
        if k > self.N:
            raise ValueError("order %d exceeds truncation %d" % (k, self.N))
        return self.images[var - 1][k]

    # Taylor data
    def _y(self, v: int) -> TruncSeries:
        s = self.images[v]
        return TruncSeries(self.ring, [self.ring.zero()] + s.c[1:])

    def _ypower(self, beta: tuple) -> TruncSeries:
        got = self._ypow.get(beta)
        if got is None:
            if not any(beta):
                got = TruncSeries.constant(self.ring, 1, self.N)
            else:
                idx = max(k for k, b in enumerate(beta) if b)
                smaller = beta[:idx] + (beta[idx] - 1,) + beta[idx + 1:]
                got = self._ypower(smaller) * self._y(self.moving[idx])
            self._ypow[beta] = got
        return got

    def _poly_series(self, f: Polynomial, order: int) -> TruncSeries:
        """e(f) for a polynomial f via sum_beta d^[beta] f * y^beta."""
        p = self.ring.ambient.p
        items: List[list] = [[] for _ in range(order + 1)]
        degs = [max((m[v] for m in f.terms), default=0) for v in self.moving]
        ranges = [range(min(d, order) + 1) for d in degs]
        for beta in product(*ranges):
            if sum(beta) > order:
                continue
            terms = f.terms
            for v, b in zip(self.moving, beta):
                if b:
                    terms = t_divided_partial(terms, v, b, p)
                    if not terms:
                        break
            if not terms:
                continue
            terms = self.ring.ideal.reduce_terms(terms)
            if not terms:
                continue
            yb = self._ypower(beta)
            for k in range(sum(beta), order + 1):
                c = yb.c[k]
                if c.num.terms:
                    items[k].append((t_mul(terms, c.num.terms, p), c.s))
        return TruncSeries(self.ring, [self.ring.combine(it) for it in items])

    def _inverse_power(self, s: int) -> TruncSeries:
        if not self._invpow:
            eD = self._poly_series(self.ring.delta, self.N)
            self._invpow = [TruncSeries.constant(self.ring, 1, self.N), eD.inverse()]
        while len(self._invpow) <= s:
            self._invpow.append(self._invpow[-1] * self._invpow[1])
        return self._invpow[s]

    def series(self, a, order: int = None) -> TruncSeries:
        """e(a) truncated at ``order`` (default N)."""
        if order is None:
            order = self.N
        if order > self.N:
            raise ValueError("order %d exceeds truncation %d" % (order, self.N))
        a = self._coerce(a)
        key = a.key()
        got = self._cache.get(key)
        if got is not None and got.N >= order:
            return got.truncate(order)
        # compute to full order once; later requests are truncations
        ser = self._poly_series(a.num, self.N)
        if a.s:
            ser = ser * self._inverse_power(a.s)
        ser = ser.normalized()
        self._cache[key] = ser
        return ser.truncate(order)

    def _coerce(self, a) -> LocElem:
        if isinstance(a, LocElem):
            if a.ring is not self.ring:
                raise ValueError("element of a different localization")
            return a
        return self.ring.elem(a)

    def apply(self, a, k: int) -> LocElem:
        """delta^[k](a)."""
        if k < 0:
            raise ValueError("negative order")
        if k == 0:
            return self._coerce(a)
        return self.series(a, k)[k]

    __call__ = apply

    def perturbed(self, var: int, k: int, add) -> "HSFamily":
        """A copy with delta^[k](x_var) shifted by ``add`` (for negative tests)."""
        images = [TruncSeries(self.ring, list(s.c)) for s in self.images]
        images[var - 1].c[k] = images[var - 1].c[k] + add
        return HSFamily(self.jd, self.ring, self.i, self.j, self.nu, images)

    def table(self) -> Dict[str, List[str]]:
        names = self.ring.ambient.names
        return {names[c]: [str(a.normalized()) for a in s.c] for c, s in enumerate(self.images)}

    def __repr__(self):
        return "HSFamily(i=%s, j=%s, nu=%d, N=%d)" % (self.i, self.j, self.nu, self.N)


def _adjugate(block: List[List[Polynomial]], ambient) -> List[List[Polynomial]]:
    r = len(block)
    adj = [[None] * r for _ in range(r)]
    for a in range(r):
        for b in range(r):
            sub = [row[:b] + row[b + 1:] for k, row in enumerate(block) if k != a]
            m = det(sub, ambient)
            adj[b][a] = m if (a + b) % 2 == 0 else -m
    return adj


def hs_lift(jd: JacobianData, i, j, nu: int, N: int = 8, ring: LocRing = None, pivot=None) -> HSFamily:
    """Lift the family attached to Delta(i,j)^{-1} d_{i;j,nu} to order N.

    ``pivot`` optionally gives (row permutation, column permutation) of the
    r x r block; the result is independent of it.
    """
    i, j = tuple(i), tuple(j)
    if not 0 <= N <= MAX_ORDER:
        raise ValueError("truncation order must lie in [0, %d]" % MAX_ORDER)
    comp = complement(jd.n, j)
    if nu not in comp:
        raise ValueError("x%d is not a complement variable of %s" % (nu, j))
    delta = jd.minor(i, j)
    if delta.is_zero():
        raise ValueError("Delta(%s, %s) lies in the ideal" % (i, j))
    if ring is None:
        ring = LocRing(jd.ideal, delta)
    A = jd.ambient
    r = len(i)
    rows, cols = list(i), list(j)
    if pivot is not None:
        rows = [rows[k] for k in pivot[0]]
        cols = [cols[k] for k in pivot[1]]
    block = [[jd.J[a - 1, b - 1] for b in cols] for a in rows]
    bdet = jd.ideal.reduce(det(block, A))
    inv = ring.inverse_of(bdet)
    adj = [[ring.elem(e) * inv for e in row] for row in _adjugate(block, A)]

    images = []
    for c in range(1, jd.n + 1):
        coeffs = [ring.elem(A.var(c - 1))]
        if c == nu and N >= 1:
            coeffs.append(ring.one())
        images.append(TruncSeries(ring, coeffs, N))
    gens = [jd.ideal.generators[a - 1] for a in rows]
    for k in range(1, N + 1):
        trunc = [s.truncate(k) for s in images]
        resid = [f.substitute(trunc)[k] for f in gens]
        for b in range(r):
            acc = ring.zero()
            for a in range(r):
                if resid[a]:
                    acc = acc + adj[b][a] * resid[a]
            images[cols[b] - 1].c[k] = (-acc).normalized()
    return HSFamily(jd, ring, i, j, nu, images)


def hom_validate(H: HSFamily) -> bool:
    """f(e(x_1), ..., e(x_n)) == 0 mod t^(N+1) for every generator f."""
    for f in H.jd.ideal.generators:
        if not f.substitute(H.images).is_zero():
            return False
    return True


def order_one_matches(H: HSFamily) -> bool:
    """The t^1 row equals Delta^{-1} d_{i;j,nu} coefficientwise."""
    if H.N < 1:
        return True
    D = det_derivation(H.jd, H.i, H.j + (H.nu,))
    dinv = H.ring.inverse_of(H.jd.minor(H.i, H.j))
    return all(H.images[c][1] == dinv * H.ring.elem(D.coeffs[c]) for c in range(H.n))


def check_unique(H: HSFamily, pivot) -> bool:
    """Relift with a permuted pivot order and compare all images."""
    other = hs_lift(H.jd, H.i, H.j, H.nu, H.N, H.ring, pivot)
    return all(a == b for a, b in zip(H.images, other.images))


# -- closed form for hypersurfaces -----------------------------------------

def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def extdix_values(jd: JacobianData, bound: int, nu: int, k: int, ring: LocRing = None) -> List[LocElem]:
    """delta^[0..k](x_bound) by the implicit-function recursion for f(x) = 0.

    f = sum_m a_m x^m with a_m free of x = x_bound; the a_m are moved by the
    divided partial in x_nu, and delta^[i](x) is
    -(1/f'(x)) * sum over compositions (i_0, ..., i_m) of i with i_l != i for
    l >= 1 of d^[i_0](a_m) * prod delta^[i_l](x).
    """
    I = jd.ideal
    if len(I.generators) != 1 or jd.r != 1:
        raise ValueError("closed form needs a single defining equation of rank one")
    f = I.generators[0]
    A = jd.ambient
    p = A.p
    b = bound - 1
    fprime = f.diff(b)
    if I.reduce(fprime).is_zero():
        raise ValueError("derivative in x%d lies in the ideal" % bound)
    if ring is None:
        ring = LocRing(I, fprime)
    inv = ring.inverse_of(fprime)
    coeffs: Dict[int, dict] = {}
    for mono, c in f.terms.items():
        e = mono[b]
        rest = mono[:b] + (0,) + mono[b + 1:]
        coeffs.setdefault(e, {})[rest] = c
    vals = [ring.elem(A.var(b))]
    dcache: Dict[Tuple[int, int], LocElem] = {}

    def da(m, i0):
        key = (m, i0)
        if key not in dcache:
            dcache[key] = ring.elem(Polynomial(A, t_divided_partial(coeffs[m], nu - 1, i0, p)))
        return dcache[key]

    for i in range(1, k + 1):
        total = ring.zero()
        for m in sorted(coeffs):
            for comp in _compositions(i, m + 1):
                if any(x == i for x in comp[1:]):
                    continue
                term = da(m, comp[0])
                if term.is_zero():
                    continue
                for x in comp[1:]:
                    term = term * vals[x]
                total = total + term
        vals.append((-(inv * total)).normalized())
    return vals


def extdix_eval(jd: JacobianData, bound: int, nu: int, k: int, ring: LocRing = None) -> LocElem:
    return extdix_values(jd, bound, nu, k, ring)[k]


def extdix_agrees(H: HSFamily, k: int = None) -> bool:
    """Closed form and lifting agree on delta^[0..k] of the bound variable."""
    if k is None:
        k = H.N
    bound = H.j[0]
    vals = extdix_values(H.jd, bound, H.nu, k, H.ring)
    return all(vals[t] == H.value(bound, t) for t in range(k + 1))


# -- checks -----------------------------------------------------------------

def sample_elements(H: HSFamily) -> List[LocElem]:
    """Variables, pairwise products, and 1/Delta."""
    R = H.ring
    xs = [R.elem(R.ambient.var(c)) for c in range(H.n)]
    out = list(xs)
    for a in range(H.n):
        for b in range(a, H.n):
            out.append(xs[a] * xs[b])
    out.append(R.one().times_delta_power(-1))
    return out


def check_iterative(H: HSFamily, a: int, b: int, samples=None) -> bool:
    if a + b > H.N:
        raise ValueError("a + b exceeds truncation")
    samples = sample_elements(H) if samples is None else samples
    c = binomial_mod_p(a + b, a, H.ring.ambient.p)
    for x in samples:
        if not H.apply(H.apply(x, b), a) == H.apply(x, a + b) * c:
            return False
    return True


def check_nilpotent(H: HSFamily, i: int, samples=None) -> bool:
    p = H.ring.ambient.p
    if p * i > H.N:
        raise ValueError("p*i exceeds truncation")
    if samples is None:
        samples = [H.ring.elem(H.ring.ambient.var(c)) for c in range(H.n)]
    for x in samples:
        y = x
        for _ in range(p):
            y = H.apply(y, i)
        if not y.is_zero():
            return False
    return True


def check_commute(H1: HSFamily, H2: HSFamily, k: int, l: int, samples=None) -> bool:
    if H1.base != H2.base or H1.ring is not H2.ring:
        raise ValueError("families over different bases")
    if k + l > min(H1.N, H2.N):
        raise ValueError("k + l exceeds truncation")
    samples = sample_elements(H1) if samples is None else samples
    return all(H1.apply(H2.apply(x, l), k) == H2.apply(H1.apply(x, k), l) for x in samples)


def check_jacobian_invariance(H: HSFamily, k: int, n_k: int) -> bool:
    """d^[k] = Delta^{n_k} delta^[k] maps every r x r minor into a_r + I."""
    jd = H.jd
    target = jd.jacobian_ideal()
    if target.is_unit():
        return True
    for g in jd.jacobian_ideal_generators():
        if g.is_zero():
            continue
        v = H.apply(H.ring.elem(g), k).times_delta_power(n_k).in_base()
        if v is None:
            raise ValueError("Delta^%d delta^[%d] does not map %s into A" % (n_k, k, g))
        if not target.contains(v):
            return False
    return True
