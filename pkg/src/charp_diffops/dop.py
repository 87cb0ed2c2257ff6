"""Differential operators on A_D in the canonical basis sum c_k delta^[k].

A :class:`Chart` fixes a base pair (i, j), a localization and one lifted
higher derivation per complement variable.  :class:`LocalOp` values are
normal-ordered with the product rule
``delta^[a] (d .) = sum_{b <= a} delta^[b](d) delta^[a-b]`` and merged with
``delta^[a] delta^[b] = C(a+b, a) delta^[a+b]``.

The module also builds the generators d^[k] = Delta^{n(k)} delta^[k] of
D(A), their coefficient tables, and relation-suite reports.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .der import complement
from .field import binomial_mod_p
from .hs import HSFamily, hs_lift
from .poly import Polynomial
from .ring import JacobianData, LocElem, LocRing

Index = Tuple[int, ...]


class ClearingError(ArithmeticError):
    """A coefficient that must lie in A kept a denominator."""


class Chart:
    """Base pair (i, j) with its localization and higher derivations."""

    def __init__(self, jd: JacobianData, i, j, N: int = 8, ring: LocRing = None):
        self.jd = jd
        self.i, self.j = tuple(i), tuple(j)
        self.N = N
        self.delta_poly = jd.minor(self.i, self.j)
        if self.delta_poly.is_zero():
            raise ValueError("Delta(%s, %s) lies in the ideal" % (self.i, self.j))
        self.ring = ring if ring is not None else LocRing(jd.ideal, self.delta_poly)
        self.comp = complement(jd.n, self.j)
        self.families: Dict[int, HSFamily] = {
            nu: hs_lift(jd, self.i, self.j, nu, N, self.ring) for nu in self.comp
        }
        self.delta = self.ring.elem(self.delta_poly)
        self.delta_inv = self.ring.inverse_of(self.delta_poly)
        self._dpow: Dict[int, LocElem] = {0: self.ring.one()}
        self._multi: Dict[tuple, LocElem] = {}

    @property
    def n(self) -> int:
        return self.jd.n

    @property
    def rank(self) -> int:
        return len(self.comp)

    def __repr__(self):
        return "Chart(i=%s, j=%s, N=%d)" % (self.i, self.j, self.N)

    def delta_power(self, k: int) -> LocElem:
        got = self._dpow.get(k)
        if got is None:
            got = self.delta ** k if k > 0 else self.delta_inv ** (-k)
            self._dpow[k] = got
        return got

    def index(self, nu: int, k: int) -> Index:
        """Multi-index k*e_nu over the complement variables."""
        return tuple(k if c == nu else 0 for c in self.comp)

    def zero_index(self) -> Index:
        return (0,) * len(self.comp)

    def elem(self, a) -> LocElem:
        return a if isinstance(a, LocElem) else self.ring.elem(a)

    def apply_multi(self, kvec: Index, a) -> LocElem:
        """delta^[kvec](a) as the composite of the commuting families."""
        a = self.elem(a)
        if not any(kvec):
            return a
        if max(kvec) > self.N:
            raise ValueError("truncation overflow: order %d exceeds N=%d" % (max(kvec), self.N))
        key = (kvec, a.key())
        got = self._multi.get(key)
        if got is None:
            got = a
            for c, k in zip(self.comp, kvec):
                if k:
                    got = self.families[c].apply(got, k)
                    if got.is_zero():
                        break
            got = got.normalized()
            self._multi[key] = got
        return got

    # operator constructors
    def op(self, terms: Dict[Index, LocElem]) -> "LocalOp":
        return LocalOp(self, terms)

    def scalar(self, a) -> "LocalOp":
        return LocalOp(self, {self.zero_index(): self.elem(a)})

    def x(self, c: int) -> "LocalOp":
        return self.scalar(self.jd.ambient.var(c - 1))

    def delta_op(self, nu: int, k: int) -> "LocalOp":
        return LocalOp(self, {self.index(nu, k): self.ring.one()})

    def one(self) -> "LocalOp":
        return self.scalar(1)

    def zero(self) -> "LocalOp":
        return LocalOp(self, {})


class LocalOp:
    """sum_k c_k delta^[k] with coefficients in the chart's localization."""

    __slots__ = ("chart", "terms")

    def __init__(self, chart: Chart, terms: Dict[Index, LocElem]):
        self.chart = chart
        self.terms = {k: v for k, v in terms.items() if not v.is_zero()}

    def _coerce(self, other) -> "LocalOp":
        if isinstance(other, LocalOp):
            if other.chart is not self.chart:
                raise ValueError("operators over different bases")
            return other
        if isinstance(other, (int, Polynomial, LocElem)):
            return self.chart.scalar(other)
        return NotImplemented

    def __add__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        out = dict(self.terms)
        for k, v in b.terms.items():
            out[k] = out[k] + v if k in out else v
        return LocalOp(self.chart, out)

    __radd__ = __add__

    def __neg__(self):
        return LocalOp(self.chart, {k: -v for k, v in self.terms.items()})

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
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return local_op_mul(self, b)

    def __rmul__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return local_op_mul(b, self)

    def scale(self, c) -> "LocalOp":
        """Left multiplication by a scalar (cheap path)."""
        c = c if isinstance(c, (int, LocElem)) else self.chart.elem(c)
        return LocalOp(self.chart, {k: v * c for k, v in self.terms.items()})

    def order(self) -> int:
        return max((sum(k) for k in self.terms), default=-1)

    def coefficient(self, kvec: Index) -> LocElem:
        return self.terms.get(tuple(kvec), self.chart.ring.zero())

    def is_zero(self) -> bool:
        return not self.terms

    def apply(self, a) -> LocElem:
        ch = self.chart
        total = ch.ring.zero()
        for k, c in self.terms.items():
            v = ch.apply_multi(k, a)
            if v:
                total = total + c * v
        return total

    __call__ = apply

    def normalized(self) -> "LocalOp":
        return LocalOp(self.chart, {k: v.normalized() for k, v in self.terms.items()})

    def __eq__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return False
        return op_equal(self, b, mode="canonical")

    __hash__ = None

    def to_json(self) -> dict:
        return {",".join(map(str, k)): v.to_json() for k, v in sorted(self.terms.items())}

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for k in sorted(self.terms, key=lambda k: (sum(k), k), reverse=True):
            ops = "*".join(
                ("d%d" % c) + ("^[%d]" % e if e > 1 else "")
                for c, e in zip(self.chart.comp, k) if e
            )
            coef = str(self.terms[k].normalized())
            parts.append("(%s)*%s" % (coef, ops) if ops else "(%s)" % coef)
        return " + ".join(parts)

    __repr__ = __str__


def local_op_mul(u: LocalOp, v: LocalOp) -> LocalOp:
    if u.chart is not v.chart:
        raise ValueError("operators over different bases")
    ch = u.chart
    p = ch.jd.ambient.p
    acc: Dict[Index, List[LocElem]] = {}
    for alpha, c in u.terms.items():
        for gamma, d in v.terms.items():
            for beta in product(*(range(a + 1) for a in alpha)):
                db = ch.apply_multi(beta, d)
                if db.is_zero():
                    continue
                rest = tuple(a - b for a, b in zip(alpha, beta))
                coef = 1
                for r_, g in zip(rest, gamma):
                    coef = coef * binomial_mod_p(r_ + g, g, p) % p
                    if not coef:
                        break
                if not coef:
                    continue
                key = tuple(r_ + g for r_, g in zip(rest, gamma))
                acc.setdefault(key, []).append(c * db * coef)
    out = {}
    for key, vals in acc.items():
        total = vals[0]
        for x in vals[1:]:
            total = total + x
        out[key] = total
    return LocalOp(ch, out)


def commutator(u: LocalOp, v: LocalOp) -> LocalOp:
    return local_op_mul(u, v) - local_op_mul(v, u)


# -- equality -------------------------------------------------------------

def evaluation_points(chart: Chart, bound: int) -> List[LocElem]:
    """x^alpha * Delta^{-j} with |alpha| + j <= bound."""
    R = chart.ring
    A = chart.jd.ambient
    pts = []
    for total in range(bound + 1):
        for jpow in range(total + 1):
            deg = total - jpow
            for alpha in _monomials(A.n, deg):
                pts.append(R.elem(A.monomial(alpha)) * chart.delta_power(-jpow))
    return pts


def _monomials(n: int, deg: int):
    if n == 0:
        if deg == 0:
            yield ()
        return
    if n == 1:
        yield (deg,)
        return
    for first in range(deg, -1, -1):
        for rest in _monomials(n - 1, deg - first):
            yield (first,) + rest


def monomials_upto(n: int, bound: int):
    for d in range(bound + 1):
        yield from _monomials(n, d)


def op_equal_canonical(u: LocalOp, v: LocalOp) -> bool:
    keys = set(u.terms) | set(v.terms)
    return all(u.coefficient(k) == v.coefficient(k) for k in keys)


def op_equal_eval(u: LocalOp, v: LocalOp, bound: int = None) -> bool:
    if bound is None:
        bound = max(u.order(), v.order(), 0)
    return all(u.apply(a) == v.apply(a) for a in evaluation_points(u.chart, bound))


def op_equal(u: LocalOp, v: LocalOp, mode: str = "canonical") -> bool:
    """Equality of operators.

    ``canonical`` compares coefficients, ``evaluation`` compares values on
    x^alpha Delta^{-j}; ``both`` runs the two and insists they agree.
    """
    if u.chart is not v.chart:
        raise ValueError("operators over different bases")
    if mode == "canonical":
        return op_equal_canonical(u, v)
    if mode == "evaluation":
        return op_equal_eval(u, v)
    if mode == "both":
        a, b = op_equal_canonical(u, v), op_equal_eval(u, v)
        if a != b:
            raise AssertionError("canonical and evaluation equality disagree")
        return a
    raise ValueError("unknown mode %r" % mode)


def in_DA_witness(u: LocalOp):
    """First monomial x^alpha (|alpha| <= order) with u(x^alpha) outside A, or None."""
    ch = u.chart
    A = ch.jd.ambient
    for alpha in monomials_upto(A.n, max(u.order(), 0)):
        if u.apply(A.monomial(alpha)).in_base() is None:
            return alpha
    return None


def in_DA(u: LocalOp) -> bool:
    """u maps A into A (values on monomials up to its order decide this)."""
    return in_DA_witness(u) is None


# -- exponent schedule --------------------------------------------------------

@dataclass
class ExponentSchedule:
    K_max: int
    m: List[int]
    M: int
    provisional: bool = False

    @property
    def n(self) -> List[int]:
        return [self.n_of(k) for k in range(self.K_max + 1)]

    def n_of(self, k: int) -> int:
        """The linear schedule k*M (defined for every k)."""
        return k * self.M

    def superadditive(self) -> bool:
        n = self.n
        return n[0] == 0 and all(
            n[a + b] >= n[a] + n[b] for a in range(self.K_max + 1) for b in range(self.K_max + 1 - a)
        )

    def to_json(self) -> dict:
        return {"K_max": self.K_max, "m": list(self.m), "n": self.n, "M": self.M, "provisional": self.provisional}


def minimal_exponents(chart: Chart, K_max: int) -> List[int]:
    """m(k): least s with Delta^s delta_nu^[k] mapping A into A, over all nu."""
    if K_max > chart.N:
        raise ValueError("K_max exceeds the truncation order")
    A = chart.jd.ambient
    R = chart.ring
    if R.delta != chart.delta_poly:
        raise ValueError("schedules are measured in the chart's own localization")
    m = [0]
    for k in range(1, K_max + 1):
        best = 0
        for nu in chart.comp:
            H = chart.families[nu]
            for alpha in monomials_upto(A.n, k):
                best = max(best, H.apply(R.elem(A.monomial(alpha)), k).min_exponent())
        m.append(best)
    return m


def compute_schedule(chart: Chart, K_max: int) -> ExponentSchedule:
    m = minimal_exponents(chart, K_max)
    M = max([-(-m[k] // k) for k in range(1, K_max + 1)], default=0)
    return ExponentSchedule(K_max, m, M)


def merge_schedules(schedules: Sequence[ExponentSchedule]) -> ExponentSchedule:
    """One linear schedule valid for several charts (largest slope)."""
    K = min(s.K_max for s in schedules)
    m = [max(s.m[k] for s in schedules) for k in range(K + 1)]
    return ExponentSchedule(K, m, max(s.M for s in schedules), any(s.provisional for s in schedules))


def build_dk(chart: Chart, sched: ExponentSchedule, nu: int, k: int) -> LocalOp:
    if k > sched.K_max:
        raise ValueError("k exceeds K_max")
    if k == 0:
        return chart.one()
    return LocalOp(chart, {chart.index(nu, k): chart.delta_power(sched.n_of(k))})


def dk_op(chart: Chart, sched: ExponentSchedule, nu: int, k: int) -> LocalOp:
    """d^[k] without the K_max guard (the schedule is linear)."""
    if k == 0:
        return chart.one()
    return LocalOp(chart, {chart.index(nu, k): chart.delta_power(sched.n_of(k))})


# -- coefficient tables -------------------------------------------------------

def _clear(x: LocElem, what: str) -> Polynomial:
    v = x.in_base()
    if v is None:
        raise ClearingError("%s = %s is not in A" % (what, x.normalized()))
    return v


def coeff_a(chart: Chart, sched: ExponentSchedule, nu: int, k: int, s: int) -> Dict[int, Polynomial]:
    """a(s, t), t = 0..k: Delta^{-s} delta^[k] Delta^{n(k)+k+s} = sum_t a(s,t) d^[t]."""
    L = local_op_mul(
        local_op_mul(chart.scalar(chart.delta_power(-s)), chart.delta_op(nu, k)),
        chart.scalar(chart.delta_power(sched.n_of(k) + k + s)),
    )
    allowed = {chart.index(nu, t) for t in range(k + 1)}
    stray = [key for key in L.terms if key not in allowed]
    if stray:
        raise AssertionError("conjugated operator left the family: %s" % stray)
    return {
        t: _clear(L.coefficient(chart.index(nu, t)) * chart.delta_power(-sched.n_of(t)), "a(%d,%d)" % (s, t))
        for t in range(k + 1)
    }


def ad_x(chart: Chart, c: int, u: LocalOp) -> LocalOp:
    """(ad x_c)(u) = x_c u - u x_c."""
    return commutator(chart.x(c), u)


def psi(chart: Chart, nu: int, u: LocalOp) -> LocalOp:
    """sum_j (ad x_nu)^j(u) delta_nu^[j]; stops once the ad-power vanishes."""
    total = chart.zero()
    w = u
    j = 0
    while not w.is_zero():
        if j > u.order() + 1:
            raise AssertionError("ad-sum did not terminate at the operator order")
        total = total + local_op_mul(w, chart.delta_op(nu, j)) if j else total + w
        w = ad_x(chart, nu, w)
        j += 1
    return total


def coeff_a_psi(chart: Chart, sched: ExponentSchedule, nu: int, k: int, s: int) -> Dict[int, Polynomial]:
    """The same row through psi((-ad x_nu)^t L) Delta^{-n(t)}."""
    L = local_op_mul(
        local_op_mul(chart.scalar(chart.delta_power(-s)), chart.delta_op(nu, k)),
        chart.scalar(chart.delta_power(sched.n_of(k) + k + s)),
    )
    out = {}
    w = L
    for t in range(k + 1):
        ps = psi(chart, nu, w)
        if ps.order() > 0:
            raise AssertionError("psi did not return a multiplication operator")
        out[t] = _clear(ps.coefficient(chart.zero_index()) * chart.delta_power(-sched.n_of(t)), "psi a(%d,%d)" % (s, t))
        w = -ad_x(chart, nu, w)
    return out


@dataclass
class ChangeOfBase:
    """delta'^[l] = sum_k b_k delta^[k] and its clearing data."""

    l: int
    b: Dict[Index, LocElem]
    m: Optional[int]
    c: Dict[Index, Polynomial]
    plain_m: Optional[int]  # least m with Delta^m b in A, without the Delta' factor
    validated: bool
    psi_agrees: Optional[bool]
    bound: int

    @property
    def plain_form_clears(self) -> bool:
        return self.plain_m is not None

    def to_json(self) -> dict:
        def k2s(k):
            return ",".join(map(str, k))
        return {
            "l": self.l,
            "b": {k2s(k): v.to_json() for k, v in sorted(self.b.items())},
            "m": self.m,
            "c": {k2s(k): str(v) for k, v in sorted(self.c.items())},
            "plain_form_clears": self.plain_form_clears,
            "plain_m": self.plain_m,
            "validated": self.validated,
            "psi_agrees": self.psi_agrees,
            "clearing_bound": self.bound,
        }


def _comp_monomial(chart: Chart, gamma: Index) -> Polynomial:
    A = chart.jd.ambient
    e = [0] * A.n
    for c, g in zip(chart.comp, gamma):
        e[c - 1] = g
    return A.monomial(e)


def _indices_upto(r: int, l: int) -> List[Index]:
    out = []
    for d in range(l + 1):
        out.extend(_monomials(r, d))
    return out


def coeff_b_c(chart: Chart, target: HSFamily, l: int, n_l: int, delta_target: Polynomial,
              slack: int = 4, blk2_check: bool = True) -> ChangeOfBase:
    """Express the target family's delta'^[l] in the base chart.

    Both must share one localization (containing both minors).  ``n_l`` is
    the schedule value n(l) used for d'^[l] = Delta'^{n(l)} delta'^[l].
    """
    if target.ring is not chart.ring:
        raise ValueError("target family must live in the chart's localization")
    p = chart.jd.ambient.p
    R = chart.ring
    idx = _indices_upto(len(chart.comp), l)
    b: Dict[Index, LocElem] = {}
    for gamma in idx:
        val = target.apply(R.elem(_comp_monomial(chart, gamma)), l)
        for k, bk in b.items():
            if k == gamma or any(x > g for x, g in zip(k, gamma)):
                continue
            coef = 1
            for x, g in zip(k, gamma):
                coef = coef * binomial_mod_p(g, x, p) % p
            if coef:
                rest = tuple(g - x for g, x in zip(gamma, k))
                val = val - bk * R.elem(_comp_monomial(chart, rest)) * coef
        val = val.normalized()
        if not val.is_zero():
            b[gamma] = val
    B = LocalOp(chart, b)
    validated = all(B.apply(a) == target.apply(a, l) for a in evaluation_points(chart, l))

    psi_ok = None
    if blk2_check:
        psi_ok = True
        for k in idx:
            total = R.zero()
            for jv in product(*(range(x + 1) for x in k)):
                coef = 1
                for x, y in zip(k, jv):
                    coef = coef * binomial_mod_p(x, y, p) % p
                if not coef:
                    continue
                if sum(k) - sum(jv) & 1:
                    coef = -coef
                term = R.elem(_comp_monomial(chart, tuple(x - y for x, y in zip(k, jv))))
                total = total + term * target.apply(R.elem(_comp_monomial(chart, jv)), l) * coef
            if not total == B.coefficient(k):
                psi_ok = False

    smax = max((v.normalized().s for v in b.values()), default=0)
    bound = 2 * smax + slack
    dt = R.elem(delta_target) ** n_l

    def least(scaled: Callable[[LocElem], LocElem]) -> Optional[int]:
        for m in range(bound + 1):
            dm = chart.delta_power(m)
            if all(scaled(v * dm).in_base() is not None for v in b.values()):
                return m
        return None

    m = least(lambda x: x * dt)
    plain_m = least(lambda x: x)
    c = {}
    if m is not None:
        dm = chart.delta_power(m)
        c = {k: (v * dm * dt).in_base() for k, v in b.items()}
    return ChangeOfBase(l, b, m, c, plain_m, validated, psi_ok, bound)


# -- relation suites ----------------------------------------------------------

@dataclass
class RelationCheck:
    relation: str
    instance: Dict[str, int]
    canonical: bool
    evaluation: Optional[bool] = None

    @property
    def passed(self) -> bool:
        return self.canonical and self.evaluation is not False

    def to_json(self) -> dict:
        return {"relation": self.relation, "instance": dict(sorted(self.instance.items())),
                "canonical": self.canonical, "evaluation": self.evaluation, "pass": self.passed}


@dataclass
class RelationReport:
    checks: List[RelationCheck] = field(default_factory=list)
    notes: Dict[str, object] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> List[RelationCheck]:
        return [c for c in self.checks if not c.passed]

    def families(self) -> Dict[str, bool]:
        out: Dict[str, bool] = {}
        for c in self.checks:
            out[c.relation] = out.get(c.relation, True) and c.passed
        return out

    def extend(self, other: "RelationReport"):
        self.checks.extend(other.checks)
        self.notes.update(other.notes)

    def to_json(self) -> dict:
        return {"pass": self.passed, "count": len(self.checks), "families": self.families(),
                "checks": [c.to_json() for c in self.checks], "notes": self.notes}


def _compare(name: str, instance: dict, lhs: LocalOp, rhs: LocalOp, evaluate: bool) -> RelationCheck:
    canon = op_equal_canonical(lhs, rhs)
    ev = None
    if evaluate:
        ev = op_equal_eval(lhs, rhs)
        if ev != canon:
            raise AssertionError("canonical and evaluation equality disagree on %s %s" % (name, instance))
    return RelationCheck(name, instance, canon, ev)


def _run(tasks: List[Callable[[], RelationCheck]], threads: int = 1) -> List[RelationCheck]:
    if threads <= 1:
        return [t() for t in tasks]
    from concurrent.futures import ThreadPoolExecutor

    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda t: t(), tasks))


def verify_rel_rpC(chart: Chart, k_max: int, evaluate: bool = True, threads: int = 1) -> RelationReport:
    """Commutation, iterativity and the two commutator rules for delta^[k]."""
    if 2 * k_max > chart.N:
        raise ValueError("need N >= 2*k_max")
    p = chart.jd.ambient.p
    tasks = []
    comp = chart.comp
    rng = range(1, k_max + 1)
    for nu in comp:
        for mu in comp:
            if nu < mu:
                for k in rng:
                    for l in rng:
                        def t(nu=nu, mu=mu, k=k, l=l):
                            a, b = chart.delta_op(nu, k), chart.delta_op(mu, l)
                            return _compare("commute", {"nu": nu, "mu": mu, "k": k, "l": l},
                                            a * b, b * a, evaluate)
                        tasks.append(t)
        for k in rng:
            for l in rng:
                def t(nu=nu, k=k, l=l):
                    lhs = chart.delta_op(nu, k) * chart.delta_op(nu, l)
                    rhs = chart.delta_op(nu, k + l).scale(binomial_mod_p(k + l, k, p))
                    return _compare("iterative", {"nu": nu, "k": k, "l": l}, lhs, rhs, evaluate)
                tasks.append(t)
        for k in rng:
            for mu in comp:
                def t(nu=nu, mu=mu, k=k):
                    lhs = commutator(chart.delta_op(nu, k), chart.x(mu))
                    rhs = chart.delta_op(nu, k - 1) if mu == nu else chart.zero()
                    return _compare("x_complement", {"nu": nu, "mu": mu, "k": k}, lhs, rhs, evaluate)
                tasks.append(t)
            for s in chart.j:
                def t(nu=nu, s=s, k=k):
                    lhs = commutator(chart.delta_op(nu, k), chart.x(s))
                    rhs = chart.zero()
                    xs = chart.ring.elem(chart.jd.ambient.var(s - 1))
                    for tt in range(1, k + 1):
                        rhs = rhs + chart.delta_op(nu, k - tt).scale(chart.apply_multi(chart.index(nu, tt), xs))
                    return _compare("x_bound", {"nu": nu, "s": s, "k": k}, lhs, rhs, evaluate)
                tasks.append(t)
    return RelationReport(_run(tasks, threads))


def _a_op(chart: Chart, sched: ExponentSchedule, nu: int, k: int, s: int) -> LocalOp:
    """sum_t a^[k](s,t) d^[t] as an operator."""
    row = coeff_a(chart, sched, nu, k, s)
    total = chart.zero()
    for t, a in row.items():
        total = total + dk_op(chart, sched, nu, t).scale(chart.elem(a))
    return total


def verify_R(chart: Chart, sched: ExponentSchedule, k_max: int, evaluate: bool = True,
             threads: int = 1) -> RelationReport:
    """The relations (R1)-(R4) among the generators d^[k] over A."""
    if 2 * k_max > chart.N:
        raise ValueError("need N >= 2*k_max")
    p = chart.jd.ambient.p
    n = sched.n_of
    D = chart.delta_power
    d = lambda nu, k: dk_op(chart, sched, nu, k)
    sc = chart.scalar
    comp = chart.comp
    rng = range(1, k_max + 1)
    tasks = []
    for nu in comp:
        for mu in comp:
            for k in rng:
                for l in rng:
                    def r1(nu=nu, mu=mu, k=k, l=l):
                        lhs = sc(D(n(l))) * d(nu, k) * _a_op(chart, sched, mu, l, 0) * sc(D(n(k) + k))
                        rhs = sc(D(n(k))) * d(mu, l) * _a_op(chart, sched, nu, k, 0) * sc(D(n(l) + l))
                        return _compare("R1", {"nu": nu, "mu": mu, "k": k, "l": l}, lhs, rhs, evaluate)
                    tasks.append(r1)
        for k in rng:
            for l in rng:
                def r2(nu=nu, k=k, l=l):
                    lhs = sc(D(n(k + l) - n(k))) * d(nu, k) * _a_op(chart, sched, nu, l, 0)
                    rhs = (d(nu, k + l) * sc(D(n(l) + l))).scale(binomial_mod_p(k + l, l, p))
                    return _compare("R2", {"nu": nu, "k": k, "l": l}, lhs, rhs, evaluate)
                tasks.append(r2)
        for k in rng:
            for mu in comp:
                def r3(nu=nu, mu=mu, k=k):
                    lhs = commutator(d(nu, k), chart.x(mu))
                    rhs = d(nu, k - 1).scale(D(n(k) - n(k - 1))) if mu == nu else chart.zero()
                    return _compare("R3", {"nu": nu, "mu": mu, "k": k}, lhs, rhs, evaluate)
                tasks.append(r3)
            for s in chart.j:
                def r4(nu=nu, s=s, k=k):
                    lhs = commutator(d(nu, k), chart.x(s))
                    xs = chart.jd.ambient.var(s - 1)
                    rhs = chart.zero()
                    for t in range(1, k + 1):
                        val = _clear(d(nu, t).apply(xs), "d^[%d](x%d)" % (t, s))
                        coef = D(n(k) - n(t) - n(k - t)) * chart.elem(val)
                        rhs = rhs + d(nu, k - t).scale(coef)
                    return _compare("R4", {"nu": nu, "s": s, "k": k}, lhs, rhs, evaluate)
                tasks.append(r4)
    return RelationReport(_run(tasks, threads))


def verify_R5(jd: JacobianData, base, target, sigma: int, sched: ExponentSchedule, l_max: int,
              N: int = 8, slack: int = 4, evaluate: bool = True) -> RelationReport:
    """(R5) between two charts, checked in the localization at Delta*Delta'.

    The identity is instantiated with the measured clearing exponent m(l)
    such that Delta^m Delta'^{n(l)} b_{l,k} lies in A; whether the plain
    Delta^m b_{l,k} clears is recorded separately.  The right-hand factor
    Delta^{Sigma} uses Sigma* = max over |k| <= l of Sigma_{n-r}(k), with
    the surplus Delta^{Sigma* - Sigma(k)} kept on the right of each term.
    """
    (i, j), (i2, j2) = base, target
    delta, delta2 = jd.minor(i, j), jd.minor(i2, j2)
    ring = LocRing(jd.ideal, delta * delta2)
    chart = Chart(jd, i, j, N, ring)
    tfam = hs_lift(jd, i2, j2, sigma, N, ring)
    D = chart.delta_power
    n = sched.n_of
    report = RelationReport()
    dt = ring.elem(delta2)
    for l in range(1, l_max + 1):
        cb = coeff_b_c(chart, tfam, l, n(l), delta2, slack)
        inst = {"l": l, "sigma": sigma}
        report.notes["l=%d" % l] = cb.to_json()
        if cb.m is None:
            report.checks.append(RelationCheck("R5", inst, False, None))
            continue
        sig = lambda k: sum(n(x) + x for x in k)
        sstar = max((sig(k) for k in _indices_upto(len(chart.comp), l)), default=0)
        B = LocalOp(chart, cb.b)
        lhs = (B * chart.scalar(D(sstar))).scale(D(cb.m) * dt ** n(l))
        rhs = chart.zero()
        for k, ck in cb.c.items():
            term = chart.scalar(ck)
            acc = 0
            for rho, (nu, kr) in enumerate(zip(chart.comp, k)):
                term = term * _a_op(chart, sched, nu, kr, acc)
                acc += n(kr) + kr
            rhs = rhs + term * chart.scalar(D(sstar - acc))
        canon = op_equal_canonical(lhs, rhs)
        ev = None
        if evaluate:
            # left side evaluated through the target family directly
            scale = D(cb.m) * dt ** n(l)
            ev = all(
                tfam.apply(a * D(sstar), l) * scale == rhs.apply(a)
                for a in evaluation_points(chart, l)
            )
        report.checks.append(RelationCheck("R5", inst, canon and cb.validated, ev))
    return report
