"""Determinant derivations of A = P_n/I and their relations.

All tuples are 1-based.  A derivation is stored by its coefficient vector
(c_1..c_n), meaning sum_k c_k d/dx_k.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .poly import Polynomial
from .ring import Ideal, JacobianData, LocElem, LocRing, QuotElem

Tuple_ = Tuple[int, ...]


class Derivation:
    """D = sum_k c_k d_k acting on A; ``coeffs`` are normal forms."""

    def __init__(self, ideal: Ideal, coeffs: Sequence, checked: bool = False):
        if len(coeffs) != ideal.ambient.n:
            raise ValueError("need one coefficient per variable")
        self.ideal = ideal
        self.coeffs = tuple(_as_poly(ideal, c) for c in coeffs)
        if checked and not check_descends(self):
            raise ValueError("coefficient vector does not define a derivation of A")

    def apply_poly(self, f: Polynomial) -> Polynomial:
        """D applied to a polynomial lift, reduced mod I."""
        total = self.ideal.ambient.zero()
        for k, c in enumerate(self.coeffs):
            if c:
                d = f.diff(k)
                if d:
                    total = total + c * d
        return self.ideal.reduce(total)

    def __call__(self, a) -> QuotElem:
        return apply_derivation(self, a)

    def __add__(self, other: "Derivation") -> "Derivation":
        return Derivation(self.ideal, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: "Derivation") -> "Derivation":
        return Derivation(self.ideal, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def scale(self, a) -> "Derivation":
        a = _as_poly(self.ideal, a)
        return Derivation(self.ideal, [a * c for c in self.coeffs])

    __rmul__ = scale

    def __eq__(self, other):
        return isinstance(other, Derivation) and self.coeffs == other.coeffs

    __hash__ = None

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def to_strings(self) -> List[str]:
        return [str(c) for c in self.coeffs]

    def __str__(self):
        return format_derivation(self.coeffs)

    __repr__ = __str__


def _as_poly(ideal: Ideal, c) -> Polynomial:
    if isinstance(c, QuotElem):
        return c.nf
    if isinstance(c, Polynomial):
        return ideal.reduce(c)
    if isinstance(c, int):
        return ideal.ambient.const(c)
    if isinstance(c, str):
        return ideal.reduce(ideal.ambient.parse(c))
    raise TypeError("cannot use %r as a coefficient" % (c,))


def format_derivation(coeffs: Sequence[Polynomial], symbol: str = "D") -> str:
    parts = []
    for k, c in enumerate(coeffs):
        if c.is_zero():
            continue
        s = str(c)
        op = "%s%d" % (symbol, k + 1)
        if s == "1":
            parts.append(op)
        elif s == "-1":
            parts.append("-" + op)
        elif len(c) == 1:
            parts.append("%s*%s" % (s, op))
        else:
            parts.append("(%s)*%s" % (s, op))
    if not parts:
        return "0"
    out = parts[0]
    for t in parts[1:]:
        out += " - " + t[1:] if t.startswith("-") else " + " + t
    return out


def apply_derivation(D: Derivation, a) -> QuotElem:
    f = a.nf if isinstance(a, QuotElem) else _as_poly(D.ideal, a)
    return QuotElem(D.ideal, D.apply_poly(f))


def check_descends(D: Derivation) -> bool:
    """True iff D(f_s) lies in I for every generator f_s."""
    return all(D.apply_poly(f).is_zero() for f in D.ideal.generators)


# -- determinant derivations ----------------------------------------------

def cofactors(jd: JacobianData, rows: Tuple_, cols: Sequence[int]) -> List[Polynomial]:
    """Signed Laplace cofactors along the operator row, as polynomials (not reduced)."""
    r = len(rows)
    if len(cols) != r + 1:
        raise ValueError("need r+1 columns")
    A = jd.ambient
    coeffs = [A.zero() for _ in range(A.n)]
    for nu in range(1, r + 2):
        rest = [c - 1 for c in cols[: nu - 1]] + [c - 1 for c in cols[nu:]]
        m = jd.J.minor([i - 1 for i in rows], rest)
        coeffs[cols[nu - 1] - 1] = coeffs[cols[nu - 1] - 1] + (m if (r + 1 + nu) % 2 == 0 else -m)
    return coeffs


def det_derivation(jd: JacobianData, rows: Tuple_, cols: Sequence[int]) -> Derivation:
    """The (r+1)x(r+1) determinant with last row d_{cols[0]}, ..., d_{cols[r]}.

    Columns are taken in the order given (not necessarily increasing), so
    ``det_derivation(jd, i, j + (k,))`` is the derivation d_{i;j,k}.
    """
    r = len(rows)
    if len(cols) != r + 1:
        raise ValueError("need r+1 columns")
    A = jd.ambient
    coeffs = [A.zero() for _ in range(A.n)]
    for nu in range(1, r + 2):
        rest = tuple(cols[: nu - 1]) + tuple(cols[nu:])
        m = jd.minor(rows, rest)
        coeffs[cols[nu - 1] - 1] = coeffs[cols[nu - 1] - 1] + (m if (r + 1 + nu) % 2 == 0 else -m)
    return Derivation(jd.ideal, coeffs)


def build_det_derivation(jd: JacobianData, i: Tuple_, jprime: Tuple_) -> Derivation:
    ts = jd.tuples
    if tuple(i) not in ts.Ir:
        raise ValueError("row tuple %s is not in I_r" % (i,))
    if tuple(jprime) not in ts.Jr1:
        raise ValueError("column tuple %s is not in the critical set" % (jprime,))
    return det_derivation(jd, tuple(i), tuple(jprime))


def derivation_generators(jd: JacobianData) -> Dict[Tuple[Tuple_, Tuple_], Derivation]:
    ts = jd.tuples
    return {(i, jj): det_derivation(jd, i, jj) for i in ts.Ir for jj in ts.Jr1}


def complement(n: int, j: Sequence[int]) -> List[int]:
    js = set(j)
    return [k for k in range(1, n + 1) if k not in js]


def verify_derel(jd: JacobianData, i: Tuple_, i2: Tuple_, j: Tuple_, j2: Tuple_) -> bool:
    """Delta(i,j) d_{i2,j2} == sum_l (-1)^{r+1+nu_l} Delta(i2; j2 minus nu_l) d_{i;j,j2[nu_l]}."""
    ts = jd.tuples
    if i not in ts.Ir or i2 not in ts.Ir or j not in ts.Jr or j2 not in ts.Jr1:
        raise ValueError("index-set mismatch")
    r = jd.r
    I = jd.ideal
    lhs = det_derivation(jd, i2, j2).scale(jd.minor(i, j))
    rhs = Derivation(I, [0] * jd.n)
    for nu, col in enumerate(j2, start=1):
        if col in j:
            continue
        sign = 1 if (r + 1 + nu) % 2 == 0 else -1
        lam = jd.minor(i2, j2[: nu - 1] + j2[nu:]).scale(sign)
        rhs = rhs + det_derivation(jd, i, j + (col,)).scale(lam)
    return lhs == rhs


def verify_P3_ratio(jd: JacobianData, i: Tuple_, i2: Tuple_, j2: Tuple_, k: int) -> Optional[bool]:
    """Delta(i; j2 minus k) d_{i2,j2} == (-1)^{r+1+k} Delta(i2; j2 minus k) d_{i,j2}.

    Returns None when Delta(i; j2 minus k) vanishes (statement not applicable).
    """
    rest = j2[: k - 1] + j2[k:]
    den = jd.minor(i, rest)
    if den.is_zero():
        return None
    sign = 1 if (jd.r + 1 + k) % 2 == 0 else -1
    lhs = det_derivation(jd, i2, j2).scale(den)
    rhs = det_derivation(jd, i, j2).scale(jd.minor(i2, rest).scale(sign))
    return lhs == rhs


@dataclass
class MembershipResult:
    member: bool
    values: Dict[int, Polynomial]
    failing: Optional[int] = None
    quotients: Dict[int, Polynomial] = field(default_factory=dict)

    def __bool__(self):
        return self.member


def membership_from_values(jd: JacobianData, values: Dict[int, Polynomial], i: Tuple_, j: Tuple_) -> MembershipResult:
    """Decide whether prescribed values a_{j_k} = D(x_{j_k}) on the complement
    variables come from a derivation D of A.

    The test is the system of inclusions
    sum_k Delta(i; j with slot nu replaced by j_k) a_{j_k} in A*Delta(i,j).
    """
    I = jd.ideal
    delta = jd.minor(i, j)
    comp = complement(jd.n, j)
    vals = {k: _as_poly(I, values.get(k, 0)) for k in comp}
    quotients = {}
    for nu in range(1, len(j) + 1):
        total = jd.ambient.zero()
        for k in comp:
            if vals[k].is_zero():
                continue
            cols = j[: nu - 1] + (k,) + j[nu:]
            total = total + jd.minor(i, cols) * vals[k]
        q = I.divide(total, delta)
        if q is None:
            return MembershipResult(False, vals, failing=nu)
        quotients[nu] = q
    return MembershipResult(True, vals, quotients=quotients)


def membership_der(jd: JacobianData, D: Derivation, i: Tuple_, j: Tuple_) -> MembershipResult:
    comp = complement(jd.n, j)
    values = {k: D.coeffs[k - 1] for k in comp}
    return membership_from_values(jd, values, i, j)


def reconstruct(jd: JacobianData, values: Dict[int, Polynomial], i: Tuple_, j: Tuple_) -> Optional[Derivation]:
    """Delta^{-1} sum_k a_{j_k} d_{i;j,j_k} as a coefficient vector over A.

    Returns None if some coefficient is not in A.
    """
    I = jd.ideal
    delta = jd.minor(i, j)
    total = Derivation(I, [0] * jd.n)
    for k, a in values.items():
        if a.is_zero():
            continue
        total = total + det_derivation(jd, i, j + (k,)).scale(a)
    coeffs = []
    for c in total.coeffs:
        q = I.divide(c, delta)
        if q is None:
            return None
        coeffs.append(q)
    return Derivation(I, coeffs)


@dataclass
class RewriteResult:
    lambdas: Dict[int, Polynomial]
    identity_holds: bool


def rewrite_P3(jd: JacobianData, i2: Tuple_, j2: Tuple_, i: Tuple_, j: Tuple_) -> RewriteResult:
    """Coefficients lambda_k = d_{i2,j2}(x_{j_k}) and the check
    d_{i2,j2} = Delta(i,j)^{-1} sum_k lambda_k d_{i;j,j_k} over A_Delta."""
    target = det_derivation(jd, i2, j2)
    comp = complement(jd.n, j)
    lambdas = {k: target.coeffs[k - 1] for k in comp}
    R = LocRing(jd.ideal, jd.minor(i, j))
    ok = True
    rhs = [R.zero() for _ in range(jd.n)]
    for k, lam in lambdas.items():
        if lam.is_zero():
            continue
        dk = det_derivation(jd, i, j + (k,))
        for c in range(jd.n):
            rhs[c] = rhs[c] + R.elem(dk.coeffs[c] * lam, 1)
    for c in range(jd.n):
        if not rhs[c] == R.elem(target.coeffs[c]):
            ok = False
    return RewriteResult(lambdas, ok)


class LocDerivation:
    """A derivation of A_Delta with coefficients in the localization."""

    def __init__(self, coeffs: Sequence[LocElem]):
        self.coeffs = tuple(coeffs)
        self.ring = coeffs[0].ring

    @classmethod
    def from_derivation(cls, D: Derivation, ring: LocRing, scale: LocElem = None) -> "LocDerivation":
        cs = [ring.elem(c) for c in D.coeffs]
        if scale is not None:
            cs = [scale * c for c in cs]
        return cls(cs)

    def __call__(self, a: LocElem) -> LocElem:
        """Quotient rule on num / D^s."""
        R = self.ring
        num = R.elem(a.num)
        dnum = sum((c * R.elem(a.num.diff(k)) for k, c in enumerate(self.coeffs)), R.zero())
        if a.s == 0:
            return dnum
        ddelta = sum((c * R.elem(R.delta.diff(k)) for k, c in enumerate(self.coeffs)), R.zero())
        # (num/D^s)' = num'/D^s - s num D'/D^{s+1}
        return dnum.times_delta_power(-a.s) - (num * ddelta * (a.s % R.ambient.p)).times_delta_power(-a.s - 1)

    def __eq__(self, other):
        return all(a == b for a, b in zip(self.coeffs, other.coeffs))

    __hash__ = None
