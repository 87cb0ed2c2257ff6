"""The divided-power Weyl algebra D(P_n) in the normal-ordered basis x^a d^[b].

Products are normal-ordered with the closed form

    d^[b] x^g = sum_{k <= min(b, g)} C(g, k) x^(g-k) d^[b-k]
    d^[a] d^[b] = C(a+b, a) d^[a+b]

(coordinatewise, binomials mod p).
"""

from __future__ import annotations

import re
from itertools import product
from typing import Dict, Tuple

from .field import binomial_mod_p
from .parsing import ExpressionParser, ParseError
from .poly import Ambient, Monomial, Polynomial, format_terms, grevlex_key, monomial_str

Key = Tuple[Monomial, Monomial]

_D_NAME = re.compile(r"D(\d+)$")


class WeylOp:
    """sum a_{alpha,beta} x^alpha d^[beta]; ``terms`` maps (alpha, beta) to residues."""

    __slots__ = ("ambient", "terms")

    def __init__(self, ambient: Ambient, terms: Dict[Key, int] = None):
        p = ambient.p
        self.ambient = ambient
        self.terms = {k: v % p for k, v in (terms or {}).items() if v % p}

    # constructors
    @classmethod
    def scalar(cls, ambient: Ambient, c: int) -> "WeylOp":
        z = (0,) * ambient.n
        return cls(ambient, {(z, z): c})

    @classmethod
    def x(cls, ambient: Ambient, i: int) -> "WeylOp":
        """Multiplication by x_i (1-based)."""
        z = (0,) * ambient.n
        e = tuple(1 if k == i - 1 else 0 for k in range(ambient.n))
        return cls(ambient, {(e, z): 1})

    @classmethod
    def d(cls, ambient: Ambient, i: int, k: int = 1) -> "WeylOp":
        """The divided power d_i^[k] (1-based)."""
        z = (0,) * ambient.n
        e = tuple(k if s == i - 1 else 0 for s in range(ambient.n))
        return cls(ambient, {(z, e): 1})

    @classmethod
    def from_poly(cls, f: Polynomial) -> "WeylOp":
        z = (0,) * f.ambient.n
        return cls(f.ambient, {(m, z): c for m, c in f.terms.items()})

    def _coerce(self, other) -> "WeylOp":
        if isinstance(other, WeylOp):
            if other.ambient != self.ambient:
                raise ValueError("ambient mismatch")
            return other
        if isinstance(other, int):
            return WeylOp.scalar(self.ambient, other)
        if isinstance(other, Polynomial):
            return WeylOp.from_poly(other)
        return NotImplemented

    def __add__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        out = dict(self.terms)
        for k, v in b.terms.items():
            out[k] = out.get(k, 0) + v
        return WeylOp(self.ambient, out)

    __radd__ = __add__

    def __neg__(self):
        return WeylOp(self.ambient, {k: -v for k, v in self.terms.items()})

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
        return weyl_mul(self, b)

    def __rmul__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return weyl_mul(b, self)

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power")
        result = WeylOp.scalar(self.ambient, 1)
        for _ in range(e):
            result = weyl_mul(result, self)
        return result

    def __eq__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return False
        return self.terms == b.terms

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def order(self) -> int:
        """max |beta|; -1 for the zero operator."""
        return max((sum(b) for _, b in self.terms), default=-1)

    def __call__(self, f: Polynomial) -> Polynomial:
        return weyl_apply(self, f)

    def __str__(self):
        return print_weyl(self)

    def __repr__(self):
        return "WeylOp(%s)" % print_weyl(self)


def weyl_mul(u: WeylOp, v: WeylOp) -> WeylOp:
    p = u.ambient.p
    out: Dict[Key, int] = {}
    for (a, b), c1 in u.terms.items():
        for (g, d), c2 in v.terms.items():
            ranges = [range(min(bs, gs) + 1) for bs, gs in zip(b, g)]
            for kappa in product(*ranges):
                coef = c1 * c2
                for s, k in enumerate(kappa):
                    coef = coef * binomial_mod_p(g[s], k, p) * binomial_mod_p(b[s] - k + d[s], d[s], p) % p
                    if not coef:
                        break
                if not coef:
                    continue
                alpha = tuple(a[s] + g[s] - kappa[s] for s in range(len(a)))
                beta = tuple(b[s] - kappa[s] + d[s] for s in range(len(a)))
                key = (alpha, beta)
                out[key] = (out.get(key, 0) + coef) % p
    return WeylOp(u.ambient, out)


def weyl_dual(u: WeylOp) -> WeylOp:
    """x_i -> x_i, d_i^[k] -> (-1)^k d_i^[k], extended as an antihomomorphism."""
    A = u.ambient
    z = (0,) * A.n
    total = WeylOp(A)
    for (a, b), c in u.terms.items():
        sign = -1 if sum(b) % 2 else 1
        total = total + weyl_mul(WeylOp(A, {(z, b): sign * c}), WeylOp(A, {(a, z): 1}))
    return total


def weyl_apply(u: WeylOp, f: Polynomial) -> Polynomial:
    if f.ambient != u.ambient:
        raise ValueError("ambient mismatch")
    A = u.ambient
    total = A.zero()
    for (a, b), c in u.terms.items():
        g = f
        for s, k in enumerate(b):
            if k:
                g = g.divided_partial(s, k)
                if g.is_zero():
                    break
        if g.is_zero():
            continue
        total = total + g * A.monomial(a, c)
    return total


def _term_sort_key(key: Key):
    a, b = key
    return (grevlex_key(b), grevlex_key(a))


def print_weyl(u: WeylOp) -> str:
    F = u.ambient.field
    names = u.ambient.names
    items = []
    for key in sorted(u.terms, key=_term_sort_key, reverse=True):
        a, b = key
        parts = []
        xs = monomial_str(a, names)
        if xs:
            parts.append(xs)
        for s, k in enumerate(b):
            if k == 1:
                parts.append("D%d" % (s + 1))
            elif k > 1:
                parts.append("D%d^[%d]" % (s + 1, k))
        items.append((F.signed(u.terms[key]), "*".join(parts)))
    return format_terms(items)


def parse_weyl(text: str, ambient: Ambient) -> WeylOp:
    """Tokens: variable names, ``DI`` (= d_I^[1]), ``DI^[k]``, ``+ - * ^``, parentheses."""

    def op_for(name: str, pos: int, k: int = 1) -> WeylOp:
        m = _D_NAME.match(name)
        if m and name not in ambient._index:
            idx = int(m.group(1))
            if not 1 <= idx <= ambient.n:
                raise ParseError("no variable with index %d" % idx, pos, text)
            return WeylOp.d(ambient, idx, k)
        if k != 1:
            raise ParseError("divided power of a non-derivative %r" % name, pos, text)
        if name not in ambient._index:
            raise ParseError("unknown name %r" % name, pos, text)
        return WeylOp.x(ambient, ambient._index[name] + 1)

    parser = ExpressionParser(
        number=lambda c: WeylOp.scalar(ambient, c),
        name=op_for,
        divided=lambda name, k, pos: op_for(name, pos, k),
    )
    return parser.parse(text)


def weyl_eval(expr: str, ambient: Ambient) -> str:
    """Normal form of an operator expression, as text."""
    return print_weyl(parse_weyl(expr, ambient))
