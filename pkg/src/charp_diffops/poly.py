"""Sparse multivariate polynomials over F_p.

A polynomial is a dict mapping exponent tuples to nonzero residues in
``[0, p)``.  The raw-dict helpers at the top of the module are the hot
kernels used by the Groebner and series code; :class:`Polynomial` wraps a
dict together with its :class:`Ambient`.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Dict, Iterable, List, Sequence, Tuple

from .field import PrimeField, binomial_mod_p
from .parsing import ExpressionParser, ParseError

Monomial = Tuple[int, ...]
Terms = Dict[Monomial, int]


# -- term orders ---------------------------------------------------------
# Keys are integers so heaps and max() compare cheaply; exponents are packed
# in base 2^20, far above any degree reached here.

_B = 20


@lru_cache(maxsize=1 << 18)
def grevlex_key(e: Monomial) -> int:
    k = sum(e)
    for x in reversed(e):
        k = (k << _B) | ((1 << _B) - 1 - x)
    return k


@lru_cache(maxsize=1 << 18)
def lex_key(e: Monomial) -> int:
    k = 0
    for x in e:
        k = (k << _B) | x
    return k


@lru_cache(maxsize=1 << 18)
def grlex_key(e: Monomial) -> int:
    k = sum(e)
    for x in e:
        k = (k << _B) | x
    return k


TERM_ORDERS = {"grevlex": grevlex_key, "lex": lex_key, "grlex": grlex_key}


def order_key(order: str):
    try:
        return TERM_ORDERS[order]
    except KeyError:
        raise ValueError("unknown term order %r" % order) from None


# -- raw kernels -----------------------------------------------------------

def t_add(a: Terms, b: Terms, p: int) -> Terms:
    if len(a) < len(b):
        a, b = b, a
    out = dict(a)
    for m, c in b.items():
        v = (out.get(m, 0) + c) % p
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return out


def t_sub(a: Terms, b: Terms, p: int) -> Terms:
    out = dict(a)
    for m, c in b.items():
        v = (out.get(m, 0) - c) % p
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return out


def t_scale(a: Terms, c: int, p: int) -> Terms:
    c %= p
    if c == 0:
        return {}
    if c == 1:
        return dict(a)
    return {m: v * c % p for m, v in a.items()}


def t_mul(a: Terms, b: Terms, p: int) -> Terms:
    if not a or not b:
        return {}
    if len(a) > len(b):
        a, b = b, a
    out: Terms = {}
    get = out.get
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = tuple(x + y for x, y in zip(ma, mb))
            out[m] = get(m, 0) + ca * cb
    return {m: v % p for m, v in out.items() if v % p}


def t_mul_term(a: Terms, mono: Monomial, c: int, p: int) -> Terms:
    return {tuple(x + y for x, y in zip(m, mono)): v * c % p for m, v in a.items()}


def t_divided_partial(a: Terms, i: int, k: int, p: int) -> Terms:
    """Apply the divided power d_i^[k] (0-based ``i``) term-wise."""
    if k == 0:
        return dict(a)
    out: Terms = {}
    for m, c in a.items():
        if m[i] < k:
            continue
        b = binomial_mod_p(m[i], k, p)
        if b:
            mm = m[:i] + (m[i] - k,) + m[i + 1:]
            v = (out.get(mm, 0) + b * c) % p
            if v:
                out[mm] = v
            else:
                out.pop(mm, None)
    return out


def t_pow(a: Terms, e: int, n: int, p: int) -> Terms:
    result: Terms = {(0,) * n: 1}
    base = a
    while e:
        if e & 1:
            result = t_mul(result, base, p)
        e >>= 1
        if e:
            base = t_mul(base, base, p)
    return result


def t_key(a: Terms):
    """Hashable canonical form of a term dict."""
    return tuple(sorted(a.items()))


# -- ambient ---------------------------------------------------------------

class Ambient:
    """The polynomial ring F_p[x_1..x_n] with named variables."""

    __slots__ = ("field", "names", "n", "_index")

    def __init__(self, p, names: Sequence[str]):
        self.field = p if isinstance(p, PrimeField) else PrimeField(p)
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError("duplicate variable names")
        for s in names:
            if not s.isidentifier():
                raise ValueError("bad variable name %r" % s)
        self.names = names
        self.n = len(names)
        self._index = {s: i for i, s in enumerate(names)}

    @property
    def p(self) -> int:
        return self.field.p

    @classmethod
    def standard(cls, p, n: int) -> "Ambient":
        return cls(p, ["x%d" % (i + 1) for i in range(n)])

    def __eq__(self, other):
        return isinstance(other, Ambient) and self.field == other.field and self.names == other.names

    def __hash__(self):
        return hash((self.field.p, self.names))

    def __repr__(self):
        return "Ambient(p=%d, vars=%s)" % (self.p, ",".join(self.names))

    def index(self, name: str) -> int:
        return self._index[name]

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.const(1)

    def const(self, c: int) -> "Polynomial":
        c %= self.p
        return Polynomial(self, {(0,) * self.n: c} if c else {})

    def var(self, i: int) -> "Polynomial":
        """The variable with 0-based index ``i``."""
        e = [0] * self.n
        e[i] = 1
        return Polynomial(self, {tuple(e): 1})

    def gens(self) -> List["Polynomial"]:
        return [self.var(i) for i in range(self.n)]

    def monomial(self, exps: Sequence[int], c: int = 1) -> "Polynomial":
        c %= self.p
        return Polynomial(self, {tuple(exps): c} if c else {})

    def extend(self, names: Sequence[str]) -> "Ambient":
        return Ambient(self.field, self.names + tuple(names))

    def parse(self, text: str) -> "Polynomial":
        return parse_poly(text, self)


# -- polynomial ------------------------------------------------------------

class Polynomial:
    """Immutable sparse polynomial; ``terms`` must not be mutated."""

    __slots__ = ("ambient", "terms", "_hash")

    def __init__(self, ambient: Ambient, terms: Terms):
        self.ambient = ambient
        self.terms = terms
        self._hash = None

    @classmethod
    def from_terms(cls, ambient: Ambient, terms) -> "Polynomial":
        """Build from an arbitrary monomial -> int mapping (reduced, zeros dropped)."""
        p = ambient.p
        out: Terms = {}
        for m, c in dict(terms).items():
            m = tuple(m)
            if len(m) != ambient.n or min(m, default=0) < 0:
                raise ValueError("bad exponent vector %r" % (m,))
            c %= p
            if c:
                out[m] = c
        return cls(ambient, out)

    # construction helpers
    def _new(self, terms: Terms) -> "Polynomial":
        return Polynomial(self.ambient, terms)

    def _coerce(self, other) -> Terms:
        if isinstance(other, Polynomial):
            if other.ambient != self.ambient:
                raise ValueError("ambient mismatch: %r vs %r" % (self.ambient, other.ambient))
            return other.terms
        if isinstance(other, int):
            c = other % self.ambient.p
            return {(0,) * self.ambient.n: c} if c else {}
        return NotImplemented

    # ring operations
    def __add__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return self._new(t_add(self.terms, b, self.ambient.p))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return self._new(t_sub(self.terms, b, self.ambient.p))

    def __rsub__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return self._new(t_sub(b, self.terms, self.ambient.p))

    def __mul__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return self._new(t_mul(self.terms, b, self.ambient.p))

    __rmul__ = __mul__

    def __neg__(self):
        return self._new(t_scale(self.terms, -1, self.ambient.p))

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative exponent")
        return self._new(t_pow(self.terms, e, self.ambient.n, self.ambient.p))

    def scale(self, c: int) -> "Polynomial":
        return self._new(t_scale(self.terms, c, self.ambient.p))

    def __eq__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return False
        return self.terms == b

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ambient, t_key(self.terms)))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms)

    def constant_term(self) -> int:
        return self.terms.get((0,) * self.ambient.n, 0)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self.terms), default=-1)

    def __len__(self):
        return len(self.terms)

    def key(self):
        return t_key(self.terms)

    def lead(self, order: str = "grevlex") -> Tuple[Monomial, int]:
        k = order_key(order)
        m = max(self.terms, key=k)
        return m, self.terms[m]

    def sorted_terms(self, order: str = "grevlex") -> List[Tuple[Monomial, int]]:
        k = order_key(order)
        return sorted(self.terms.items(), key=lambda t: k(t[0]), reverse=True)

    # calculus
    def divided_partial(self, i: int, k: int = 1) -> "Polynomial":
        """d_i^[k] with 0-based variable index ``i``."""
        if not 0 <= i < self.ambient.n:
            raise IndexError("variable index out of range")
        if k < 0:
            raise ValueError("negative order")
        return self._new(t_divided_partial(self.terms, i, k, self.ambient.p))

    def diff(self, i: int) -> "Polynomial":
        return self.divided_partial(i, 1)

    # evaluation and substitution
    def evaluate(self, point: Sequence[int]) -> int:
        p = self.ambient.p
        total = 0
        for m, c in self.terms.items():
            v = c
            for x, e in zip(point, m):
                if e:
                    v = v * pow(x, e, p) % p
            total += v
        return total % p

    def substitute(self, images: Sequence, target: Ambient = None):
        """Compose with ``x_i -> images[i]``.

        ``images`` may be polynomials (in ``target``) or any objects
        supporting ``+``, ``*`` and ``**`` with ints, e.g. series.
        """
        if len(images) != self.ambient.n:
            raise ValueError("need one image per variable")
        if target is None and images and isinstance(images[0], Polynomial):
            target = images[0].ambient
        result = target.zero() if target is not None else 0
        powers: Dict[Tuple[int, int], object] = {}
        for m, c in self.sorted_terms():
            term = None
            for i, e in enumerate(m):
                if not e:
                    continue
                key = (i, e)
                if key not in powers:
                    powers[key] = images[i] ** e
                term = powers[key] if term is None else term * powers[key]
            if term is None:
                term = target.const(c) if target is not None else c
                result = result + term
            else:
                result = result + term * c
        return result

    def embed(self, target: Ambient) -> "Polynomial":
        """Map into an ambient whose variables extend this one's."""
        if target.names[: self.ambient.n] != self.ambient.names or target.p != self.ambient.p:
            raise ValueError("target ambient does not extend source")
        pad = (0,) * (target.n - self.ambient.n)
        return Polynomial(target, {m + pad: c for m, c in self.terms.items()})

    # printing
    def __str__(self):
        return print_poly(self)

    def __repr__(self):
        return "Polynomial(%s)" % print_poly(self)


def monomial_str(m: Monomial, names: Sequence[str]) -> str:
    parts = []
    for e, s in zip(m, names):
        if e == 1:
            parts.append(s)
        elif e > 1:
            parts.append("%s^%d" % (s, e))
    return "*".join(parts)


def format_terms(items: Iterable[Tuple[int, str]]) -> str:
    """Join (signed coefficient, monomial text) pairs into ``a - b + c``."""
    out = []
    for c, mono in items:
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if not mono:
            body = str(a)
        elif a == 1:
            body = mono
        else:
            body = "%d*%s" % (a, mono)
        if not out:
            out.append(("-" if sign == "-" else "") + body)
        else:
            out.append(" %s %s" % (sign, body))
    return "".join(out) if out else "0"


def print_poly(f: Polynomial) -> str:
    """Canonical text: grevlex-descending terms, symmetric coefficients."""
    F = f.ambient.field
    return format_terms((F.signed(c), monomial_str(m, f.ambient.names)) for m, c in f.sorted_terms())


def parse_poly(text: str, ambient: Ambient) -> Polynomial:
    def name(s, pos):
        if s not in ambient._index:
            raise ParseError("unknown variable %r" % s, pos, text)
        return ambient.var(ambient._index[s])

    parser = ExpressionParser(number=ambient.const, name=name)
    value = parser.parse(text)
    if isinstance(value, int):
        value = ambient.const(value)
    return value


def divided_partial(i: int, k: int, f: Polynomial) -> Polynomial:
    """d_i^[k] f with 1-based variable index ``i``."""
    return f.divided_partial(i - 1, k)


class PolyMatrix:
    """A rectangular matrix of polynomials over one ambient."""

    def __init__(self, ambient: Ambient, rows: List[List[Polynomial]], ncols: int = None):
        self.ambient = ambient
        self.rows = [list(r) for r in rows]
        self.m = len(self.rows)
        self.n = ncols if ncols is not None else (len(self.rows[0]) if self.rows else ambient.n)
        for r in self.rows:
            if len(r) != self.n:
                raise ValueError("ragged matrix")

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def minor(self, rows: Sequence[int], cols: Sequence[int]) -> Polynomial:
        """Determinant of the submatrix (0-based indices, in the given order)."""
        return det([[self.rows[i][j] for j in cols] for i in rows], self.ambient)

    def to_strings(self) -> List[List[str]]:
        return [[str(e) for e in r] for r in self.rows]

    def __repr__(self):
        return "PolyMatrix(%dx%d)" % (self.m, self.n)


def det(matrix: List[List], ambient: Ambient):
    """Determinant by cofactor expansion along the first row; det of 0x0 is 1."""
    size = len(matrix)
    if size == 0:
        return ambient.one()
    if size == 1:
        return matrix[0][0]
    if size == 2:
        return matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0]
    total = ambient.zero()
    for j in range(size):
        entry = matrix[0][j]
        if not entry:
            continue
        sub = [row[:j] + row[j + 1:] for row in matrix[1:]]
        cof = det(sub, ambient) * entry
        total = total + cof if j % 2 == 0 else total - cof
    return total


def jacobian(F: Sequence[Polynomial], ambient: Ambient = None) -> PolyMatrix:
    """Jacobi matrix (d f_i / d x_j); an empty list gives the 0 x n matrix."""
    if ambient is None:
        if not F:
            raise ValueError("ambient required for an empty list")
        ambient = F[0].ambient
    rows = [[f.diff(j) for j in range(ambient.n)] for f in F]
    return PolyMatrix(ambient, rows, ambient.n)


def random_poly(ambient: Ambient, rng, degree: int, terms: int = 4) -> Polynomial:
    """A polynomial with up to ``terms`` random terms of degree <= ``degree``."""
    out: Terms = {}
    p = ambient.p
    for _ in range(terms):
        e = [0] * ambient.n
        for _ in range(rng.randint(0, degree)):
            e[rng.randrange(ambient.n)] += 1
        m = tuple(e)
        out[m] = (out.get(m, 0) + rng.randrange(1, p)) % p
    return Polynomial(ambient, {m: c for m, c in out.items() if c})
