"""Buchberger's algorithm over F_p on raw term dicts.

Optionally tracks cofactors: every basis element ``g`` carries a vector
``c`` with ``g = sum_k c_k * gens_k`` (possibly modulo a caller-supplied
reduction), which is what ideal-quotient division and regularity
certificates need.
"""

from __future__ import annotations

import heapq

from typing import Callable, List, Optional, Sequence

from .poly import Monomial, Terms, t_mul_term, t_scale, t_sub

CofVec = List[Terms]


def divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def _mono_sub(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


class GBElement:
    __slots__ = ("lm", "terms", "cof")

    def __init__(self, lm: Monomial, terms: Terms, cof: Optional[CofVec] = None):
        self.lm = lm
        self.terms = terms
        self.cof = cof


def _monic(terms: Terms, cof: Optional[CofVec], key, p: int) -> GBElement:
    lm = max(terms, key=key)
    inv = pow(terms[lm], p - 2, p)
    new_cof = None if cof is None else [t_scale(c, inv, p) for c in cof]
    return GBElement(lm, t_scale(terms, inv, p), new_cof)


def reduce_full(
    f: Terms,
    basis: Sequence[GBElement],
    key,
    p: int,
    cof: Optional[CofVec] = None,
    quotients: bool = False,
):
    """Fully reduce ``f`` by a list of monic elements.

    Returns ``(remainder, cof, quotients)``.  ``cof`` is updated by the same
    row operations (when given); ``quotients`` lists the multiplier of each
    basis element when requested.
    """
    h = dict(f)
    heap = [(-key(m), m) for m in h]
    heapq.heapify(heap)
    rem: Terms = {}
    quots = [dict() for _ in basis] if quotients else None
    cof = None if cof is None else [dict(c) for c in cof]
    lms = [g.lm for g in basis]
    while heap:
        _, m = heapq.heappop(heap)
        c = h.get(m)
        if c is None:
            continue
        for idx, lm in enumerate(lms):
            if all(x <= y for x, y in zip(lm, m)):
                g = basis[idx]
                s = tuple(y - x for x, y in zip(lm, m))
                for gm, gc in g.terms.items():
                    mm = tuple(a + b for a, b in zip(gm, s))
                    old = h.get(mm)
                    v = ((old or 0) - c * gc) % p
                    if v:
                        h[mm] = v
                        if old is None:
                            heapq.heappush(heap, (-key(mm), mm))
                    elif old is not None:
                        del h[mm]
                if cof is not None:
                    for k in range(len(cof)):
                        if g.cof[k]:
                            cof[k] = t_sub(cof[k], t_mul_term(g.cof[k], s, c, p), p)
                if quots is not None:
                    q = quots[idx]
                    v = (q.get(s, 0) + c) % p
                    if v:
                        q[s] = v
                    else:
                        q.pop(s, None)
                break
        else:
            rem[m] = c
            del h[m]
    return rem, cof, quots


def buchberger(
    gens: Sequence[Terms],
    key,
    p: int,
    cofs: Optional[Sequence[CofVec]] = None,
    cof_reduce: Optional[Callable[[Terms], Terms]] = None,
) -> List[GBElement]:
    """Reduced Groebner basis of the ideal generated by ``gens``.

    Elements are monic and sorted by descending leading monomial.
    """
    tracking = cofs is not None
    basis: List[GBElement] = []
    for idx, g in enumerate(gens):
        if g:
            basis.append(_monic(g, list(cofs[idx]) if tracking else None, key, p))
    if not basis:
        return []

    def tidy(cof):
        if cof is None or cof_reduce is None:
            return cof
        return [cof_reduce(c) if c else c for c in cof]

    # unit ideal short-cut still records a certificate through the loop
    pairs = set()
    for j in range(len(basis)):
        for i in range(j):
            pairs.add((i, j))

    def pair_key(ij):
        i, j = ij
        return (key(lcm(basis[i].lm, basis[j].lm)), i, j)

    while pairs:
        ij = min(pairs, key=pair_key)
        pairs.discard(ij)
        i, j = ij
        gi, gj = basis[i], basis[j]
        L = lcm(gi.lm, gj.lm)
        # product criterion
        if all(a == 0 or b == 0 for a, b in zip(gi.lm, gj.lm)):
            continue
        # chain criterion
        skip = False
        for k, gk in enumerate(basis):
            if k in (i, j):
                continue
            if divides(gk.lm, L) and (min(i, k), max(i, k)) not in pairs and (min(j, k), max(j, k)) not in pairs:
                skip = True
                break
        if skip:
            continue
        si, sj = _mono_sub(L, gi.lm), _mono_sub(L, gj.lm)
        s = t_sub(t_mul_term(gi.terms, si, 1, p), t_mul_term(gj.terms, sj, 1, p), p)
        cof = None
        if tracking:
            cof = [t_sub(t_mul_term(a, si, 1, p), t_mul_term(b, sj, 1, p), p) for a, b in zip(gi.cof, gj.cof)]
        rem, cof, _ = reduce_full(s, basis, key, p, cof)
        if rem:
            new = _monic(rem, tidy(cof), key, p)
            basis.append(new)
            n = len(basis) - 1
            for k in range(n):
                pairs.add((k, n))
            if not any(new.lm):
                break  # unit ideal

    return _reduce_basis(basis, key, p, tidy)


def _reduce_basis(basis: List[GBElement], key, p: int, tidy) -> List[GBElement]:
    for g in basis:
        if not any(g.lm):
            return [GBElement(g.lm, {g.lm: 1}, g.cof)]
    # minimal basis: drop elements whose leading monomial is divisible by another
    minimal: List[GBElement] = []
    for idx, g in enumerate(basis):
        dominated = False
        for jdx, h in enumerate(basis):
            if jdx == idx:
                continue
            if divides(h.lm, g.lm) and (h.lm != g.lm or jdx < idx):
                dominated = True
                break
        if not dominated:
            minimal.append(g)
    # interreduce tails
    out: List[GBElement] = []
    for idx, g in enumerate(minimal):
        others = minimal[:idx] + minimal[idx + 1:]
        tail = dict(g.terms)
        del tail[g.lm]
        cof = None
        if g.cof is not None:
            cof = [dict(c) for c in g.cof]
        rem, cof, _ = reduce_full(tail, others, key, p, cof)
        rem[g.lm] = 1
        if cof is not None:
            # g = lm + tail; cof tracked the tail reduction relative to g
            cof = tidy(cof)
        out.append(GBElement(g.lm, rem, cof))
    out.sort(key=lambda e: key(e.lm), reverse=True)
    return out
