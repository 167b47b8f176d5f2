"""Buchberger's algorithm and normal forms over the rationals."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .poly import GREVLEX, Exponent, MonomialOrder, Polynomial, PolynomialError, Ring


def _divides(a: Exponent, b: Exponent) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a: Exponent, b: Exponent) -> Exponent:
    return tuple(max(x, y) for x, y in zip(a, b))


def _coprime(a: Exponent, b: Exponent) -> bool:
    return all(not (x and y) for x, y in zip(a, b))


class _Reducer:
    """Division by a fixed list of polynomials with precomputed leading terms."""

    def __init__(self, polys: Sequence[Polynomial], order: MonomialOrder):
        self.order = order
        self.key = order.key(polys[0].ring) if polys else None
        self.items = []
        for g in polys:
            lm, lc = g.leading_term(order)
            tail = [(e, c / lc) for e, c in g.terms.items() if e != lm]
            self.items.append((lm, tail))

    def reduce(self, terms: dict, full: bool = True) -> dict:
        p = dict(terms)
        rem: dict = {}
        key = self.key
        while p:
            m = max(p, key=key)
            c = p.pop(m)
            for lm, tail in self.items:
                if _divides(lm, m):
                    q = tuple(x - y for x, y in zip(m, lm))
                    for e, t in tail:
                        f = tuple(x + y for x, y in zip(e, q))
                        v = p.get(f, 0) - c * t
                        if v:
                            p[f] = v
                        else:
                            p.pop(f, None)
                    break
            else:
                rem[m] = c
                if not full:
                    rem.update(p)
                    return rem
        return rem


@dataclass
class GroebnerBasis:
    """A reduced Groebner basis, sorted by descending leading monomial."""

    ring: Ring
    order: MonomialOrder
    polys: list[Polynomial]
    _reducer: _Reducer | None = field(default=None, repr=False, compare=False)
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        self._reducer = _Reducer(self.polys, self.order)

    @property
    def leading_monomials(self) -> list[Exponent]:
        return [g.leading_monomial(self.order) for g in self.polys]

    def is_unit(self) -> bool:
        return any(not any(g.leading_monomial(self.order)) for g in self.polys)

    def normal_form(self, f: Polynomial) -> Polynomial:
        if f.ring != self.ring:
            f = f.embed(self.ring)
        if not self.polys:
            return f
        return Polynomial._raw(self.ring, self._reducer.reduce(f.terms))

    def normal_form_monomial(self, exp: Exponent) -> Polynomial:
        """Cached normal form of a single monomial."""
        hit = self._cache.get(exp)
        if hit is None:
            hit = self.normal_form(self.ring.monomial(exp))
            self._cache[exp] = hit
        return hit

    def contains(self, f: Polynomial) -> bool:
        return self.normal_form(f).is_zero()

    def is_standard(self, exp: Exponent) -> bool:
        return not any(_divides(lm, exp) for lm in self.leading_monomials)


def normal_form(f: Polynomial, basis: GroebnerBasis) -> Polynomial:
    return basis.normal_form(f)


def buchberger(generators: Iterable[Polynomial], order: MonomialOrder = GREVLEX, ring: Ring | None = None) -> GroebnerBasis:
    """Reduced Groebner basis of the ideal generated by ``generators``.

    Uses the normal selection strategy with the coprime and chain criteria.
    The output does not depend on the order of the input generators.
    """
    given = list(generators)
    if ring is None:
        if not given:
            raise PolynomialError("empty generator list needs an explicit ring")
        ring = given[0].ring
    gens = [g for g in given if not g.is_zero()]
    gens = [g if g.ring == ring else g.embed(ring) for g in gens]
    if not gens:
        return GroebnerBasis(ring, order, [])
    key = order.key(ring)

    # canonical start: sort by leading monomial so the result is input-order independent
    basis: list[Polynomial] = []
    lms: list[Exponent] = []
    for g in sorted((g.monic(order) for g in gens), key=lambda g: (key(g.leading_monomial(order)), sorted(g.terms.items()))):
        if basis:
            g = Polynomial._raw(ring, _Reducer(basis, order).reduce(g.terms))
            if g.is_zero():
                continue
            g = g.monic(order)
        basis.append(g)
        lms.append(g.leading_monomial(order))
        if not any(lms[-1]):
            return GroebnerBasis(ring, order, [ring.one()])

    pairs: set[tuple[int, int]] = {(i, j) for j in range(len(basis)) for i in range(j)}
    while pairs:
        i, j = min(pairs, key=lambda p: (key(_lcm(lms[p[0]], lms[p[1]])), p))
        pairs.discard((i, j))
        lcm = _lcm(lms[i], lms[j])
        if _coprime(lms[i], lms[j]):
            continue
        if _chain_skip(i, j, lcm, lms, pairs):
            continue
        s = _spoly(basis[i], basis[j], lms[i], lms[j], lcm)
        rem = _Reducer(basis, order).reduce(s.terms)
        if not rem:
            continue
        h = Polynomial._raw(ring, rem).monic(order)
        basis.append(h)
        lms.append(h.leading_monomial(order))
        if not any(lms[-1]):
            return GroebnerBasis(ring, order, [ring.one()])
        k = len(basis) - 1
        pairs.update((m, k) for m in range(k))
    return GroebnerBasis(ring, order, _reduce_basis(basis, order))


def _chain_skip(i, j, lcm, lms, pairs) -> bool:
    for k in range(len(lms)):
        if k in (i, j):
            continue
        if _divides(lms[k], lcm):
            a = (min(i, k), max(i, k))
            b = (min(j, k), max(j, k))
            if a not in pairs and b not in pairs:
                return True
    return False


def _spoly(f: Polynomial, g: Polynomial, lf: Exponent, lg: Exponent, lcm: Exponent) -> Polynomial:
    # both inputs are monic
    qf = tuple(a - b for a, b in zip(lcm, lf))
    qg = tuple(a - b for a, b in zip(lcm, lg))
    return f.mul_term(qf, Fraction(1)) - g.mul_term(qg, Fraction(1))


def _reduce_basis(basis: list[Polynomial], order: MonomialOrder) -> list[Polynomial]:
    key = order.key(basis[0].ring)
    lms = [g.leading_monomial(order) for g in basis]
    keep = []
    for i, m in enumerate(lms):
        dominated = False
        for j, other in enumerate(lms):
            if j == i or not _divides(other, m):
                continue
            # drop i if another leading monomial divides it (ties keep the lower index)
            if other != m or j < i:
                dominated = True
                break
        if not dominated:
            keep.append(basis[i])
    out = []
    for i, g in enumerate(keep):
        others = keep[:i] + keep[i + 1:]
        if others:
            g = Polynomial._raw(g.ring, _Reducer(others, order).reduce(g.terms))
        out.append(g.monic(order))
    out.sort(key=lambda g: key(g.leading_monomial(order)), reverse=True)
    return out


def ideal_member(f: Polynomial, basis: GroebnerBasis) -> bool:
    return basis.contains(f)


def standard_monomials(basis: GroebnerBasis, candidates: Iterable[Exponent]) -> list[Exponent]:
    return [m for m in candidates if basis.is_standard(m)]
