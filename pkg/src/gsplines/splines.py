"""Spline spaces: the constraint matrix, bases, verification and closed forms."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .chain import SplineComplex
from .domain import GrDomain, check_compatibility
from .linalg import RationalMatrix, kernel_basis, rank, row_space_basis
from .poly import GREVLEX, Exponent, Grading, MonomialOrder, Number, Polynomial, monomials_within


class VerificationError(ValueError):
    pass


@dataclass(frozen=True)
class Spline:
    """One polynomial per top cell, keyed by cell id."""

    pieces: Mapping[int, Polynomial]

    def __getitem__(self, s: int) -> Polynomial:
        return self.pieces[s]

    def evaluate(self, s: int, point) -> Fraction:
        p = self.pieces[s]
        return p.evaluate(dict(zip(p.ring.names, point)))

    def __add__(self, other: Spline) -> Spline:
        return Spline({s: self.pieces[s] + other.pieces[s] for s in self.pieces})

    def __mul__(self, c: Number) -> Spline:
        return Spline({s: p * c for s, p in self.pieces.items()})

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.pieces.values())


@dataclass
class ConstraintSystem:
    """The matrix whose kernel is the spline space.

    Columns are (cell, monomial) pairs; rows are (facet, remainder
    monomial) pairs.
    """

    matrix: RationalMatrix
    columns: list[tuple[int, Exponent]]
    rows: list[tuple[int, Exponent]]


@dataclass
class SplineBasis:
    domain: GrDomain
    grading: Grading
    splines: list[Spline]
    ncols: int
    rank: int
    columns: list[tuple[int, Exponent]] = field(default_factory=list)

    @property
    def dim(self) -> int:
        return len(self.splines)


def constraint_matrix(domain: GrDomain, grading: Grading, order: MonomialOrder = GREVLEX) -> ConstraintSystem:
    n = domain.n
    cx = domain.complex
    columns: list[tuple[int, Exponent]] = []
    for s in cx.faces(n):
        ring = domain.patch_ring(s)
        columns.extend((s, m) for m in monomials_within(ring, s, grading, order))
    col_index: dict[int, list[int]] = {}
    for j, (s, _) in enumerate(columns):
        col_index.setdefault(s, []).append(j)

    row_labels: list[tuple[int, Exponent]] = []
    entries: dict[tuple[int, int], Fraction] = {}
    for t in cx.interior_faces(n - 1):
        face = (n - 1, t)
        gb = domain.groebner(face, order)
        ring = domain.face_ring(face)
        local_rows: dict[Exponent, int] = {}
        for s in domain.patches_of(face):
            sign = cx.incidence((n, s), face)
            if not sign:
                continue
            patch = domain.patch_ring(s)
            for j in col_index[s]:
                m = columns[j][1]
                rem = gb.normal_form_monomial(patch.monomial(m).embed(ring).leading_monomial())
                for q, c in rem.terms.items():
                    if q not in local_rows:
                        local_rows[q] = len(row_labels)
                        row_labels.append((t, q))
                    key = (local_rows[q], j)
                    v = entries.get(key, 0) + sign * c
                    if v:
                        entries[key] = v
                    else:
                        entries.pop(key, None)
    matrix = RationalMatrix.from_sparse(entries, len(row_labels), len(columns), row_labels, columns)
    return ConstraintSystem(matrix, columns, row_labels)


def _to_spline(domain: GrDomain, columns, vec) -> Spline:
    pieces: dict[int, dict] = {s: {} for s in domain.complex.faces(domain.n)}
    for (s, m), c in zip(columns, vec):
        if c:
            pieces[s][m] = Fraction(c)
    return Spline({s: Polynomial(domain.patch_ring(s), terms) for s, terms in pieces.items()})


def spline_basis(domain: GrDomain, grading: Grading, order: MonomialOrder = GREVLEX, check: bool = True) -> SplineBasis:
    """Basis of the spline space from the kernel of the constraint matrix.

    The kernel is brought to reduced echelon form, so each basis spline has
    integer coefficients with content 1 and a distinct leading column.
    """
    if check:
        check_compatibility(domain)
    system = constraint_matrix(domain, grading, order)
    kernel = kernel_basis(system.matrix)
    rows = row_space_basis([[Fraction(x) for x in v] for v in kernel]) if kernel else []
    splines = [_to_spline(domain, system.columns, row) for row in rows]
    rk = system.matrix.ncols - len(kernel)
    return SplineBasis(domain, grading, splines, system.matrix.ncols, rk, system.columns)


def dimension(domain: GrDomain, grading: Grading, order: MonomialOrder = GREVLEX, check: bool = True) -> int:
    if check:
        check_compatibility(domain)
    system = constraint_matrix(domain, grading, order)
    return system.matrix.ncols - rank(system.matrix)


def spline_problems(domain: GrDomain, spline: Spline, grading: Grading | None = None) -> list[str]:
    """Reasons why ``spline`` is not a G^r spline (empty if it is one)."""
    out = []
    n = domain.n
    cx = domain.complex
    for s in cx.faces(n):
        if s not in spline.pieces:
            out.append(f"no piece for cell {s}")
            continue
        p = spline.pieces[s]
        if p.ring != domain.patch_ring(s):
            out.append(f"piece for cell {s} is not in the ring of that cell")
        elif grading is not None and not grading.contains(p):
            out.append(f"piece for cell {s} exceeds the {grading.kind} degree {grading.d}")
    if out:
        return out
    for t in cx.interior_faces(n - 1):
        face = (n - 1, t)
        tr = domain.transitions[t]
        ring = domain.face_ring(face)
        diff = spline.pieces[tr.source].embed(ring) - spline.pieces[tr.target].embed(ring)
        if not domain.groebner(face).contains(diff):
            out.append(f"pieces on cells {tr.source} and {tr.target} do not join across facet {t}")
    return out


def verify(domain: GrDomain, spline: Spline, grading: Grading | None = None) -> bool:
    return not spline_problems(domain, spline, grading)


def dimension_report(domain: GrDomain, grading: Grading, order: MonomialOrder = GREVLEX) -> dict:
    """Dimension, Euler characteristic and homology from the chain complex."""
    cplx = SplineComplex(domain, grading, order)
    h = cplx.homology()
    return {"dim": h[-1], "euler": cplx.euler_characteristic(), "homology": h,
            "quotients": [cplx.dim(k) for k in range(domain.n + 1)]}


# Closed forms. Each raises ValueError outside the range where it is proved.

def two_patch_dimension(d: int, deg_a: int, kind: str = "total") -> int:
    """Two squares with symmetric gluing; deg_a = 0 means a is constant."""
    if deg_a == 0:
        if kind == "total":
            if d < 0:
                raise ValueError("degree must be nonnegative")
            return d * d + d + 1
        # at d = 0 the constants still form a 1-dimensional space
        if d < 1:
            raise ValueError("formula needs d >= 1")
        return 2 * d * d + 2 * d
    if kind == "total":
        if d < deg_a + 1:
            raise ValueError(f"formula needs d >= {deg_a + 1}")
        return d * d + d + 1 - deg_a
    if d < deg_a:
        raise ValueError(f"formula needs d >= {deg_a}")
    return 2 * d * d + 2 * d + 1 - deg_a


def edge_quotient_dimension(d: int, deg_a: int, kind: str = "total") -> int:
    if deg_a == 0:
        return 2 * d + 1 if kind == "total" else 2 * d + 2
    lo = deg_a + 1 if kind == "total" else deg_a
    if d < lo:
        raise ValueError(f"formula needs d >= {lo}")
    return 2 * d + deg_a + 1


def edge_ideal_dimension(d: int, deg_a: int, kind: str = "total") -> int:
    total = 2 * math.comb(d + 2, 2) - 1 if kind == "total" else 2 * (d + 1) ** 2 - 1
    return total - edge_quotient_dimension(d, deg_a, kind)


def star_euler(s: int, d: int, deg_a: int, a_zero: bool = False, kind: str = "total") -> int:
    """Euler characteristic of the quotient complex of a vertex star."""
    if kind == "total":
        if s != 4:
            if d < deg_a + 1:
                raise ValueError(f"formula needs d >= {deg_a + 1}")
            return s * math.comb(d + 2, 2) - s * (2 * d + deg_a + 1) + 3
        if d < 2:
            raise ValueError("formula needs d >= 2")
        return 2 * (d * d - d + 2) if a_zero else 2 * (d * d - d - 2)
    if s != 4:
        if d < deg_a:
            raise ValueError(f"formula needs d >= {deg_a}")
        return s * (d + 1) ** 2 - s * (2 * d + deg_a + 1) + 3
    if d < 1:
        raise ValueError("formula needs d >= 1")
    return 4 * d * d if a_zero else 4 * (d * d - 1)


def star_exact(d: int, kind: str = "total") -> bool:
    """Whether the star dimension equals its Euler characteristic (symmetric gluing)."""
    return d >= (4 if kind == "total" else 3)


def cube_euler(d: int, kind: str = "total") -> int:
    if kind == "total":
        if d < 3:
            raise ValueError("formula needs d >= 3")
        return 3 * (d * d - 5 * d + 2)
    if d < 2:
        raise ValueError("formula needs d >= 2")
    return 6 * (d - 1) ** 2


def planar_two_cell_dimension(d: int, r: int) -> int:
    """C^r splines on two planar triangles sharing an edge, total degree d."""
    extra = math.comb(d - r - 1 + 2, 2) if d - r - 1 >= 0 else 0
    return math.comb(d + 2, 2) + extra
