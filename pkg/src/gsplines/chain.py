"""The bounded-degree quotient chain complex and its homology."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .complex import Face
from .domain import GrDomain
from .groebner import GroebnerBasis
from .linalg import IncrementalSpan, RationalMatrix, rank
from .poly import GREVLEX, Exponent, Grading, MonomialOrder, Polynomial, Ring, monomials_within


def t_span(ring: Ring, grading: Grading, order: MonomialOrder = GREVLEX) -> list[Exponent]:
    """The constant monomial once, then the nonconstant admitted monomials of each block."""
    const = (0,) * ring.nvars
    out = [const]
    for block in sorted(ring.blocks, key=lambda b: (str(type(b)), b)):
        out.extend(m for m in monomials_within(ring, block, grading, order) if m != const)
    return out


@dataclass
class FaceQuotient:
    """Q(alpha): remainders of the spanning monomials modulo the face ideal."""

    face: Face
    ring: Ring
    gb: GroebnerBasis | None
    span: list[Exponent]
    reps: list[Exponent] = field(default_factory=list)
    _cols: dict = field(default_factory=dict, repr=False)
    _space: IncrementalSpan = field(default_factory=IncrementalSpan, repr=False)

    def __post_init__(self):
        for m in self.span:
            if self._space.add(self._vector(self.remainder(self.ring.monomial(m)))):
                self.reps.append(m)

    @property
    def dim(self) -> int:
        return len(self.reps)

    def remainder(self, p: Polynomial) -> Polynomial:
        if p.ring != self.ring:
            p = p.embed(self.ring)
        if self.gb is None:
            return p
        if len(p.terms) == 1:
            (e, c), = p.terms.items()
            return self.gb.normal_form_monomial(e) * c
        return self.gb.normal_form(p)

    def _vector(self, p: Polynomial) -> dict[int, Fraction]:
        out = {}
        for e, c in p.terms.items():
            j = self._cols.setdefault(e, len(self._cols))
            out[j] = c
        return out

    def coordinates(self, p: Polynomial) -> dict[int, Fraction]:
        """Coordinates of the class of p in terms of ``reps``."""
        return self._space.coordinates(self._vector(self.remainder(p)))

    def rep_polynomials(self) -> list[Polynomial]:
        return [self.remainder(self.ring.monomial(m)) for m in self.reps]


class SplineComplex:
    """Q_d: the chain complex of quotients over the interior faces.

    With ``ideals=False`` the face ideals are replaced by zero, giving the
    complex of spanning sets alone.
    """

    def __init__(self, domain: GrDomain, grading: Grading, order: MonomialOrder = GREVLEX, ideals: bool = True):
        self.domain = domain
        self.grading = grading
        self.order = order
        self.ideals = ideals
        self.quotients: dict[Face, FaceQuotient] = {}
        self._ranks: dict[int, int] = {}
        cx = domain.complex
        for k in range(domain.n + 1):
            for i in cx.interior_faces(k):
                face = (k, i)
                ring = domain.face_ring(face)
                gb = domain.groebner(face, order) if (ideals and k < domain.n) else None
                self.quotients[face] = FaceQuotient(face, ring, gb, t_span(ring, grading, order))

    @property
    def n(self) -> int:
        return self.domain.n

    def faces(self, k: int) -> list[Face]:
        return sorted(f for f in self.quotients if f[0] == k)

    def dim(self, k: int) -> int:
        return sum(self.quotients[f].dim for f in self.faces(k))

    def _offsets(self, k: int) -> dict[Face, int]:
        out, pos = {}, 0
        for f in self.faces(k):
            out[f] = pos
            pos += self.quotients[f].dim
        return out

    def boundary_columns(self, k: int) -> list[dict[int, Fraction]]:
        """Columns of delta_k : Q_k -> Q_{k-1} as sparse vectors."""
        cols: list[dict[int, Fraction]] = []
        if k <= 0 or k > self.n:
            return [dict() for _ in range(self.dim(k))] if 0 <= k <= self.n else []
        rows = self._offsets(k - 1)
        cx = self.domain.complex
        for alpha in self.faces(k):
            q = self.quotients[alpha]
            for m in q.reps:
                col: dict[int, Fraction] = {}
                for b, sign in cx.boundary(alpha).items():
                    beta = (k - 1, b)
                    if not sign or beta not in self.quotients:
                        continue
                    target = self.quotients[beta]
                    coords = target.coordinates(q.ring.monomial(m).embed(target.ring))
                    base = rows[beta]
                    for j, c in coords.items():
                        v = col.get(base + j, 0) + sign * c
                        if v:
                            col[base + j] = v
                        else:
                            col.pop(base + j, None)
                cols.append(col)
        return cols

    def boundary_matrix(self, k: int) -> RationalMatrix:
        cols = self.boundary_columns(k)
        nrows = self.dim(k - 1) if k >= 1 else 0
        entries = {(i, j): v for j, col in enumerate(cols) for i, v in col.items()}
        return RationalMatrix.from_sparse(entries, nrows, len(cols))

    def rank(self, k: int) -> int:
        if k <= 0 or k > self.n:
            return 0
        if k not in self._ranks:
            # rank of the transpose equals the rank; columns serve as rows
            self._ranks[k] = rank(self.boundary_columns(k), self.dim(k - 1))
        return self._ranks[k]

    def homology(self) -> list[int]:
        """Dimensions H_0, ..., H_n."""
        return [self.dim(k) - self.rank(k) - self.rank(k + 1) for k in range(self.n + 1)]

    def euler_characteristic(self) -> int:
        return sum((-1) ** (self.n - k) * self.dim(k) for k in range(self.n + 1))


def euler_characteristic(domain: GrDomain, grading: Grading, order: MonomialOrder = GREVLEX) -> int:
    return SplineComplex(domain, grading, order).euler_characteristic()


def homology(domain: GrDomain, grading: Grading, order: MonomialOrder = GREVLEX) -> list[int]:
    return SplineComplex(domain, grading, order).homology()
