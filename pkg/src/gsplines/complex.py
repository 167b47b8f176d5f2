"""Finite cell complexes with signed incidence."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

Face = tuple[int, int]  # (dimension, id)


class ComplexError(ValueError):
    pass


@dataclass
class CellComplex:
    """Cells by dimension, each with its signed boundary.

    ``cells[k][i]`` maps the (k-1)-cells of the boundary of cell ``(k, i)`` to
    incidence signs. Vertices have empty boundaries. A sign of 0 records
    containment with cancelling incidence, as for both ends of a loop.
    """

    n: int
    cells: dict[int, dict[int, dict[int, int]]]
    polygons: dict[int, list[int]] = field(default_factory=dict)
    _up: dict = field(default_factory=dict, repr=False, compare=False)
    _closure: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        for k in range(self.n + 1):
            self.cells.setdefault(k, {})
        for k, group in self.cells.items():
            if k < 0 or k > self.n:
                raise ComplexError(f"cell dimension {k} outside 0..{self.n}")
            for i, bd in group.items():
                if k == 0 and bd:
                    raise ComplexError(f"vertex {i} has a nonempty boundary")
                for j, s in bd.items():
                    if j not in self.cells.get(k - 1, {}):
                        raise ComplexError(f"cell {(k, i)} refers to missing cell {(k - 1, j)}")
                    if s not in (-1, 0, 1):
                        raise ComplexError(f"incidence sign {s} is not -1, 0 or 1")
        up: dict[Face, set[Face]] = {(k, i): set() for k, g in self.cells.items() for i in g}
        for k, group in self.cells.items():
            for i, bd in group.items():
                for j in bd:
                    up[(k - 1, j)].add((k, i))
        self._up = up

    @classmethod
    def from_polygons(cls, polygons: Mapping[int, Sequence[int]]) -> CellComplex:
        """2-complex from oriented vertex cycles; edges are numbered by sorted
        endpoint pair and oriented from the smaller to the larger vertex."""
        pairs = set()
        for verts in polygons.values():
            if len(verts) < 3:
                raise ComplexError("a polygon needs at least three vertices")
            for a, b in zip(verts, list(verts[1:]) + [verts[0]]):
                if a == b:
                    raise ComplexError("degenerate polygon edge")
                pairs.add((min(a, b), max(a, b)))
        edge_ids = {p: k for k, p in enumerate(sorted(pairs))}
        vertices = sorted({v for verts in polygons.values() for v in verts})
        faces = {}
        for f, verts in polygons.items():
            bd: dict[int, int] = {}
            for a, b in zip(verts, list(verts[1:]) + [verts[0]]):
                e = edge_ids[(min(a, b), max(a, b))]
                if e in bd:
                    raise ComplexError(f"polygon {f} uses edge {(a, b)} twice")
                bd[e] = 1 if a < b else -1
            faces[f] = bd
        edges = {k: {a: -1, b: 1} for (a, b), k in edge_ids.items()}
        return cls(2, {2: faces, 1: edges, 0: {v: {} for v in vertices}},
                   polygons={f: list(v) for f, v in polygons.items()})

    def faces(self, k: int) -> list[int]:
        return sorted(self.cells.get(k, {}))

    def boundary(self, face: Face) -> dict[int, int]:
        k, i = face
        return self.cells[k][i]

    def incidence(self, alpha: Face, beta: Face) -> int:
        """Sign of beta in the boundary of alpha (0 if not incident)."""
        if beta[0] != alpha[0] - 1:
            return 0
        return self.cells[alpha[0]][alpha[1]].get(beta[1], 0)

    def cofaces(self, face: Face) -> set[Face]:
        return self._up[face]

    def closure(self, face: Face) -> set[Face]:
        """All cells in the closure of ``face`` (including itself)."""
        hit = self._closure.get(face)
        if hit is None:
            hit = {face}
            k, i = face
            for j in self.cells[k][i]:
                hit |= self.closure((k - 1, j))
            self._closure[face] = hit
        return hit

    def containing(self, face: Face, k: int) -> list[int]:
        """Ids of the k-cells whose closure contains ``face``."""
        return sorted(i for i in self.cells.get(k, {}) if face in self.closure((k, i)))

    def sub_faces(self, face: Face, k: int) -> list[int]:
        return sorted(j for (m, j) in self.closure(face) if m == k)

    def boundary_facets(self) -> list[int]:
        return [t for t in self.faces(self.n - 1) if len(self.cofaces((self.n - 1, t))) == 1]

    def interior_faces(self, k: int) -> list[int]:
        """k-cells not contained in the boundary subcomplex."""
        if k == self.n:
            return self.faces(k)
        if k == self.n - 1:
            return [t for t in self.faces(k) if len(self.cofaces((k, t))) == 2]
        bnd = set()
        for t in self.boundary_facets():
            bnd |= self.closure((self.n - 1, t))
        return [i for i in self.faces(k) if (k, i) not in bnd]

    def is_interior(self, face: Face) -> bool:
        return face[1] in self.interior_faces(face[0])

    def valence(self, vertex: int) -> int:
        """Number of edge ends at a vertex (loops count twice)."""
        if self.n < 1:
            return 0
        total = 0
        for e in self.faces(1):
            bd = self.cells[1][e]
            if vertex in bd:
                total += 1 if len(bd) == 2 else 2
        return total

    def validate(self) -> None:
        """Check boundary-of-boundary vanishing and manifold-like adjacency."""
        for k in range(2, self.n + 1):
            for i, bd in self.cells[k].items():
                acc: dict[int, int] = {}
                for j, s in bd.items():
                    for v, t in self.cells[k - 1][j].items():
                        acc[v] = acc.get(v, 0) + s * t
                bad = {v: c for v, c in acc.items() if c}
                if bad:
                    raise ComplexError(f"boundary of boundary of {(k, i)} is {bad}, not zero")
        if self.n >= 1:
            for t in self.faces(self.n - 1):
                m = len(self.cofaces((self.n - 1, t)))
                if m not in (1, 2):
                    raise ComplexError(f"facet {t} lies in {m} top cells")
            for k in range(self.n - 1):
                for i in self.faces(k):
                    self._check_link((k, i))

    def _check_link(self, face: Face) -> None:
        tops = self.containing(face, self.n)
        if not tops:
            raise ComplexError(f"cell {face} lies in no top cell")
        facets = [t for t in self.containing(face, self.n - 1)]
        adj = {s: set() for s in tops}
        for t in facets:
            cof = [c[1] for c in self.cofaces((self.n - 1, t))]
            if len(cof) == 2:
                a, b = cof
                if a in adj and b in adj:
                    adj[a].add(b)
                    adj[b].add(a)
        seen = {tops[0]}
        stack = [tops[0]]
        while stack:
            s = stack.pop()
            for t in adj[s] - seen:
                seen.add(t)
                stack.append(t)
        if len(seen) != len(tops):
            raise ComplexError(f"the top cells around {face} are not connected through facets")

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * len(self.cells[k]) for k in range(self.n + 1))
