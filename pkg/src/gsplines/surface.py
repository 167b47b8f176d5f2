"""Exact interpolation by spline surfaces and plain-text mesh export."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .domain import GrDomain
from .linalg import RationalMatrix, solve
from .poly import Grading, Polynomial
from .splines import Spline, spline_basis


class InconsistentTargets(ValueError):
    pass


@dataclass(frozen=True)
class Target:
    face: int
    point: tuple[Fraction, ...]
    value: tuple[Fraction, ...]


@dataclass
class SplineSurface:
    """A map into R^k given by one spline per coordinate."""

    coords: list[Spline]

    def evaluate(self, face: int, point: Sequence[Fraction]) -> tuple[Fraction, ...]:
        return tuple(c.evaluate(face, point) for c in self.coords)

    def pieces(self, face: int) -> list[Polynomial]:
        return [c[face] for c in self.coords]


def fit_interpolate(domain: GrDomain, grading: Grading, targets: Sequence[Target], check: bool = True) -> SplineSurface:
    """A spline surface of the given degree through every target, exactly.

    Free coefficients of an underdetermined fit are set to zero.
    """
    if not targets:
        raise InconsistentTargets("no interpolation targets")
    width = len(targets[0].value)
    if any(len(t.value) != width for t in targets):
        raise InconsistentTargets("targets have values of different lengths")
    basis = spline_basis(domain, grading, check=check).splines
    if not basis:
        raise InconsistentTargets("the spline space is zero")
    evals = RationalMatrix([[b.evaluate(t.face, t.point) for b in basis] for t in targets], len(basis))
    coords = []
    for k in range(width):
        coeffs = solve(evals, [t.value[k] for t in targets])
        if coeffs is None:
            raise InconsistentTargets(
                f"no spline of {grading.kind} degree {grading.d} interpolates the {len(targets)} targets "
                f"(space dimension {len(basis)}, coordinate {k})")
        acc = Spline({s: domain.patch_ring(s).zero() for s in domain.complex.faces(domain.n)})
        for c, b in zip(coeffs, basis):
            if c:
                acc = acc + b * c
        coords.append(acc)
    return SplineSurface(coords)


def format_exact(x: Fraction) -> str:
    """Terminating decimals in decimal notation, anything else as p/q."""
    x = Fraction(x)
    q = x.denominator
    twos = fives = 0
    while q % 2 == 0:
        q //= 2
        twos += 1
    while q % 5 == 0:
        q //= 5
        fives += 1
    if q != 1:
        return f"{x.numerator}/{x.denominator}"
    k = max(twos, fives)
    if k == 0:
        return str(x.numerator)
    scaled = abs(x.numerator) * 10 ** k // x.denominator
    digits = str(scaled).rjust(k + 1, "0")
    sign = "-" if x < 0 else ""
    return f"{sign}{digits[:-k]}.{digits[-k:]}"


@dataclass
class Mesh:
    vertices: list[tuple[Fraction, ...]]
    quads: list[tuple[int, int, int, int]]
    face_of_quad: list[int]

    def to_text(self) -> str:
        lines = [f"# {len(self.vertices)} vertices, {len(self.quads)} quads"]
        for v in self.vertices:
            lines.append("v " + " ".join(format_exact(c) for c in v))
        for q in self.quads:
            lines.append("f " + " ".join(str(i + 1) for i in q))
        return "\n".join(lines) + "\n"


def export_surface(domain: GrDomain, surface: SplineSurface, resolution: int) -> Mesh:
    """Sample every patch on a uniform grid over [0,1]^2 and emit quads."""
    if domain.n != 2:
        raise ValueError("mesh export needs a 2-dimensional domain")
    if resolution < 1:
        raise ValueError("resolution must be positive")
    verts: list[tuple[Fraction, ...]] = []
    quads = []
    owner = []
    for s in domain.complex.faces(2):
        base = len(verts)
        for i in range(resolution + 1):
            for j in range(resolution + 1):
                verts.append(surface.evaluate(s, (Fraction(i, resolution), Fraction(j, resolution))))
        idx = lambda i, j: base + i * (resolution + 1) + j  # noqa: E731
        for i in range(resolution):
            for j in range(resolution):
                quads.append((idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1)))
                owner.append(s)
    return Mesh(verts, quads, owner)


def parse_mesh(text: str) -> Mesh:
    verts, quads = [], []
    for line in text.splitlines():
        parts = line.split()
        if not parts or parts[0].startswith("#"):
            continue
        if parts[0] == "v":
            verts.append(tuple(Fraction(p) for p in parts[1:]))
        elif parts[0] == "f":
            quads.append(tuple(int(p) - 1 for p in parts[1:]))
    return Mesh(verts, quads, [])
