"""JSON domain files, basis files and polynomial text."""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any

from .complex import CellComplex, ComplexError
from .domain import (
    DomainError,
    GluingData,
    GrDomain,
    TransitionMap,
    lift_from_gluing,
    line_through,
    symmetric_gluing,
)
from .poly import Polynomial, PolynomialError, Ring, parse_rational


class DomainFileError(ValueError):
    pass


def _int_keys(d: dict) -> dict:
    try:
        return {int(k): v for k, v in d.items()}
    except ValueError as exc:
        raise DomainFileError(f"cell ids must be integers: {exc}") from exc


def _complex_from(desc: dict) -> CellComplex:
    n = desc.get("n")
    if n not in (1, 2, 3):
        raise DomainFileError("'n' must be 1, 2 or 3")
    polygons = {k: [int(v) for v in vs] for k, vs in _int_keys(desc.get("polygons", {})).items()}
    try:
        if "cells" in desc:
            cells = {int(k): {i: {int(j): int(s) for j, s in bd.items()} for i, bd in _int_keys(group).items()}
                     for k, group in desc["cells"].items()}
            cx = CellComplex(n, cells, polygons=polygons)
        elif polygons:
            if n != 2:
                raise DomainFileError("'polygons' describes 2-dimensional complexes only")
            cx = CellComplex.from_polygons(polygons)
        else:
            raise DomainFileError("a domain needs 'cells' or 'polygons'")
    except ComplexError as exc:
        raise DomainFileError(str(exc)) from exc
    return cx


def _default_corners(cx: CellComplex) -> dict[tuple[int, int], tuple[Fraction, ...]]:
    out = {}
    unit = [(0, 0), (1, 0), (1, 1), (0, 1)]
    for s, verts in cx.polygons.items():
        if len(verts) == 4:
            for v, p in zip(verts, unit):
                out[(s, v)] = tuple(Fraction(x) for x in p)
    return out


def _other_end(cx: CellComplex, edge: int, v: int) -> int:
    ends = [w for w in cx.boundary((1, edge))]
    others = [w for w in ends if w != v]
    if len(others) != 1:
        raise DomainFileError(f"edge {edge} is not a simple edge at vertex {v}")
    return others[0]


def _off_edge_neighbour(cx: CellComplex, s: int, t: int, v: int) -> int:
    edges = [e for e in cx.sub_faces((2, s), 1) if e != t and v in cx.boundary((1, e))]
    if len(edges) != 1:
        raise DomainFileError(f"vertex {v} of patch {s} does not have a unique second edge")
    return _other_end(cx, edges[0], v)


def _gamma(cx: CellComplex, source: int, t: int) -> int:
    """Endpoint at which the source patch's boundary traversal of t ends."""
    a = cx.incidence((2, source), (1, t))
    for v, b in cx.boundary((1, t)).items():
        if a * b == 1:
            return v
    raise DomainFileError(f"cannot orient facet {t}; give 'gamma' explicitly")


def domain_from_dict(desc: dict, r: int | None = None) -> GrDomain:
    """Build a domain from its JSON description, optionally overriding r."""
    cx = _complex_from(desc)
    n = cx.n
    r = int(desc.get("r", 1) if r is None else r)
    if r < 0:
        raise DomainFileError("r must be nonnegative")
    draft = GrDomain(cx, r, {}, {}, {}, desc.get("name", ""))

    corners = _default_corners(cx)
    for s, table in _int_keys(desc.get("corners", {})).items():
        for v, pt in _int_keys(table).items():
            corners[(s, v)] = tuple(parse_rational(c) for c in pt)
    draft.corners = corners

    ideals: dict[tuple[int, int], Polynomial] = {}
    for s, table in _int_keys(desc.get("facets", {})).items():
        ring = draft.patch_ring(s)
        for t, text in _int_keys(table).items():
            ideals[(s, t)] = _parse(text, ring)
    for s in cx.faces(n):
        ring = draft.patch_ring(s)
        for t in cx.sub_faces((n, s), n - 1):
            if (s, t) in ideals:
                continue
            pts = [corners.get((s, v)) for v in cx.sub_faces((n - 1, t), 0)] if n > 1 else [corners.get((s, t))]
            if any(p is None for p in pts):
                continue
            if n == 1:
                ideals[(s, t)] = ring.gens()[0] - pts[0][0]
            elif n == 2 and len(pts) == 2:
                ideals[(s, t)] = line_through(ring, pts[0], pts[1])
    draft.facet_ideals = ideals

    surrogates = {int(k): parse_rational(v) for k, v in desc.get("surrogates", {}).items()}
    transitions = {}
    for entry in desc.get("transitions", []):
        tr = _transition(draft, entry, surrogates)
        if tr.facet in transitions:
            raise DomainFileError(f"facet {tr.facet} has two transitions")
        transitions[tr.facet] = tr
    missing = [t for t in cx.interior_faces(n - 1) if t not in transitions]
    if missing:
        raise DomainFileError(f"interior facets without a transition: {missing}")
    for t in transitions:
        for s in (transitions[t].source, transitions[t].target):
            if (s, t) not in ideals:
                raise DomainFileError(f"no ideal for facet {t} in patch {s}; give 'facets' or 'corners'")
    draft.transitions = transitions
    return draft


def _parse(text, ring: Ring) -> Polynomial:
    try:
        return ring.parse(str(text))
    except PolynomialError as exc:
        raise DomainFileError(str(exc)) from exc


def _transition(draft: GrDomain, entry: dict, surrogates: dict) -> TransitionMap:
    cx = draft.complex
    try:
        t, source, target = int(entry["facet"]), int(entry["source"]), int(entry["target"])
    except KeyError as exc:
        raise DomainFileError(f"transition entry lacks {exc}") from exc
    cof = {c[1] for c in cx.cofaces((cx.n - 1, t))} if (cx.n - 1, t) in cx._up else set()
    if cof != {source, target}:
        raise DomainFileError(f"facet {t} does not join patches {source} and {target}")
    src, tgt = draft.patch_ring(source), draft.patch_ring(target)
    if "lift" in entry:
        lift = {x: _parse(text, tgt) for x, text in entry["lift"].items()}
        if set(lift) != set(src.names):
            raise DomainFileError(f"lift of facet {t} must give images of {list(src.names)}")
        return TransitionMap(t, source, target, lift, None, entry.get("gamma"))
    if cx.n != 2:
        raise DomainFileError("gluing data shorthand needs a 2-dimensional domain")
    gamma = int(entry["gamma"]) if "gamma" in entry else _gamma(cx, source, t)
    other = _other_end(cx, t, gamma)
    if "symmetric" in entry:
        spec = entry["symmetric"]
        local = dict(surrogates)
        local.update({int(k): parse_rational(v) for k, v in entry.get("surrogates", {}).items()})
        if spec == "valence":
            w, w2 = cx.valence(gamma), cx.valence(other)
        else:
            w, w2 = (int(x) for x in spec)
        try:
            g = symmetric_gluing(w, w2, local)
        except DomainError as exc:
            raise DomainFileError(str(exc)) from exc
    elif "gluing" in entry:
        g = GluingData.parse(entry["gluing"]["a"], entry["gluing"]["b"])
    else:
        raise DomainFileError(f"transition of facet {t} needs 'lift', 'gluing' or 'symmetric'")
    sign = int(entry.get("normal_sign", 1))
    if sign not in (1, -1):
        raise DomainFileError("'normal_sign' must be 1 or -1")
    frames = []
    for s in (source, target):
        c = _off_edge_neighbour(cx, s, t, gamma)
        try:
            frames.append(tuple(draft.corners[(s, v)] for v in (gamma, other, c)))
        except KeyError as exc:
            raise DomainFileError(f"patch {s} lacks corner coordinates for {exc}") from exc
    lift = lift_from_gluing(g, src, tgt, frames[0], frames[1], normal_sign=sign)
    return TransitionMap(t, source, target, lift, g, gamma)


def _num(x: Fraction) -> str | int:
    return int(x) if x.denominator == 1 else str(x)


def domain_to_dict(domain: GrDomain) -> dict:
    """Explicit description: cells, corners, facet generators and lifts."""
    cx = domain.complex
    out: dict[str, Any] = {"name": domain.name, "n": cx.n, "r": domain.r}
    out["cells"] = {str(k): {str(i): {str(j): s for j, s in bd.items()} for i, bd in sorted(group.items())}
                    for k, group in sorted(cx.cells.items())}
    if cx.polygons:
        out["polygons"] = {str(s): vs for s, vs in sorted(cx.polygons.items())}
    corners: dict[str, dict] = {}
    for (s, v), pt in sorted(domain.corners.items()):
        corners.setdefault(str(s), {})[str(v)] = [_num(c) for c in pt]
    out["corners"] = corners
    facets: dict[str, dict] = {}
    for (s, t), gen in sorted(domain.facet_ideals.items()):
        facets.setdefault(str(s), {})[str(t)] = str(gen)
    out["facets"] = facets
    out["transitions"] = [
        {"facet": tr.facet, "source": tr.source, "target": tr.target,
         "lift": {x: str(p) for x, p in sorted(tr.lift.items())}}
        for _, tr in sorted(domain.transitions.items())
    ]
    return out


def load_domain(path: str | Path, r: int | None = None) -> GrDomain:
    try:
        desc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise DomainFileError(f"{path}: not valid JSON ({exc})") from exc
    return domain_from_dict(desc, r)


def save_domain(domain: GrDomain, path: str | Path) -> None:
    Path(path).write_text(json.dumps(domain_to_dict(domain), indent=2) + "\n")
