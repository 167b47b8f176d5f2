"""Bundled example domains, built from the same JSON descriptions the CLI reads."""

from __future__ import annotations

import json
from importlib import resources

from .complex import CellComplex
from .domain import GrDomain
from .io import domain_from_dict


def _sym(w, w2, surrogates=None) -> dict:
    entry: dict = {"symmetric": [w, w2]}
    if surrogates:
        entry["surrogates"] = {str(k): str(v) for k, v in surrogates.items()}
    return entry


def two_patch_dict(w: int = 3, w2: int = 4, r: int = 1, gluing: dict | None = None) -> dict:
    """Two unit squares sharing the edge u1_1 = 0 = u2_2, gamma at the origin."""
    return {
        "name": f"two_patch_{w}{w2}" if gluing is None else "two_patch",
        "n": 2,
        "r": r,
        "grading": "total",
        "polygons": {"1": [0, 2, 3, 1], "2": [0, 1, 4, 5]},
        "transitions": [dict({"facet": 0, "source": 1, "target": 2}, **(gluing or _sym(w, w2)))],
    }


def vertex_star_dict(s: int, outer: int = 4, r: int = 1, surrogates: dict | None = None) -> dict:
    """s squares around an interior vertex 0; patch i has the vertex at its origin.

    Edge tau_i joins patch i (side u=0) to patch i+1 (side v=0). ``outer``
    is the valence assumed at the far ends of the interior edges.
    """
    polys = {}
    for i in range(1, s + 1):
        prev = s if i == 1 else i - 1
        polys[str(i)] = [0, prev, s + i, i]
    desc = {"name": f"star_{s}_{outer}", "n": 2, "r": r, "grading": "total", "polygons": polys,
            "transitions": []}
    cx = CellComplex.from_polygons({int(k): v for k, v in polys.items()})
    for i in range(1, s + 1):
        nxt = 1 if i == s else i + 1
        edge = _edge_between(cx, 0, i)
        desc["transitions"].append(dict({"facet": edge, "source": i, "target": nxt}, **_sym(s, outer, surrogates)))
    return desc


def _edge_between(cx, a: int, b: int) -> int:
    for e in cx.faces(1):
        if set(cx.boundary((1, e))) == {a, b}:
            return e
    raise KeyError((a, b))


_CUBE_FACES = {
    # id: (axis, side)
    0: (0, 0), 1: (0, 1), 2: (1, 0), 3: (1, 1), 4: (2, 0), 5: (2, 1),
}


def _cube_polygons() -> dict[int, list[int]]:
    """Faces of [0,1]^3 as vertex cycles, counterclockwise seen from outside.
    Vertex index is x + 2y + 4z."""
    out = {}
    for f, (axis, side) in _CUBE_FACES.items():
        a, b = [k for k in range(3) if k != axis]
        square = [(0, 0), (1, 0), (1, 1), (0, 1)]
        verts = []
        for pa, pb in square:
            p = [0, 0, 0]
            p[axis], p[a], p[b] = side, pa, pb
            verts.append(p)
        # orientation: (e_a x e_b) points along +axis; flip when the outward normal is -axis
        normal_sign = 1 if (a, b) in ((1, 2), (2, 0), (0, 1)) else -1
        if (1 if side else -1) * normal_sign < 0:
            verts = [verts[0]] + verts[:0:-1]
        out[f] = [p[0] + 2 * p[1] + 4 * p[2] for p in verts]
    return out


def cube_dict(variant: str = "2u-1", r: int = 1) -> dict:
    """Boundary of the cube, six squares with symmetric gluing at valence 3.

    ``variant="2u-1"`` uses a = 2u - 1 with inward transversal coordinates;
    ``variant="-2u+1"`` uses a = -2u + 1 with outward ones (the same maps).
    """
    polys = _cube_polygons()
    cx = CellComplex.from_polygons(polys)
    transitions = []
    for e in cx.interior_faces(1):
        s, t = sorted(c[1] for c in cx.cofaces((1, e)))
        entry = {"facet": e, "source": s, "target": t}
        if variant == "2u-1":
            entry["symmetric"] = "valence"
        elif variant == "-2u+1":
            entry["gluing"] = {"a": "-2*u + 1", "b": "-1"}
            entry["normal_sign"] = -1
        else:
            raise ValueError(f"unknown cube variant {variant!r}")
        transitions.append(entry)
    return {"name": "cube" if variant == "2u-1" else "cube_neg", "n": 2, "r": r, "grading": "total",
            "polygons": {str(f): v for f, v in polys.items()}, "transitions": transitions}


def circle_dict(r: int = 1) -> dict:
    """Three unit arcs; arc i runs from vertex i (u=0) to vertex i+1 (u=1)."""
    cells = {"1": {}, "0": {str(v): {} for v in (1, 2, 3)}}
    corners = {}
    transitions = []
    for i in (1, 2, 3):
        j = i % 3 + 1
        cells["1"][str(i)] = {str(i): -1, str(j): 1}
        corners[str(i)] = {str(i): [0], str(j): [1]}
        transitions.append({"facet": j, "source": i, "target": j, "lift": {f"u{i}_1": f"u{j}_1 + 1"}})
    return {"name": "circle", "n": 1, "r": r, "grading": "total", "cells": cells, "corners": corners,
            "transitions": transitions}


def sphere_dict(r: int = 1) -> dict:
    """Two stereographic hemispheres glued along the equator (a 1-cell without vertices)."""
    w = "(1 - u2_1^2 - u2_2^2)"
    series = " + ".join(["1"] + [f"{w}^{k}" for k in range(1, r + 1)])
    return {
        "name": "sphere", "n": 2, "r": r, "grading": "total",
        "cells": {"2": {"1": {"1": 1}, "2": {"1": -1}}, "1": {"1": {}}, "0": {}},
        "facets": {"1": {"1": "1 - u1_1^2 - u1_2^2"}, "2": {"1": "1 - u2_1^2 - u2_2^2"}},
        "transitions": [{"facet": 1, "source": 1, "target": 2,
                         "lift": {"u1_1": f"u2_1*({series})", "u1_2": f"u2_2*({series})"}}],
    }


def two_triangles_dict(r: int = 1) -> dict:
    """Two triangles of the plane sharing the segment x=0, identity transition."""
    return {
        "name": "two_triangles", "n": 2, "r": r, "grading": "total",
        "polygons": {"1": [0, 2, 1], "2": [0, 1, 3]},
        "corners": {"1": {"0": [0, 0], "1": [0, 1], "2": [1, 0]},
                    "2": {"0": [0, 0], "1": [0, 1], "3": [-1, 0]}},
        "transitions": [{"facet": 0, "source": 1, "target": 2, "lift": {"u1_1": "u2_1", "u1_2": "u2_2"}}],
    }


def two_patch(w: int = 3, w2: int = 4, r: int = 1) -> GrDomain:
    return domain_from_dict(two_patch_dict(w, w2, r))


def two_patch_gluing(a: str, b: str = "-1", r: int = 1) -> GrDomain:
    return domain_from_dict(two_patch_dict(r=r, gluing={"gluing": {"a": a, "b": b}}))


def vertex_star(s: int, outer: int = 4, r: int = 1, surrogates: dict | None = None) -> GrDomain:
    return domain_from_dict(vertex_star_dict(s, outer, r, surrogates))


def cube(variant: str = "2u-1", r: int = 1) -> GrDomain:
    return domain_from_dict(cube_dict(variant, r))


def circle(r: int = 1) -> GrDomain:
    return domain_from_dict(circle_dict(r))


def sphere(r: int = 1) -> GrDomain:
    return domain_from_dict(sphere_dict(r))


def two_triangles(r: int = 1) -> GrDomain:
    return domain_from_dict(two_triangles_dict(r))


def bundled(name: str) -> dict:
    """A domain description shipped with the package (e.g. ``cube.json``)."""
    return json.loads(resources.files("gsplines.data").joinpath(name).read_text())
