"""Acceptance criteria 1-8. Each test prints one PASS/FAIL line; all
comparisons are exact. Expected values below are frozen literals or
independent formulas, never outputs of the package itself."""

import math
import random
import time
from fractions import Fraction

import pytest

from gsplines import fixtures
from gsplines.chain import SplineComplex
from gsplines.domain import IncompatibleDomain, check_compatibility
from gsplines.io import domain_from_dict
from gsplines.linalg import RationalMatrix, rank
from gsplines.poly import Grading, Polynomial
from gsplines.splines import constraint_matrix, dimension, spline_basis, verify
from gsplines.surface import Target, export_surface, fit_interpolate

TOTAL, BIDEG = "total", "bidegree"


def report(capsys, n, title, failures, extra=""):
    status = "PASS" if not failures else "FAIL"
    line = f"criterion {n} [{title}]: {status}"
    if failures:
        line += f" ({len(failures)} mismatch{'es' if len(failures) > 1 else ''}; first: {failures[0]})"
    elif extra:
        line += f" ({extra})"
    with capsys.disabled():
        print("\n" + line)
    assert not failures, "\n".join(failures)


def expect(failures, label, got, want):
    if got != want:
        failures.append(f"{label}: got {got}, expected {want}")


# 1. cube table, both sign variants

TABLE_TOTAL = {1: (1, -6), 2: (1, -12), 3: (1, -12), 4: (6, -6), 5: (18, 6), 6: (36, 24)}
TABLE_BIDEG = {1: (1, 0), 2: (6, 6), 3: (24, 24), 4: (54, 54), 5: (96, 96)}


def test_criterion_1_cube_table(capsys):
    failures = []
    start = time.perf_counter()
    for variant in ("2u-1", "-2u+1"):
        cube = fixtures.cube(variant)
        check_compatibility(cube)
        for kind, table in ((TOTAL, TABLE_TOTAL), (BIDEG, TABLE_BIDEG)):
            for d, (dim, chi) in table.items():
                g = Grading(kind, d)
                expect(failures, f"{variant} {kind} d={d} dim", dimension(cube, g, check=False), dim)
                expect(failures, f"{variant} {kind} d={d} chi", SplineComplex(cube, g).euler_characteristic(), chi)
    elapsed = time.perf_counter() - start
    if elapsed > 120:
        failures.append(f"runtime {elapsed:.1f}s exceeds 120s")
    report(capsys, 1, "cube table", failures, f"{elapsed:.1f}s")


# 2. two-patch closed forms, as printed: constant a gives d^2+d+1 and 2d^2+2d for d >= 0

def _two_patch_formula(d, deg_a, kind):
    if deg_a == 0:
        return d * d + d + 1 if kind == TOTAL else 2 * d * d + 2 * d
    return d * d + d + 1 - deg_a if kind == TOTAL else 2 * d * d + 2 * d + 1 - deg_a


def test_criterion_2_two_patch(capsys):
    failures = []
    cases = [((4, 4), 0), ((3, 3), 1), ((6, 6), 1), ((3, 4), 2)]
    for (w, w2), deg_a in cases:
        dom = fixtures.two_patch(w, w2)
        check_compatibility(dom)
        assert dom.transitions[0].gluing.degree_a == deg_a
        for d in range(deg_a + 1, 9):
            expect(failures, f"({w},{w2}) total d={d}", dimension(dom, Grading(TOTAL, d), check=False),
                   _two_patch_formula(d, deg_a, TOTAL))
        for d in range(deg_a, 9):
            expect(failures, f"({w},{w2}) bidegree d={d}", dimension(dom, Grading(BIDEG, d), check=False),
                   _two_patch_formula(d, deg_a, BIDEG))
    tp = fixtures.two_patch(3, 4)
    expect(failures, "example total d=3", dimension(tp, Grading(TOTAL, 3)), 11)
    expect(failures, "example bidegree d=3", dimension(tp, Grading(BIDEG, 3)), 23)
    report(capsys, 2, "two-patch formulas", failures)


# 3. vertex stars

def _star_chi_formula(s, d, deg_a, a_zero, kind):
    if kind == TOTAL:
        if s != 4:
            return s * math.comb(d + 2, 2) - s * (2 * d + deg_a + 1) + 3
        return 2 * (d * d - d + 2) if a_zero else 2 * (d * d - d - 2)
    if s != 4:
        return s * (d + 1) ** 2 - s * (2 * d + deg_a + 1) + 3
    return 4 * d * d if a_zero else 4 * (d * d - 1)


STARS = [
    # (label, s, outer valence, surrogates)
    ("s=3", 3, 4, None),
    ("s=4 a=0", 4, 4, None),
    ("s=4 a!=0", 4, 3, None),
    ("s=5 surrogate 5/8", 5, 4, {5: Fraction(5, 8)}),
    ("s=6", 6, 4, None),
]


def test_criterion_3_vertex_stars(capsys):
    failures = []
    star = fixtures.vertex_star(3)
    for d in range(4, 9):
        expect(failures, f"example s=3 total d={d}", dimension(star, Grading(TOTAL, d), check=False),
               Fraction(3, 2) * (d * d - d - 2))
    for d in range(3, 9):
        expect(failures, f"example s=3 bidegree d={d}", dimension(star, Grading(BIDEG, d), check=False),
               3 * d * d - 3)
    for label, s, outer, sur in STARS:
        dom = fixtures.vertex_star(s, outer, surrogates=sur)
        g = dom.transitions[next(iter(dom.transitions))].gluing
        deg_a, a_zero = g.degree_a, g.a.is_zero()
        for kind in (TOTAL, BIDEG):
            if s == 4:
                lo = 2 if kind == TOTAL else 1
            else:
                lo = deg_a + 1 if kind == TOTAL else max(deg_a, 1)
            exact_from = 4 if kind == TOTAL else 3
            for d in range(lo, 9):
                c = SplineComplex(dom, Grading(kind, d))
                chi = c.euler_characteristic()
                expect(failures, f"{label} {kind} d={d} chi", chi, _star_chi_formula(s, d, deg_a, a_zero, kind))
                if d >= exact_from:
                    expect(failures, f"{label} {kind} d={d} dim=chi", c.homology()[2], chi)
    report(capsys, 3, "vertex-star formulas", failures)


# 4. quotient lemmas and the listed J bases

def _j_basis_total(ring, d, a, deg_a):
    u1, v1, u2, v2 = (ring.var(x) for x in ("u1_1", "u1_2", "u2_1", "u2_2"))
    out = []
    for i in range(2, d + 1):
        for j in range(0, d - i + 1):
            out += [u1 ** i * v1 ** j, u2 ** j * v2 ** i]
    out += [u1 * v1 ** i + u2 ** i * v2 for i in range(0, d)]
    out += [v1 ** i - (u2 ** i + i * u2 ** (i - 1) * v2 * a(u2)) for i in range(1, d - deg_a + 1)]
    return out


def _j_basis_bidegree(ring, d, a, deg_a):
    u1, v1, u2, v2 = (ring.var(x) for x in ("u1_1", "u1_2", "u2_1", "u2_2"))
    out = []
    for i in range(2, d + 1):
        for j in range(0, d + 1):
            out += [u1 ** i * v1 ** j, u2 ** j * v2 ** i]
    out += [u1 * v1 ** j + u2 ** j * v2 for j in range(0, d + 1)]
    out += [v1 ** i - (u2 ** i + i * u2 ** (i - 1) * v2 * a(u2)) for i in range(1, d + 2 - deg_a)]
    return out


def _in_t(p, g):
    """Every term uses the variables of a single patch and fits the grading."""
    ring = p.ring
    for e in p.terms:
        used = [b for b, names in ring.blocks.items() if any(e[ring.index[x]] for x in names)]
        if len(used) > 1:
            return False
        if used and not g.admits([e[ring.index[x]] for x in ring.blocks[used[0]]]):
            return False
    return True


def _independent(polys):
    mons = sorted({e for p in polys for e in p.terms})
    idx = {e: i for i, e in enumerate(mons)}
    rows = [[Fraction(0)] * len(mons) for _ in polys]
    for r, p in enumerate(polys):
        for e, c in p.terms.items():
            rows[r][idx[e]] = c
    return rank(RationalMatrix(rows, len(mons))) == len(polys)


A_OF = {
    (3, 3): lambda u: 2 * u - 1,
    (3, 4): lambda u: -u ** 2 + 2 * u - 1,
    (6, 6): lambda u: -2 * u + 1,
}


def test_criterion_4_quotient_lemmas(capsys):
    failures = []
    # edge quotients, deg a >= 1
    for (w, w2), a in A_OF.items():
        dom = fixtures.two_patch(w, w2)
        deg_a = dom.transitions[0].gluing.degree_a
        gb = dom.groebner((1, 0))
        ring = gb.ring
        for kind, lo in ((TOTAL, deg_a + 1), (BIDEG, deg_a)):
            for d in range(lo, 9):
                q = SplineComplex(dom, Grading(kind, d)).quotients[(1, 0)]
                expect(failures, f"Q(tau) ({w},{w2}) {kind} d={d}", q.dim, 2 * d + deg_a + 1)
                basis = (_j_basis_total if kind == TOTAL else _j_basis_bidegree)(ring, d, a, deg_a)
                want = d * d + d - deg_a if kind == TOTAL else 2 * d * d + 2 * d - deg_a
                expect(failures, f"J list size ({w},{w2}) {kind} d={d}", len(set(basis)), want)
                outside = [p for p in basis if not gb.contains(p)]
                expect(failures, f"J list membership ({w},{w2}) {kind} d={d}", len(outside), 0)
                outside_t = [p for p in basis if not _in_t(p, Grading(kind, d))]
                expect(failures, f"J list inside T ({w},{w2}) {kind} d={d}", len(outside_t), 0)
                expect(failures, f"J list independent ({w},{w2}) {kind} d={d}", _independent(basis), True)
                expect(failures, f"dim J ({w},{w2}) {kind} d={d}", len(q.span) - q.dim, want)
    # constant a, stated for every d >= 0
    flat = fixtures.two_patch(4, 4)
    for d in range(0, 9):
        expect(failures, f"Q(tau) constant a total d={d}",
               SplineComplex(flat, Grading(TOTAL, d)).quotients[(1, 0)].dim, 2 * d + 1)
        expect(failures, f"Q(tau) constant a bidegree d={d}",
               SplineComplex(flat, Grading(BIDEG, d)).quotients[(1, 0)].dim, 2 * d + 2)
    # vertex quotients
    for s in (3, 6):
        dom = fixtures.vertex_star(s)
        for kind in (TOTAL, BIDEG):
            for d in range(1, 7):
                expect(failures, f"Q(gamma) s={s} {kind} d={d}",
                       SplineComplex(dom, Grading(kind, d)).quotients[(0, 0)].dim, 3)
    for outer in (4, 3):
        dom = fixtures.vertex_star(4, outer)
        for kind, lo in ((TOTAL, 2), (BIDEG, 1)):
            for d in range(lo, 7):
                expect(failures, f"Q(gamma) s=4 outer={outer} {kind} d={d}",
                       SplineComplex(dom, Grading(kind, d)).quotients[(0, 0)].dim, 4)
    report(capsys, 4, "quotient lemmas", failures)


# 5. homology

def test_criterion_5_homology(capsys):
    failures = []
    checked = 0

    def chi_check(label, c):
        nonlocal checked
        h = c.homology()
        alt = sum((-1) ** k * h[k] for k in range(c.n + 1)) * (-1) ** c.n
        expect(failures, f"{label} alternating homology", alt, c.euler_characteristic())
        checked += 1
        return h

    for (w, w2), deg_a in (((3, 4), 2), ((3, 3), 1), ((4, 4), 0)):
        dom = fixtures.two_patch(w, w2)
        for kind, lo in ((TOTAL, deg_a + 1), (BIDEG, deg_a)):
            for d in range(lo, 9):
                h = chi_check(f"two-patch ({w},{w2}) {kind} d={d}", SplineComplex(dom, Grading(kind, d)))
                expect(failures, f"two-patch ({w},{w2}) {kind} d={d} H0,H1", (h[0], h[1]), (0, 0))
    for s, outer in ((3, 4), (4, 4), (4, 3), (6, 4)):
        dom = fixtures.vertex_star(s, outer)
        for kind, h1_from in ((TOTAL, 4), (BIDEG, 3)):
            for d in range(0, 8):
                h = chi_check(f"star s={s} {kind} d={d}", SplineComplex(dom, Grading(kind, d)))
                expect(failures, f"star s={s} outer={outer} {kind} d={d} H0", h[0], 0)
                if d >= h1_from:
                    expect(failures, f"star s={s} outer={outer} {kind} d={d} H1", h[1], 0)
    cube = fixtures.cube()
    for kind, degrees in ((TOTAL, range(1, 7)), (BIDEG, range(1, 6))):
        for d in degrees:
            c = SplineComplex(cube, Grading(kind, d))
            h = chi_check(f"cube {kind} d={d}", c)
            if kind == TOTAL and d >= 4:
                expect(failures, f"cube d={d} dim - chi", h[2] - c.euler_characteristic(), 12)
    report(capsys, 5, "homology", failures, f"{checked} complexes")


# 6. identity transitions on two triangles

def test_criterion_6_two_triangles(capsys):
    failures = []
    for r in (0, 1, 2):
        dom = fixtures.two_triangles(r)
        check_compatibility(dom)
        for d in range(0, 7):
            want = math.comb(d + 2, 2) + (math.comb(d - r - 1 + 2, 2) if d - r - 1 >= 0 else 0)
            expect(failures, f"r={r} d={d}", dimension(dom, Grading(TOTAL, d), check=False), want)
    report(capsys, 6, "two-triangle specialization", failures)


# 7. structural properties on every fixture

STRUCT_FIXTURES = {
    "two_patch": lambda: fixtures.two_patch(3, 4),
    "star3": lambda: fixtures.vertex_star(3),
    "star4": lambda: fixtures.vertex_star(4, 4),
    "cube": fixtures.cube,
    "circle": fixtures.circle,
    "sphere": fixtures.sphere,
}


def _random_poly(ring, rng):
    terms = {}
    for _ in range(rng.randint(0, 6)):
        e = tuple(rng.randint(0, 3) for _ in range(ring.nvars))
        terms[e] = Fraction(rng.randint(-9, 9), rng.randint(1, 6))
    return Polynomial(ring, terms)


def test_criterion_7_structure(capsys):
    failures = []
    nbases = 0
    for name, build in STRUCT_FIXTURES.items():
        dom = build()
        check_compatibility(dom)
        gradings = [Grading(TOTAL, d) for d in range(0, 5)]
        if dom.n == 2:
            gradings += [Grading(BIDEG, d) for d in range(1, 4)]
        for g in gradings:
            c = SplineComplex(dom, g)
            for k in range(2, dom.n + 1):
                a, b = c.boundary_matrix(k - 1), c.boundary_matrix(k)
                if a.nrows and a.ncols and b.ncols and not (a @ b).is_zero():
                    failures.append(f"{name} {g.kind} d={g.d}: delta_{k - 1} delta_{k} != 0")
            basis = spline_basis(dom, g, check=False)
            system = constraint_matrix(dom, g)
            expect(failures, f"{name} {g.kind} d={g.d} basis size",
                   basis.dim, system.matrix.ncols - rank(system.matrix))
            bad = [i for i, sp in enumerate(basis.splines) if not verify(dom, sp, g)]
            expect(failures, f"{name} {g.kind} d={g.d} unverified basis elements", bad, [])
            nbases += 1
        rng = random.Random(name)
        faces = [(k, i) for k in range(dom.n) for i in dom.complex.interior_faces(k)]
        for face in faces:
            gb = dom.groebner(face)
            for trial in range(200):
                f, h = _random_poly(gb.ring, rng), _random_poly(gb.ring, rng)
                p, q = Fraction(rng.randint(-7, 7), rng.randint(1, 5)), Fraction(rng.randint(-7, 7), rng.randint(1, 5))
                rf, rh = gb.normal_form(f), gb.normal_form(h)
                if gb.normal_form(rf) != rf:
                    failures.append(f"{name} face {face}: normal form not idempotent on trial {trial}")
                    break
                if gb.normal_form(p * f + q * h) != p * rf + q * rh:
                    failures.append(f"{name} face {face}: normal form not linear on trial {trial}")
                    break
    flipped = fixtures.cube_dict()
    entry = flipped["transitions"][0]
    entry.pop("symmetric")
    entry["gluing"] = {"a": "2*u - 1", "b": "1"}
    try:
        check_compatibility(domain_from_dict(flipped))
        failures.append("one-edge-flipped cube accepted")
    except IncompatibleDomain:
        pass
    report(capsys, 7, "structural properties", failures, f"{nbases} bases")


# 8. interpolating surface on the cube

def test_criterion_8_cube_surface(capsys):
    failures = []
    cube = fixtures.cube()
    half = (Fraction(1, 2), Fraction(1, 2))
    # faces are numbered 2*axis + side, so the centre of face f is -1 or +1 on that axis
    centres = {f: tuple(Fraction(2 * (f % 2) - 1) if k == f // 2 else Fraction(0) for k in range(3))
               for f in range(6)}
    targets = [Target(f, half, centres[f]) for f in range(6)]
    surface = fit_interpolate(cube, Grading(BIDEG, 2), targets)
    for t in targets:
        expect(failures, f"residual at face {t.face}", surface.evaluate(t.face, t.point), t.value)
    mesh = export_surface(cube, surface, 2)
    samples = sorted(mesh.vertices[9 * k + 4] for k in range(6))
    want = sorted([(s, 0, 0) for s in (-1, 1)] + [(0, s, 0) for s in (-1, 1)] + [(0, 0, s) for s in (-1, 1)])
    expect(failures, "mesh face-centre samples", samples, want)
    expect(failures, "quad count", len(mesh.quads), 24)
    report(capsys, 8, "interpolating cube surface", failures)


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
