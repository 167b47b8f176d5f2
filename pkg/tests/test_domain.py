from fractions import Fraction

import pytest

from gsplines import fixtures
from gsplines.domain import (
    GLUE_RING,
    DomainError,
    GluingData,
    IncompatibleDomain,
    bilinear_gluing,
    check_compatibility,
    is_irreducible_low_degree,
    reparametrize,
    symmetric_gluing,
    transition_from_gluing,
    two_cos,
)
from gsplines.groebner import buchberger
from gsplines.io import domain_from_dict
from gsplines.poly import Grading, Ring
from gsplines.splines import dimension

U = GLUE_RING.var("u")


def test_symmetric_gluing_values():
    g = symmetric_gluing(3, 4)
    assert g.a == -U ** 2 + 2 * U - 1 and g.b == GLUE_RING.constant(-1)
    g = symmetric_gluing(4, 4)
    assert g.a.is_zero() and g.b == -1 * GLUE_RING.one()
    assert symmetric_gluing(3, 3).a == 2 * U - 1
    assert symmetric_gluing(6, 6).a == -2 * U + 1


def test_irrational_valence_needs_surrogate():
    with pytest.raises(DomainError, match="5"):
        two_cos(5)
    assert two_cos(5, {5: Fraction(5, 8)}) == Fraction(5, 8)


def _corners(psi):
    return [psi(Fraction(u), Fraction(v)) for u, v in ((0, 0), (1, 0), (0, 1), (1, 1))]


def _cramer_oracle(psi1, psi2, t):
    """Values of (a, b) at edge parameter t from the first-order matching
    d/dv2 psi2 = b * d/du1 psi1 + a * d/dv1 psi1, solved by determinants.
    Both maps are bilinear, so the partial derivatives are exact differences."""
    def d(psi, which, u, v):
        p1 = psi(u + 1, v) if which == 0 else psi(u, v + 1)
        q0 = psi(u - 1, v) if which == 0 else psi(u, v - 1)
        return tuple((x - y) / 2 for x, y in zip(p1, q0))
    A = d(psi1, 0, Fraction(0), t)
    C = d(psi1, 1, Fraction(0), t)
    B = d(psi2, 1, t, Fraction(0))
    det = lambda p, q: p[0] * q[1] - p[1] * q[0]  # noqa: E731
    return det(A, B) / det(A, C), det(B, C) / det(A, C)


PSI1 = lambda u, v: (4 * u, 4 * v)  # noqa: E731
PSI2 = lambda u, v: (u * v / 2 - 5 * v, u * v / 8 + 4 * u + v)  # noqa: E731


def test_bilinear_printed_values():
    g = bilinear_gluing(_corners(PSI1), _corners(PSI2))
    assert g.a == GLUE_RING.parse("-1/32*u - 1/4")
    assert g.b == GLUE_RING.parse("-1/8*u + 5/4")


def test_bilinear_against_determinant_oracle():
    literal = bilinear_gluing(_corners(PSI1), _corners(PSI2), flip_transversal=False)
    flipped = bilinear_gluing(_corners(PSI1), _corners(PSI2))
    for t in (Fraction(0), Fraction(1, 3), Fraction(2), Fraction(-7, 5)):
        a, b = _cramer_oracle(PSI1, PSI2, t)
        assert literal.a.evaluate({"u": t}) == a and literal.b.evaluate({"u": t}) == b
        assert flipped.a.evaluate({"u": t}) == -a and flipped.b.evaluate({"u": t}) == -b


def test_bilinear_side_by_side_squares():
    g = bilinear_gluing(_corners(lambda u, v: (u, v)), _corners(lambda u, v: (-v, u)))
    assert g.a.is_zero() and g.b == GLUE_RING.one()


def test_bilinear_genuinely_bilinear_rejected():
    with pytest.raises(DomainError):
        bilinear_gluing(_corners(lambda u, v: (u + u * v, v)), _corners(lambda u, v: (-v, u)))


def test_zero_b_rejected():
    with pytest.raises(DomainError):
        GluingData.parse("u", "0")


def test_transition_example_map():
    lift, l1, l2 = transition_from_gluing(symmetric_gluing(3, 4), 1)
    tgt = Ring(["u2", "v2"])
    assert lift["u1"] == tgt.parse("-v2")
    assert lift["v1"] == tgt.parse("u2 + v2*(-u2^2 + 2*u2 - 1)")


@pytest.mark.parametrize("r", [0, 1, 3])
def test_transition_identity_style(r):
    lift, _, v2 = transition_from_gluing(GluingData.parse("0", "1"), r)
    tgt = v2.ring
    gb = buchberger([v2 ** (r + 1)])
    assert gb.contains(lift["u1"] - tgt.parse("v2"))
    assert lift["v1"] == tgt.parse("u2")


@pytest.mark.parametrize("a", ["2*u - 1", "-u^2 + 2*u - 1", "0", "3/7*u^3 - u"])
def test_inverse_gluing_composes_to_identity(a):
    # with b = -1 the inverse has the same form after swapping the roles of the coordinates
    g = GluingData.parse(a, "-1")
    lift, _, _ = transition_from_gluing(g, 1)
    src = Ring(["u1", "v1"])
    u1, v1 = src.gens()
    inverse = {"v2": -u1, "u2": v1 + u1 * g.a.substitute({"u": v1}, src)}
    gb = buchberger([u1 ** 2], ring=src)
    for x in ("u1", "v1"):
        back = lift[x].substitute(inverse, src)
        assert gb.contains(back - src.var(x))


@pytest.mark.parametrize("name,build", [
    ("cube", fixtures.cube),
    ("cube_neg", lambda: fixtures.cube("-2u+1")),
    ("star3", lambda: fixtures.vertex_star(3)),
    ("star4", lambda: fixtures.vertex_star(4, 4)),
    ("star6", lambda: fixtures.vertex_star(6)),
    ("two_patch", fixtures.two_patch),
    ("circle", fixtures.circle),
    ("sphere", fixtures.sphere),
    ("sphere_r2", lambda: fixtures.sphere(2)),
    ("two_triangles", fixtures.two_triangles),
])
def test_fixtures_compatible(name, build):
    check_compatibility(build())


def _flip_one_edge(variant_b):
    desc = fixtures.cube_dict()
    entry = desc["transitions"][0]
    entry.pop("symmetric")
    entry["gluing"] = {"a": "2*u - 1", "b": variant_b}
    return desc


def test_flipped_b_cube_rejected_at_vertex():
    desc = _flip_one_edge("1")
    domain = domain_from_dict(desc)
    with pytest.raises(IncompatibleDomain, match="C3"):
        check_compatibility(domain)
    edge = desc["transitions"][0]["facet"]
    ends = set(domain.complex.boundary((1, edge)))
    msg = ""
    try:
        check_compatibility(domain)
    except IncompatibleDomain as exc:
        msg = str(exc)
    assert any(f"vertex {v}" in msg for v in ends)


def test_negated_a_without_outward_frames_rejected():
    desc = fixtures.cube_dict("-2u+1")
    for entry in desc["transitions"]:
        entry.pop("normal_sign")
    with pytest.raises(IncompatibleDomain, match="C3"):
        check_compatibility(domain_from_dict(desc))


def test_sphere_lifts():
    s0 = fixtures.sphere(0)
    ring = s0.patch_ring(2)
    assert s0.transitions[1].lift == {"u1_1": ring.var("u2_1"), "u1_2": ring.var("u2_2")}
    s1 = fixtures.sphere(1)
    gens = s1.edge_generators(1)
    er = s1.face_ring((1, 1))
    w_s = 1 - er.var("u1_1") ** 2 - er.var("u1_2") ** 2
    w_n = 1 - er.var("u2_1") ** 2 - er.var("u2_2") ** 2
    assert w_s ** 2 in gens and w_n ** 2 in gens
    assert er.var("u1_1") - er.var("u2_1") * (1 + w_n) in gens
    assert s1.facet_ideals[(1, 1)].total_degree() == 2


def test_lift_must_preserve_facet():
    desc = fixtures.two_triangles_dict()
    desc["transitions"][0]["lift"] = {"u1_1": "u2_1 + 1", "u1_2": "u2_2"}
    with pytest.raises(IncompatibleDomain, match="C2"):
        check_compatibility(domain_from_dict(desc))


def test_singular_lift_rejected():
    desc = fixtures.two_triangles_dict()
    desc["transitions"][0]["lift"] = {"u1_1": "u2_1^2", "u1_2": "u2_2"}
    with pytest.raises(IncompatibleDomain, match="C2"):
        check_compatibility(domain_from_dict(desc))


def test_irreducibility():
    r = Ring(["x", "y"])
    assert is_irreducible_low_degree(r.parse("1 - x^2 - y^2"))
    assert not is_irreducible_low_degree(r.parse("x^2 - y^2"))
    assert not is_irreducible_low_degree(r.parse("x^2 - 2*x + 1"))
    assert is_irreducible_low_degree(r.parse("x^2 - 2"))
    assert is_irreducible_low_degree(r.parse("x^3 + y")) is None


def test_reducible_facet_generator_rejected():
    desc = fixtures.sphere_dict()
    desc["facets"] = {"1": {"1": "u1_1^2 - u1_2^2"}, "2": {"1": "u2_1^2 - u2_2^2"}}
    with pytest.raises(IncompatibleDomain, match="irreducible"):
        check_compatibility(domain_from_dict(desc))


@pytest.mark.parametrize("kind,d", [("total", 3), ("total", 4), ("bidegree", 2)])
def test_affine_reparametrization_invariance(kind, d):
    dom = fixtures.two_patch(3, 4)
    ring = dom.patch_ring(2)
    x, y = ring.gens()
    # new = M old + c and its inverse
    new_in_old = {"u2_1": 2 * x + y + 3, "u2_2": x + y - 1}
    old_in_new = {"u2_1": x - y - 4, "u2_2": -x + 2 * y + 5}
    for k in new_in_old:
        assert new_in_old[k].substitute(old_in_new, ring) == ring.var(k)
    moved = reparametrize(dom, 2, new_in_old, old_in_new)
    check_compatibility(moved)
    if kind == "total":
        assert dimension(moved, Grading(kind, d)) == dimension(dom, Grading(kind, d))
    else:
        # bidegree is not preserved by a shear, total degree is
        assert dimension(moved, Grading("total", 2 * d)) == dimension(dom, Grading("total", 2 * d))


def test_reparametrized_cube_patch():
    dom = fixtures.cube()
    ring = dom.patch_ring(0)
    x, y = ring.gens()
    moved = reparametrize(dom, 0, {"u0_1": 3 * x - y, "u0_2": x + 2}, {"u0_1": y - 2, "u0_2": 3 * y - x - 6})
    check_compatibility(moved)
    for d in (2, 4):
        assert dimension(moved, Grading("total", d)) == dimension(dom, Grading("total", d))
