"""G^r-domains: cell complexes with patch rings, facet ideals and transition maps."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement, permutations
from typing import Mapping, Sequence

from .complex import CellComplex, ComplexError, Face
from .groebner import GroebnerBasis, buchberger
from .linalg import RationalMatrix, rank
from .poly import GREVLEX, Polynomial, Ring, union_ring

GLUE_RING = Ring(["u"])
Point = tuple[Fraction, ...]


class DomainError(ValueError):
    pass


class IncompatibleDomain(DomainError):
    pass


def var_names(face: int, n: int) -> list[str]:
    return [f"u{face}_{j}" for j in range(1, n + 1)]


@dataclass(frozen=True)
class GluingData:
    """Univariate polynomials a(u), b(u) defining u1 -> v2*b(u2), v1 -> u2 + v2*a(u2)."""

    a: Polynomial
    b: Polynomial

    def __post_init__(self):
        for p in (self.a, self.b):
            if p.ring != GLUE_RING:
                raise DomainError("gluing data must be polynomials in the single variable u")
        if self.b.is_zero():
            raise DomainError("gluing data needs b != 0")

    @classmethod
    def parse(cls, a: str, b: str) -> GluingData:
        return cls(GLUE_RING.parse(str(a)), GLUE_RING.parse(str(b)))

    @property
    def degree_a(self) -> int:
        """Degree of a, with the zero polynomial counted as degree 0."""
        return max(self.a.total_degree(), 0)


_TWO_COS = {1: Fraction(2), 2: Fraction(-2), 3: Fraction(-1), 4: Fraction(0), 6: Fraction(1)}


def two_cos(w: int, surrogates: Mapping[int, Fraction] | None = None) -> Fraction:
    """2cos(2*pi/w) for the valences where it is rational, else a supplied surrogate."""
    if surrogates and w in surrogates:
        return Fraction(surrogates[w])
    if w in _TWO_COS:
        return _TWO_COS[w]
    raise DomainError(f"2cos(2pi/{w}) is irrational; supply a rational surrogate")


def symmetric_gluing(w: int, w2: int, surrogates: Mapping[int, Fraction] | None = None) -> GluingData:
    """Symmetric data for an edge whose endpoints have valences w (at u=0) and w2."""
    if w < 1 or w2 < 1:
        raise DomainError("valences must be positive")
    u = GLUE_RING.var("u")
    a = two_cos(w, surrogates) * (1 - u) ** 2 - two_cos(w2, surrogates) * u ** 2
    return GluingData(a, GLUE_RING.constant(-1))


def _bilinear_coefficients(corners: Sequence[Sequence]) -> tuple[dict, dict]:
    """Coefficients of a bilinear map from its values at (0,0), (1,0), (0,1), (1,1)."""
    if len(corners) != 4:
        raise DomainError("a bilinear patch needs four corner points")
    p00, p10, p01, p11 = [tuple(Fraction(c) for c in p) for p in corners]
    out = []
    for k in range(2):
        out.append({
            "00": p00[k],
            "10": p10[k] - p00[k],
            "01": p01[k] - p00[k],
            "11": p11[k] - p10[k] - p01[k] + p00[k],
        })
    return out[0], out[1]


def _divide_univariate(num: Polynomial, den: Polynomial) -> Polynomial | None:
    """Exact quotient num/den in Q[u], or None if den does not divide num."""
    if den.is_zero():
        return None
    q = GLUE_RING.zero()
    r = num
    dd = den.total_degree()
    lc = den.coefficient((dd,))
    while not r.is_zero() and r.total_degree() >= dd:
        k = r.total_degree() - dd
        t = GLUE_RING.monomial((k,), r.coefficient((r.total_degree(),)) / lc)
        q = q + t
        r = r - t * den
    return q if r.is_zero() else None


def bilinear_gluing(corners1: Sequence, corners2: Sequence, flip_transversal: bool = True) -> GluingData:
    """Gluing data determined by two bilinear parametrizations.

    Corners are images of (0,0), (1,0), (0,1), (1,1). The shared edge must
    lie on x=0 with both patches having (0,0) at the origin, u1=0 and v2=0
    on the edge. With ``flip_transversal`` the second patch's transversal
    coordinate is taken with the opposite sign (v2 -> -v2).
    """
    (a, b) = _bilinear_coefficients(corners1)
    (c, e) = _bilinear_coefficients(corners2)
    if any(x != 0 for x in (a["01"], a["00"], b["00"], c["10"], c["00"], e["00"])):
        raise DomainError("patches are not normalized: shared edge on x=0 with a common corner at the origin")
    u = GLUE_RING.var("u")
    sign = -1 if flip_transversal else 1
    lhs1 = a["11"] * u + a["10"]
    rhs1 = sign * (c["11"] * u + c["01"])
    bpoly = _divide_univariate(rhs1, lhs1)
    if bpoly is None:
        raise DomainError(f"no polynomial solution for b: ({lhs1}) does not divide ({rhs1}); a11 = {a['11']}")
    if b["01"] == 0:
        raise DomainError("degenerate first patch: b01 = 0")
    rest = sign * (e["11"] * u + e["01"]) - (b["11"] * u + b["10"]) * bpoly
    apoly = rest / b["01"]
    if bpoly.is_zero():
        raise DomainError("degenerate second patch: b = 0")
    return GluingData(apoly, bpoly)


@dataclass(frozen=True)
class TransitionMap:
    """Lift of the transition ring map: images of the source variables as
    polynomials in the target patch ring."""

    facet: int
    source: int
    target: int
    lift: Mapping[str, Polynomial]
    gluing: GluingData | None = None
    gamma: int | None = None

    def __eq__(self, other):
        if not isinstance(other, TransitionMap):
            return NotImplemented
        return (self.facet, self.source, self.target, dict(self.lift)) == (
            other.facet, other.source, other.target, dict(other.lift))

    def __hash__(self):
        return hash((self.facet, self.source, self.target))


def transition_from_gluing(g: GluingData, r: int) -> tuple[dict[str, Polynomial], Polynomial, Polynomial]:
    """Relative-coordinate lift on patches (u1, v1) and (u2, v2), truncated modulo v2^(r+1).

    Returns (lift, source ideal generator, target ideal generator).
    """
    src = Ring(["u1", "v1"])
    tgt = Ring(["u2", "v2"])
    u2, v2 = tgt.gens()
    a = g.a.substitute({"u": u2}, tgt)
    b = g.b.substitute({"u": u2}, tgt)
    lift = {"u1": _truncate(v2 * b, 1, r), "v1": _truncate(u2 + v2 * a, 1, r)}
    return lift, src.var("u1"), v2


def _truncate(p: Polynomial, index: int, r: int) -> Polynomial:
    return Polynomial(p.ring, {e: c for e, c in p.terms.items() if e[index] <= r})


def _affine_frame(origin: Point, p_along: Point, p_in: Point, along_first: bool):
    """Affine map taking origin->0, p_along->unit along, p_in->unit inward.

    Returns (M, b) with relative = M x + b; along_first puts the along
    coordinate first.
    """
    d_al = [Fraction(x) - Fraction(o) for x, o in zip(p_along, origin)]
    d_in = [Fraction(x) - Fraction(o) for x, o in zip(p_in, origin)]
    cols = [d_al, d_in] if along_first else [d_in, d_al]
    # B has columns = images of relative unit vectors; relative = B^{-1}(x - origin)
    det = cols[0][0] * cols[1][1] - cols[1][0] * cols[0][1]
    if det == 0:
        raise DomainError("degenerate patch corners")
    inv = [[cols[1][1] / det, -cols[1][0] / det], [-cols[0][1] / det, cols[0][0] / det]]
    shift = [-(inv[i][0] * Fraction(origin[0]) + inv[i][1] * Fraction(origin[1])) for i in range(2)]
    return inv, shift, cols


def lift_from_gluing(g: GluingData, src_ring: Ring, tgt_ring: Ring,
                     src_corners: tuple[Point, Point, Point], tgt_corners: tuple[Point, Point, Point],
                     normal_sign: int = 1) -> dict[str, Polynomial]:
    """Global-coordinate lift for a pair of quadrilateral patches.

    Corners are (gamma, other endpoint of the shared edge, the neighbour of
    gamma off the edge) in each patch's own coordinates. The relative frames
    measure distance along the edge from gamma and distance into the patch;
    ``normal_sign=-1`` measures the transversal coordinate of both frames
    outward instead.
    """
    x2 = tgt_ring.gens()
    inv_t, shift_t, _ = _affine_frame(*tgt_corners, along_first=True)
    t = [inv_t[i][0] * x2[0] + inv_t[i][1] * x2[1] + shift_t[i] for i in range(2)]
    t[1] = t[1] * normal_sign
    a = g.a.substitute({"u": t[0]}, tgt_ring)
    b = g.b.substitute({"u": t[0]}, tgt_ring)
    rel = [t[1] * b * normal_sign, t[0] + t[1] * a]  # (inward, along) in the source frame
    _, _, cols_s = _affine_frame(*src_corners, along_first=False)
    origin = [Fraction(c) for c in src_corners[0]]
    names = src_ring.names
    return {names[k]: rel[0] * cols_s[0][k] + rel[1] * cols_s[1][k] + origin[k] for k in range(2)}


def line_through(ring: Ring, p: Point, q: Point) -> Polynomial:
    """Primitive affine form vanishing at two points of the plane."""
    x, y = ring.gens()
    dx, dy = Fraction(q[0]) - Fraction(p[0]), Fraction(q[1]) - Fraction(p[1])
    form = (x - Fraction(p[0])) * dy - (y - Fraction(p[1])) * dx
    return _primitive(form)


def _primitive(p: Polynomial) -> Polynomial:
    if p.is_zero():
        raise DomainError("degenerate facet: zero affine form")
    den = 1
    for c in p.terms.values():
        den = den * c.denominator // math.gcd(den, c.denominator)
    nums = [int(c * den) for c in p.terms.values()]
    g = 0
    for v in nums:
        g = math.gcd(g, v)
    p = p * Fraction(den, g)
    lead = p.leading_term(GREVLEX)[1]
    return -p if lead < 0 else p


@dataclass
class GrDomain:
    """A cell complex with patch data.

    ``facet_ideals[(s, t)]`` generates the ideal of facet t in patch s,
    ``corners[(s, v)]`` gives the coordinates of vertex v in patch s, and
    ``transitions[t]`` is the lift across the interior facet t.
    """

    complex: CellComplex
    r: int
    facet_ideals: dict[tuple[int, int], Polynomial]
    transitions: dict[int, TransitionMap]
    corners: dict[tuple[int, int], Point] = field(default_factory=dict)
    name: str = ""
    _rings: dict = field(default_factory=dict, repr=False, compare=False)
    _gb: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def n(self) -> int:
        return self.complex.n

    def patch_ring(self, s: int) -> Ring:
        key = ("patch", s)
        if key not in self._rings:
            self._rings[key] = Ring(var_names(s, self.n), {s: var_names(s, self.n)})
        return self._rings[key]

    def patches_of(self, face: Face) -> list[int]:
        return self.complex.containing(face, self.n)

    def face_ring(self, face: Face) -> Ring:
        """Tensor product of the patch rings of all top cells containing ``face``."""
        if face not in self._rings:
            self._rings[face] = union_ring(self.patch_ring(s) for s in self.patches_of(face))
        return self._rings[face]

    def edge_generators(self, t: int) -> list[Polynomial]:
        """Generators of the transition ideal of an interior facet."""
        tr = self.transitions[t]
        ring = self.face_ring((self.n - 1, t))
        gens = [ring.var(x) - img.embed(ring) for x, img in sorted(tr.lift.items())]
        gens.append(self.facet_ideals[(tr.source, t)].embed(ring) ** (self.r + 1))
        gens.append(self.facet_ideals[(tr.target, t)].embed(ring) ** (self.r + 1))
        return gens

    def face_generators(self, face: Face) -> list[Polynomial]:
        """Generators of the ideal of an interior face of dimension below n."""
        k, i = face
        if k == self.n:
            return []
        ring = self.face_ring(face)
        if k == self.n - 1:
            return self.edge_generators(i)
        gens = []
        for t in self.complex.containing(face, self.n - 1):
            if t in self.transitions:
                gens.extend(g.embed(ring) for g in self.edge_generators(t))
        return gens

    def groebner(self, face: Face, order=GREVLEX) -> GroebnerBasis:
        key = (face, order)
        if key not in self._gb:
            self._gb[key] = buchberger(self.face_generators(face), order, ring=self.face_ring(face))
        return self._gb[key]

    def point_generators(self, s: int, face: Face) -> list[Polynomial]:
        """Generators of the ideal of ``face`` inside patch s."""
        ring = self.patch_ring(s)
        k, i = face
        if k == 0 and (s, i) in self.corners:
            return [x - c for x, c in zip(ring.gens(), self.corners[(s, i)])]
        if k == self.n - 1:
            return [self.facet_ideals[(s, i)]]
        facets = [t for t in self.complex.sub_faces((self.n, s), self.n - 1) if face in self.complex.closure((self.n - 1, t))]
        return [self.facet_ideals[(s, t)] for t in facets if (s, t) in self.facet_ideals]

    def check(self) -> None:
        check_compatibility(self)


def _det(m: list[list[Polynomial]], ring: Ring) -> Polynomial:
    n = len(m)
    total = ring.zero()
    for perm in permutations(range(n)):
        sign = 1
        for i in range(n):
            for j in range(i + 1, n):
                if perm[i] > perm[j]:
                    sign = -sign
        term = ring.constant(sign)
        for i in range(n):
            term = term * m[i][perm[i]]
        total = total + term
    return total


def is_irreducible_low_degree(p: Polynomial) -> bool | None:
    """Irreducibility over Q for degree <= 2; None when undecided (higher degree)."""
    d = p.total_degree()
    if d <= 0:
        return False
    if d == 1:
        return True
    if d > 2:
        return None
    names = sorted(p.variables(), key=p.ring.index.__getitem__)
    m = len(names) + 1  # homogenizing coordinate last
    idx = [p.ring.index[x] for x in names]
    mat = [[Fraction(0)] * m for _ in range(m)]
    for e, c in p.terms.items():
        pos = [j for j, i in enumerate(idx) for _ in range(e[i])]
        pos += [m - 1] * (2 - len(pos))
        a, b = pos
        if a == b:
            mat[a][a] += c
        else:
            mat[a][b] += c / 2
            mat[b][a] += c / 2
    rk = rank(RationalMatrix(mat, m))
    if rk >= 3:
        return True
    if rk == 1:
        return False
    for i in range(m):
        for j in range(i + 1, m):
            a, b, c = mat[i][i], mat[i][j], mat[j][j]
            if a * c - b * b != 0:
                disc = b * b - a * c
                return not _is_square(disc)
    return True


def _is_square(q: Fraction) -> bool:
    if q < 0:
        return False
    return math.isqrt(q.numerator) ** 2 == q.numerator and math.isqrt(q.denominator) ** 2 == q.denominator


def _quotient_dimension(gb: GroebnerBasis) -> int | None:
    """Number of standard monomials, or None if the quotient is infinite."""
    ring = gb.ring
    lms = gb.leading_monomials
    bounds = []
    for i in range(ring.nvars):
        pure = [m[i] for m in lms if m[i] and sum(m) == m[i]]
        if not pure:
            return None
        bounds.append(min(pure))
    count = 0
    stack = [()]
    while stack:
        prefix = stack.pop()
        if len(prefix) == ring.nvars:
            count += 1
            continue
        i = len(prefix)
        for a in range(bounds[i]):
            cand = prefix + (a,)
            # prune: a partial exponent already divisible by some leading monomial stays divisible
            full = cand + (0,) * (ring.nvars - len(cand))
            if gb.is_standard(full):
                stack.append(cand)
    return count


def check_compatibility(domain: GrDomain) -> None:
    """Raise ``IncompatibleDomain`` naming the first failing condition."""
    cx = domain.complex
    n = domain.n
    try:
        cx.validate()
    except ComplexError as exc:
        raise IncompatibleDomain(f"C1: {exc}") from exc

    for (s, t), gen in sorted(domain.facet_ideals.items()):
        if gen.ring != domain.patch_ring(s):
            raise IncompatibleDomain(f"facet ideal of {t} in patch {s} is not in that patch's ring")
        verdict = is_irreducible_low_degree(gen)
        if verdict is False:
            raise IncompatibleDomain(f"facet ideal generator {gen} of facet {t} in patch {s} is not irreducible")
        if verdict is None:
            warnings.warn(f"irreducibility of {gen} (degree > 2) was not checked", stacklevel=2)

    interior = cx.interior_faces(n - 1)
    for t in interior:
        tr = domain.transitions.get(t)
        if tr is None:
            raise IncompatibleDomain(f"C2: interior facet {t} has no transition map")
        if {tr.source, tr.target} != {c[1] for c in cx.cofaces((n - 1, t))}:
            raise IncompatibleDomain(f"C2: transition of facet {t} does not join its two patches")
        _check_transition(domain, tr)

    if n == 2:
        for v in cx.faces(0):
            _check_cycle(domain, v)


def _check_transition(domain: GrDomain, tr: TransitionMap) -> None:
    n = domain.n
    src, tgt = domain.patch_ring(tr.source), domain.patch_ring(tr.target)
    if set(tr.lift) != set(src.names):
        raise IncompatibleDomain(f"C2: lift of facet {tr.facet} must give images of {src.names}")
    for img in tr.lift.values():
        if img.ring != tgt:
            raise IncompatibleDomain(f"C2: lift of facet {tr.facet} is not in the target ring")
    l1 = domain.facet_ideals[(tr.source, tr.facet)]
    l2 = domain.facet_ideals[(tr.target, tr.facet)]
    target_facet = buchberger([l2], GREVLEX)
    if not target_facet.contains(l1.substitute(tr.lift, tgt)):
        raise IncompatibleDomain(f"C2: lift of facet {tr.facet} does not map the facet onto the facet")
    if domain.r >= 1:
        jac = [[tr.lift[x].derivative(y) for y in tgt.names] for x in src.names]
        if target_facet.contains(_det(jac, tgt)):
            raise IncompatibleDomain(f"C2: lift of facet {tr.facet} is not invertible along the facet")
    for v in domain.complex.sub_faces((n - 1, tr.facet), n - 2) if n >= 2 else []:
        face = (n - 2, v)
        gens_t = domain.point_generators(tr.target, face)
        gens_s = domain.point_generators(tr.source, face)
        if not gens_t or not gens_s:
            continue
        gb = buchberger(gens_t, GREVLEX)
        for g in gens_s:
            if not gb.contains(g.substitute(tr.lift, tgt)):
                raise IncompatibleDomain(f"C2: lift of facet {tr.facet} does not match its endpoint {v}")


def _check_cycle(domain: GrDomain, v: int) -> None:
    face = (0, v)
    patches = domain.patches_of(face)
    if len(patches) < 2:
        return
    ring = domain.face_ring(face)
    gens = []
    for t in domain.complex.containing(face, 1):
        tr = domain.transitions.get(t)
        if tr is None:
            continue
        gens.extend(ring.var(x) - img.embed(ring) for x, img in tr.lift.items())
    r1 = domain.r + 1
    for s in patches:
        pts = domain.point_generators(s, face)
        for combo in combinations_with_replacement(pts, r1):
            g = ring.one()
            for p in combo:
                g = g * p.embed(ring)
            gens.append(g)
    gb = buchberger(gens, GREVLEX, ring=ring)
    dim = _quotient_dimension(gb)
    expected = math.comb(domain.r + 2, 2)
    if dim != expected:
        raise IncompatibleDomain(
            f"C3: transition maps around vertex {v} do not compose to the identity "
            f"(local quotient has dimension {dim}, expected {expected})")


def reparametrize(domain: GrDomain, s: int, new_in_old: Mapping[str, Polynomial],
                  old_in_new: Mapping[str, Polynomial]) -> GrDomain:
    """Apply an invertible polynomial change of coordinates to patch s.

    ``new_in_old`` gives new coordinates as polynomials in the old ones and
    ``old_in_new`` the inverse; both use the patch's own variable names.
    """
    ring = domain.patch_ring(s)
    ideals = dict(domain.facet_ideals)
    for (p, t), gen in domain.facet_ideals.items():
        if p == s:
            ideals[(p, t)] = gen.substitute(old_in_new, ring)
    transitions = {}
    for t, tr in domain.transitions.items():
        lift = dict(tr.lift)
        if tr.source == s:
            lift = {x: new_in_old[x].substitute(tr.lift, domain.patch_ring(tr.target)) for x in ring.names}
        if tr.target == s:
            lift = {x: img.substitute(old_in_new, ring) for x, img in lift.items()}
        transitions[t] = TransitionMap(tr.facet, tr.source, tr.target, lift, tr.gluing, tr.gamma)
    corners = dict(domain.corners)
    for (p, v), pt in domain.corners.items():
        if p == s:
            vals = dict(zip(ring.names, pt))
            corners[(p, v)] = tuple(new_in_old[x].evaluate(vals) for x in ring.names)
    return GrDomain(domain.complex, domain.r, ideals, transitions, corners, domain.name)
