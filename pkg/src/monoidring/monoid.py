"""Generator-presented affine monoids and their decorated-cone models.

An affine monoid is given by finitely many nonzero integer generators whose
cone is pointed.  The decorated-cone model attaches to every face F of the
cone the group generated by the monoid elements on F; this extensional form
represents the seminormalization of the monoid exactly and is the input for
all cohomological analyses.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from .errors import DegenerateFace, NotPointed, NotPositive, ZeroGenerator
from .exactlin import (
    Lattice,
    Mat,
    Vec,
    dot,
    is_zero_vec,
    lattice_from_rows,
    lattice_intersect,
    mat,
    quotient_structure,
    saturation,
    solve_rational,
    vadd,
    vsub,
)
from .polyhedral import (
    Face,
    FaceLattice,
    RationalCone,
    dual_description,
    face_lattice,
    grading_form,
    minimal_face,
)


@dataclass(eq=False)
class AffineMonoid:
    """A positive affine monoid in Z^m with cached polyhedral data."""

    ambient_dim: int
    generators: Mat
    _member_cache: dict[Vec, bool] = field(default_factory=dict, repr=False)

    @cached_property
    def cone(self) -> RationalCone:
        return dual_description(self.generators, self.ambient_dim)

    @cached_property
    def face_lattice(self) -> FaceLattice:
        return face_lattice(self.cone)

    @cached_property
    def group(self) -> Lattice:
        return lattice_from_rows(self.ambient_dim, self.generators)

    @cached_property
    def grading(self) -> Vec:
        return grading_form(self.cone)

    @property
    def rank(self) -> int:
        return self.group.rank

    def deg(self, x) -> int:
        return dot(self.grading, x)

    @cached_property
    def _gens_by_degree(self) -> tuple[tuple[Vec, int], ...]:
        pairs = [(g, self.deg(g)) for g in self.generators]
        pairs.sort(key=lambda t: (-t[1], t[0]))
        return tuple(pairs)


def monoid_new(generators, ambient_dim: int | None = None) -> AffineMonoid:
    gens = mat(generators)
    if ambient_dim is None:
        if not gens:
            raise ValueError("ambient_dim required for an empty generator list")
        ambient_dim = len(gens[0])
    for g in gens:
        if is_zero_vec(g):
            raise ZeroGenerator("generators must be nonzero")
        if len(g) != ambient_dim:
            raise ValueError("generator length does not match ambient dimension")
    monoid = AffineMonoid(ambient_dim, gens)
    try:
        cone = monoid.cone
    except NotPointed as exc:
        raise NotPositive(str(exc)) from exc
    if cone.dim != monoid.group.rank:
        raise AssertionError("cone span and group span must agree")
    for g in gens:
        if monoid.deg(g) <= 0:
            raise NotPositive("grading is not positive on a generator")
    return monoid


def member(monoid: AffineMonoid, x) -> bool:
    """Exact membership: x is a nonnegative integer combination of generators.

    Depth-first search over residuals ordered by decreasing generator degree;
    results are memoized on the monoid, so repeated queries share work.  The
    strictly positive grading bounds the recursion depth.
    """
    x = tuple(x)
    if not monoid.cone.contains(x) or not monoid.group.member(x):
        return False
    cache = monoid._member_cache
    pairs = monoid._gens_by_degree
    forms = monoid.cone.support_forms

    def search(y: Vec) -> bool:
        if is_zero_vec(y):
            return True
        hit = cache.get(y)
        if hit is not None:
            return hit
        dy = monoid.deg(y)
        ok = False
        for g, dg in pairs:
            if dg > dy:
                continue
            z = vsub(y, g)
            if all(dot(a, z) >= 0 for a in forms) and search(z):
                ok = True
                break
        cache[y] = ok
        return ok

    return search(x)


def face_submonoid_generators(monoid: AffineMonoid, f: Face) -> Mat:
    """The generators lying on the face; they present the face submonoid,
    because a sum of monoid generators lies on a face only if each summand does."""
    forms = monoid.cone.support_forms
    return mat([g for g in monoid.generators if all(dot(forms[i], g) == 0 for i in f.zero_set)])


def face_group(monoid: AffineMonoid, f: Face) -> Lattice:
    """gp of the face submonoid."""
    return lattice_from_rows(monoid.ambient_dim, face_submonoid_generators(monoid, f))


def _primitive_multiple_in(lat: Lattice, ray: Vec) -> Vec:
    """Smallest positive multiple of a primitive ray lying in the lattice."""
    k = 1
    while True:
        candidate = tuple(k * r for r in ray)
        if lat.member(candidate):
            return candidate
        k += 1
        assert k <= 10**6, "ray is not in the rational span of the lattice"


def hilbert_basis(cone: RationalCone, lat: Lattice) -> Mat:
    """Unique minimal generating set of the normal monoid cone ∩ lat.

    Requires lat full rank in the span of the cone.  Candidates are the
    lattice points of the bounding box of the zonotope spanned by the
    primitive lattice multiples of the extreme rays; every irreducible
    element lies in that zonotope.  Kept points are re-verified irreducible
    against the previously kept ones, in increasing degree.
    """
    if saturation(lat) != cone.span_lattice:
        raise ValueError("lattice must be full rank in the span of the cone")
    if cone.dim == 0:
        return ()
    deg_form = grading_form(cone)
    ray_mults = [_primitive_multiple_in(lat, r) for r in cone.extreme_rays]
    rho = [lat.coords(r) for r in ray_mults]
    k = lat.rank
    lo = [sum(min(0, rv[i]) for rv in rho) for i in range(k)]
    hi = [sum(max(0, rv[i]) for rv in rho) for i in range(k)]
    b_stop = sum(dot(deg_form, r) for r in ray_mults)

    candidates = []
    def walk(i, coords):
        if i == k:
            x = lat.from_coords(coords)
            if is_zero_vec(x):
                return
            if all(dot(a, x) >= 0 for a in cone.support_forms):
                d = dot(deg_form, x)
                if 0 < d <= b_stop:
                    candidates.append((d, x))
            return
        for c in range(lo[i], hi[i] + 1):
            walk(i + 1, coords + [c])

    walk(0, [])
    candidates.sort(key=lambda t: (t[0], t[1]))

    kept: list[Vec] = []
    for d, x in candidates:
        reducible = False
        for h in kept:
            y = vsub(x, h)
            if is_zero_vec(y):
                reducible = True  # duplicate candidate
                break
            if all(dot(a, y) >= 0 for a in cone.support_forms) and lat.member(y):
                reducible = True
                break
        if not reducible:
            kept.append(x)
    return mat(sorted(kept))


def is_normal(monoid: AffineMonoid) -> tuple[bool, Vec | None]:
    """Exact normality test: every Hilbert basis element of the normalization
    must already be a monoid member.  Returns a witness on failure."""
    hb = hilbert_basis(monoid.cone, monoid.group)
    for h in hb:
        if not member(monoid, h):
            return False, h
    return True, None


def sn_member(monoid: AffineMonoid, x) -> bool:
    """Membership in the seminormalization: x in the cone and in the group
    of the face submonoid of its minimal face."""
    x = tuple(x)
    if not monoid.cone.contains(x):
        return False
    f = minimal_face(monoid.face_lattice, x)
    return face_group(monoid, f).member(x)


@dataclass(frozen=True)
class SeminormalityVerdict:
    """Bounded seminormality verdict.

    ``witness`` is None when no failure was found up to ``bound``; otherwise
    it is a vector in the seminormalization but not in the monoid.  The
    verdict never claims unconditional seminormality: no effective degree
    bound is available, so a clean run only certifies SeminormalUpTo(bound).
    """

    bound: int
    witness: Vec | None

    @property
    def seminormal_up_to_bound(self) -> bool:
        return self.witness is None


def _box_points_of_degree_slice(monoid: AffineMonoid, bound: int):
    """All x in cn(M) ∩ gp(M) with deg(x) <= bound, sorted by (deg, coords).

    The vertices of the degree-``bound`` slice are (bound/deg r) · r over the
    extreme rays, so group coordinates of candidates live in the integer box
    spanned by those rational vertices.
    """
    group = monoid.group
    if group.rank == 0:
        return [(0, (0,) * monoid.ambient_dim)]
    vertices = []
    for r in monoid.cone.extreme_rays:
        coords = solve_rational(group.basis, r)
        assert coords is not None
        scale = Fraction(bound, monoid.deg(r))
        vertices.append([scale * c for c in coords])
    k = group.rank
    lo = [min(0, math.floor(min(v[i] for v in vertices))) for i in range(k)]
    hi = [max(0, math.ceil(max(v[i] for v in vertices))) for i in range(k)]
    forms = monoid.cone.support_forms
    out = []

    def walk(i, coords):
        if i == k:
            x = group.from_coords(coords)
            if all(dot(a, x) >= 0 for a in forms):
                d = monoid.deg(x)
                if d <= bound:
                    out.append((d, x))
            return
        for c in range(lo[i], hi[i] + 1):
            walk(i + 1, coords + [c])

    walk(0, [])
    out.sort(key=lambda t: (t[0], t[1]))
    return out


def default_seminormality_bound(monoid: AffineMonoid) -> int:
    return (monoid.rank + 1) * max((monoid.deg(g) for g in monoid.generators), default=0)


def is_seminormal_up_to(monoid: AffineMonoid, bound: int) -> SeminormalityVerdict:
    """Scan all cone-and-group points of degree <= bound for a point of the
    seminormalization missing from the monoid; the first one (by degree,
    then lexicographically) is returned as a certificate."""
    if bound < 0:
        raise ValueError("bound must be nonnegative")
    for d, x in _box_points_of_degree_slice(monoid, bound):
        if d == 0:
            continue
        if sn_member(monoid, x) and not member(monoid, x):
            return SeminormalityVerdict(bound, x)
    return SeminormalityVerdict(bound, None)


@dataclass(frozen=True, eq=False)
class DecoratedCone:
    """A pointed cone with one full-rank lattice per face.

    This is the extensional form of a seminormal monoid: the represented
    monoid is the union over faces F of (lambda_F ∩ relint F).  The lattice
    of the full cone is the reference group.
    """

    fl: FaceLattice
    lambdas: tuple[Lattice, ...]

    @property
    def cone(self) -> RationalCone:
        return self.fl.cone

    @property
    def reference(self) -> Lattice:
        return self.lambdas[self.fl.top.index]

    @property
    def rank(self) -> int:
        return self.fl.top.dim

    def lattice_of(self, f: Face) -> Lattice:
        return self.lambdas[f.index]


def decorated_cone(fl: FaceLattice, lambdas) -> DecoratedCone:
    """Validate and freeze a face-lattice decoration."""
    lambdas = tuple(lambdas)
    assert len(lambdas) == len(fl.faces)
    for f in fl.faces:
        lam = lambdas[f.index]
        if lam.rank != f.dim:
            raise DegenerateFace(f"face {sorted(f.ray_set)}: lattice rank {lam.rank} != dim {f.dim}")
        for row in lam.basis:
            if not f.span_lattice.member(row):
                raise DegenerateFace(f"face {sorted(f.ray_set)}: lattice leaves the face span")
    for f in fl.faces:
        for up in fl.up_covers[f.index]:
            for row in lambdas[f.index].basis:
                if not lambdas[up].member(row):
                    raise DegenerateFace("face lattices are not monotone along covers")
    return DecoratedCone(fl, lambdas)


def to_model(monoid: AffineMonoid) -> DecoratedCone:
    """The decorated-cone model of the seminormalization of the monoid."""
    fl = monoid.face_lattice
    lambdas = [face_group(monoid, f) for f in fl.faces]
    return decorated_cone(fl, lambdas)


def model_member(model: DecoratedCone, x) -> bool:
    x = tuple(x)
    if not model.cone.contains(x):
        return False
    f = minimal_face(model.fl, x)
    return model.lattice_of(f).member(x)


def model_point_in_relint(model: DecoratedCone, f: Face) -> Vec:
    """A point of lambda_f in the relative interior of f (zero for the apex)."""
    fl = model.fl
    rays = fl.cone.extreme_rays
    total = (0,) * fl.cone.ambient_dim
    for i in f.ray_set:
        total = vadd(total, rays[i])
    if is_zero_vec(total):
        return total
    q = quotient_structure(f.span_lattice, model.lattice_of(f))
    exponent = q.invariant_factors[-1] if q.invariant_factors else 1
    return tuple(exponent * t for t in total)


def restrict_model(model: DecoratedCone, f: Face) -> DecoratedCone:
    """The face-restricted model: the cone of f decorated with the same
    lattices on the faces below f."""
    fl = model.fl
    rays = [fl.cone.extreme_rays[i] for i in sorted(f.ray_set)]
    sub_cone = dual_description(rays, fl.cone.ambient_dim)
    sub_fl = face_lattice(sub_cone)
    by_rays = {
        frozenset(fl.cone.extreme_rays[i] for i in g.ray_set): model.lattice_of(g)
        for g in fl.faces
        if g.ray_set <= f.ray_set
    }
    lambdas = []
    for g in sub_fl.faces:
        key = frozenset(sub_cone.extreme_rays[i] for i in g.ray_set)
        lambdas.append(by_rays[key])
    return decorated_cone(sub_fl, lambdas)


def saturate_model(model: DecoratedCone) -> DecoratedCone:
    """The normalization: every face lattice replaced by the reference group
    restricted to the face span."""
    fl = model.fl
    ref = model.reference
    lambdas = [lattice_intersect(f.span_lattice, ref) for f in fl.faces]
    return decorated_cone(fl, lambdas)


def model_is_normal(model: DecoratedCone) -> bool:
    """True when every face lattice is saturated in the reference group."""
    ref = model.reference
    return all(
        model.lattice_of(f) == lattice_intersect(f.span_lattice, ref) for f in model.fl.faces
    )
