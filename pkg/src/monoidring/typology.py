"""Degree-free depth analysis: the finitely many filter types of a model.

Every admissible degree vector a determines the pair (G, S) of its minimal
face and its filter; there are finitely many such fibers.  For a base face
G the membership pattern of a point depends only on its class in the finite
quotient A*/D, where A* collects the reference-group points of the span of
G and D is the intersection of all face lattices above G inside A*.  The
realizable fibers, one witness per fiber, and the cohomology profile of
every realizable filter together determine the depth over any field.
"""

from dataclasses import dataclass
from itertools import product

from .cohomology import (
    CohomologyProfile,
    cochain_complex,
    is_up_closed,
    profile_of_complex,
)
from .errors import BadFilter, TooLarge
from .exactlin import (
    Lattice,
    Vec,
    dot,
    lattice_intersect,
    quotient_decomposition,
    quotient_structure,
    vadd,
    vec_mat,
)
from .monoid import DecoratedCone
from .polyhedral import Face


@dataclass(frozen=True)
class CohomologyType:
    """One fiber of the degree-to-filter map.

    base_face is the minimal face of the degrees in the fiber, filter_ids
    the common filter.  Unrealizable combinations carry no witness and, by
    default, no profile.
    """

    base_face: int
    filter_ids: frozenset[int]
    realizable: bool
    witness: Vec | None
    profile: CohomologyProfile | None


def _interval_lattices(model: DecoratedCone, g: Face):
    """A* and the lattices B_F = A* ∩ lambda_F for every face F above g."""
    above = model.fl.faces_above(g)
    a_star = lattice_intersect(g.span_lattice, model.reference)
    b_lat = {f.index: lattice_intersect(a_star, model.lattice_of(f)) for f in above}
    return above, a_star, b_lat


def _relint_adjust(model: DecoratedCone, g: Face, x: Vec) -> Vec:
    """Move x into relint(g) by adding a multiple of a face-lattice interior
    point; the class modulo every face lattice above g is unchanged."""
    fl = model.fl
    rays = fl.cone.extreme_rays
    total = (0,) * fl.cone.ambient_dim
    for i in g.ray_set:
        total = vadd(total, rays[i])
    q = quotient_structure(g.span_lattice, model.lattice_of(g))
    exponent = q.invariant_factors[-1] if q.invariant_factors else 1
    step = tuple(exponent * t for t in total)
    outside = [i for i in range(len(fl.cone.support_forms)) if i not in g.zero_set]
    forms = fl.cone.support_forms
    y = x
    while any(dot(forms[i], y) <= 0 for i in outside):
        y = vadd(y, step)
    return y


def fiber_types(
    model: DecoratedCone, primes=(), max_classes_per_face: int = 100000
) -> list[CohomologyType]:
    """All realizable fibers, with witnesses and profiles.

    For each base face the finite quotient A*/D is enumerated through an
    aligned basis; every class has a constant membership pattern, and a
    relative-interior representative of the class is a witness for it.
    """
    out: list[CohomologyType] = []
    fl = model.fl
    for g in fl.faces:
        above, a_star, b_lat = _interval_lattices(model, g)
        d_lat = a_star
        for f in above:
            d_lat = lattice_intersect(d_lat, b_lat[f.index])
        factors, basis = quotient_decomposition(a_star, d_lat)
        n_classes = 1
        for f in factors:
            n_classes *= f
        if n_classes > max_classes_per_face:
            raise TooLarge(
                f"face {sorted(g.ray_set)}: {n_classes} classes exceed the cap"
            )
        seen: dict[frozenset[int], Vec] = {}
        for coords in product(*(range(f) for f in factors)):
            x = vec_mat(coords, basis) if basis else (0,) * fl.cone.ambient_dim
            pattern = frozenset(f.index for f in above if b_lat[f.index].member(x))
            if pattern not in seen:
                seen[pattern] = x
        for pattern, x in sorted(seen.items(), key=lambda kv: sorted(kv[0])):
            assert fl.top.index in pattern
            assert is_up_closed(fl, pattern)
            witness = _relint_adjust(model, g, x)
            complex_ = cochain_complex(fl, pattern)
            profile = profile_of_complex(complex_, primes)
            out.append(CohomologyType(g.index, pattern, True, witness, profile))
    return out


def realizable(
    model: DecoratedCone, g: Face, filter_ids: frozenset[int]
) -> tuple[bool, Vec | None]:
    """Decide whether some degree in relint(g) has exactly this filter.

    The filter must be an up-closed subset of the interval above g
    containing the full cone.  The decision reduces to covering of the
    finite quotient A_G/C' by the excluded-face subgroups.
    """
    fl = model.fl
    above = fl.faces_above(g)
    above_ids = {f.index for f in above}
    if not filter_ids <= above_ids or fl.top.index not in filter_ids:
        raise BadFilter("filter must live above the base face and contain the cone")
    if not is_up_closed(fl, filter_ids):
        raise BadFilter("filter is not up-closed")
    a_g = g.span_lattice
    for i in filter_ids:
        a_g = lattice_intersect(a_g, model.lambdas[i])
    excluded = [f.index for f in above if f.index not in filter_ids]
    b_lat = {i: lattice_intersect(a_g, model.lambdas[i]) for i in excluded}
    c_prime = a_g
    for i in excluded:
        c_prime = lattice_intersect(c_prime, b_lat[i])
    factors, basis = quotient_decomposition(a_g, c_prime)
    for coords in product(*(range(f) for f in factors)):
        x = vec_mat(coords, basis) if basis else (0,) * fl.cone.ambient_dim
        if not any(b_lat[i].member(x) for i in excluded):
            return True, _relint_adjust(model, g, x)
    return False, None


def _up_sets_of_interval(fl, g: Face, cap: int) -> list[frozenset[int]]:
    """All up-closed subsets of the interval above g that contain the top.

    DFS over the interval in a top-down linear extension; a face may be
    included only when all of its covers are in.
    """
    above = sorted(fl.faces_above(g), key=lambda f: (-f.dim, f.index))
    top = fl.top.index
    interval_ids = {f.index for f in above}
    out: list[frozenset[int]] = []

    def walk(pos: int, current: set[int]):
        if len(out) > cap:
            raise TooLarge(
                f"face {sorted(g.ray_set)}: more than {cap} filters; raise the cap"
            )
        if pos == len(above):
            out.append(frozenset(current))
            return
        f = above[pos]
        walk(pos + 1, current)
        if f.index == top or all(
            u not in interval_ids or u in current for u in fl.up_covers[f.index]
        ):
            current.add(f.index)
            walk(pos + 1, current)
            current.remove(f.index)

    walk(0, set())
    return [s for s in out if top in s]


def enumerate_types(
    model: DecoratedCone,
    primes=(),
    max_filters_per_face: int = 5000,
    profiles_for_all: bool = False,
) -> list[CohomologyType]:
    """Every (base face, up-closed filter) combination, flagged realizable or
    not.  Realizability and witnesses come from the fiber enumeration, so no
    per-filter group computation is repeated; profiles of unrealizable
    combinations are only computed on request."""
    fibers = fiber_types(model, primes)
    fiber_map = {(t.base_face, t.filter_ids): t for t in fibers}
    fl = model.fl
    out: list[CohomologyType] = []
    for g in fl.faces:
        for s in _up_sets_of_interval(fl, g, max_filters_per_face):
            hit = fiber_map.get((g.index, s))
            if hit is not None:
                out.append(hit)
            else:
                profile = None
                if profiles_for_all:
                    profile = profile_of_complex(cochain_complex(fl, s), primes)
                out.append(CohomologyType(g.index, s, False, None, profile))
    out.sort(key=lambda t: (fl.faces[t.base_face].dim, t.base_face, sorted(t.filter_ids)))
    return out


@dataclass(frozen=True, eq=False)
class DepthReport:
    """Depth and Cohen-Macaulayness over Q and the requested primes."""

    rank: int
    depth_q: int
    depth_by_prime: dict[int, int]
    witnesses: dict[str, dict[int, Vec]]
    torsion_primes: frozenset[int]

    @property
    def cm_q(self) -> bool:
        return self.depth_q == self.rank

    @property
    def cm_fail_primes(self) -> frozenset[int]:
        return frozenset(p for p, d in self.depth_by_prime.items() if d < self.rank)

    def depth(self, p: int | None) -> int:
        return self.depth_q if p is None else self.depth_by_prime[p]

    def cm(self, p: int | None) -> bool:
        return self.depth(p) == self.rank

    @property
    def buchsbaum_excluded(self) -> bool:
        """A nonvanishing intermediate cohomology is infinite-dimensional, so
        a non-Cohen-Macaulay model can not be Buchsbaum either."""
        return self.depth_q < self.rank or bool(self.cm_fail_primes)


def depth_report(model: DecoratedCone, primes=(2, 3)) -> DepthReport:
    """Exact depth per field from the realizable fibers.

    The fiber at the full cone with the one-element filter always realizes
    nonzero top cohomology, so the minimum is well defined and the depth
    equals the rank exactly when all lower cohomology vanishes.
    """
    d = model.rank
    fibers = fiber_types(model, primes)
    tors = frozenset().union(*(t.profile.torsion_primes for t in fibers)) if fibers else frozenset()
    all_primes = sorted(set(primes) | tors)
    if tors - set(primes):
        fibers = fiber_types(model, tuple(all_primes))

    def field_depth(p: int | None) -> tuple[int, dict[int, Vec]]:
        best = d
        witnesses: dict[int, Vec] = {}
        for t in fibers:
            dims = t.profile.dims(p)
            for i, dim in enumerate(dims):
                if dim > 0 and i not in witnesses:
                    witnesses[i] = t.witness
                if dim > 0 and i < best:
                    best = i
        return best, witnesses

    depth_q, wit_q = field_depth(None)
    depth_by_prime = {}
    witnesses = {"q": wit_q}
    for p in all_primes:
        dp, wp = field_depth(p)
        depth_by_prime[p] = dp
        witnesses[str(p)] = wp
    return DepthReport(d, depth_q, depth_by_prime, witnesses, tors)
