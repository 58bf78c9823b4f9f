"""Named ring-theoretic criteria decided on the lattice side.

Everything here is a finite lattice computation: the two-out-of-codimension-
one test for Serre's condition (S2), the fast Cohen-Macaulay paths through
normal facets or simple cones, the depth bound chain, the bad primes for
Frobenius splitting, and the Gorenstein test for Cohen-Macaulay models.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import HypothesisUnverified, NotCM
from .exactlin import (
    Vec,
    dot,
    lattice_intersect,
    prime_factors,
    quotient_structure,
)
from .monoid import (
    AffineMonoid,
    DecoratedCone,
    face_group,
    member,
    restrict_model,
)
from .polyhedral import Face, is_simple_face, minimal_face
from .typology import DepthReport, depth_report


def s2_lattice_test(model: DecoratedCone) -> tuple[bool, int | None]:
    """Exact (S2) test for seminormal models: every proper face lattice must
    be cut out by the facet lattices above it.  Returns a failing face index
    when the test fails."""
    fl = model.fl
    for f in fl.faces[:-1]:
        expected = f.span_lattice
        for i in f.zero_set:
            facet = fl.by_zero_set(frozenset({i}))
            assert facet is not None
            expected = lattice_intersect(expected, model.lattice_of(facet))
        if expected != model.lattice_of(f):
            return False, f.index
    return True, None


def _verify_interior_hypothesis(monoid: AffineMonoid, bound: int) -> None:
    """Check gp ∩ relint cn ⊆ M on all points of degree <= bound."""
    from .monoid import _box_points_of_degree_slice

    forms = monoid.cone.support_forms
    for d, x in _box_points_of_degree_slice(monoid, bound):
        if d == 0:
            continue
        if all(dot(a, x) > 0 for a in forms) and not member(monoid, x):
            raise HypothesisUnverified(
                f"interior point {x} of degree {d} is outside the monoid"
            )


def m_prime_member(monoid: AffineMonoid, x, hypothesis_bound: int | None = None) -> bool:
    """Membership in the facet-localization intersection M'.

    Valid under the hypothesis that all interior group points belong to the
    monoid; the hypothesis is verified up to hypothesis_bound (default: the
    seminormality default bound) and a violation raises HypothesisUnverified.
    """
    from .monoid import default_seminormality_bound

    bound = hypothesis_bound if hypothesis_bound is not None else default_seminormality_bound(monoid)
    cache_key = ("interior_hypothesis", bound)
    if not monoid.__dict__.get(cache_key):
        _verify_interior_hypothesis(monoid, bound)
        monoid.__dict__[cache_key] = True
    x = tuple(x)
    if not monoid.group.member(x) or not monoid.cone.contains(x):
        return False
    f = minimal_face(monoid.face_lattice, x)
    fl = monoid.face_lattice
    for i in f.zero_set:
        facet = fl.by_zero_set(frozenset({i}))
        if not face_group(monoid, facet).member(x):
            return False
    return True


@dataclass(frozen=True)
class S2Verdict:
    """Bounded (S2) verdict; the witness is a point of M' outside M."""

    bound: int
    witness: Vec | None

    @property
    def s2_up_to_bound(self) -> bool:
        return self.witness is None


def s2_up_to(monoid: AffineMonoid, bound: int, hypothesis_bound: int | None = None) -> S2Verdict:
    """Compare the monoid with M' on all cone-and-group points up to degree
    bound; the first discrepancy certifies the failure of (S2)."""
    from .monoid import _box_points_of_degree_slice

    for d, x in _box_points_of_degree_slice(monoid, bound):
        if d == 0:
            continue
        in_m = member(monoid, x)
        in_mp = m_prime_member(monoid, x, hypothesis_bound or bound)
        assert not (in_m and not in_mp), "the monoid always sits inside M'"
        if in_mp and not in_m:
            return S2Verdict(bound, x)
    return S2Verdict(bound, None)


def model_face_is_normal(model: DecoratedCone, f: Face) -> bool:
    """Whether the face-restricted model is normal: every subface lattice is
    the face lattice cut to the subface span."""
    fl = model.fl
    lam_f = model.lattice_of(f)
    for g in fl.faces:
        if g.ray_set <= f.ray_set:
            if model.lattice_of(g) != lattice_intersect(lam_f, g.span_lattice):
                return False
    return True


def normal_facets_cm(model: DecoratedCone) -> bool | None:
    """Cohen-Macaulay for every field when all facet submonoids are normal;
    no verdict otherwise."""
    fl = model.fl
    for i in fl.facet_indices():
        if not model_face_is_normal(model, fl.faces[i]):
            return None
    return True


def simple_cone_cm(model: DecoratedCone) -> tuple[bool | None, dict[int, bool]]:
    """Cohen-Macaulay when the cone is simple (all edges simple) and the
    lattice (S2) test passes.  Also reports, per proper face, whether a
    simple face excludes obstructions there."""
    fl = model.fl
    simple_flags = {f.index: is_simple_face(fl, f) for f in fl.faces[:-1]}
    edges_simple = all(simple_flags[f.index] for f in fl.faces_of_dim(1))
    s2_ok, _ = s2_lattice_test(model)
    verdict = True if (edges_simple and s2_ok) else None
    return verdict, simple_flags


def n_value(model: DecoratedCone) -> int:
    """Largest i such that every face of dimension <= i is normal (<= rank)."""
    fl = model.fl
    worst = model.rank
    for f in fl.faces:
        if not model_face_is_normal(model, f):
            worst = min(worst, f.dim - 1)
    return worst


@dataclass(frozen=True)
class DepthBounds:
    c_k: int
    n: int
    depth: int
    chain_holds: bool


def depth_bounds_multi(model: DecoratedCone, primes=(2, 3)) -> dict[int | None, DepthBounds]:
    """The chain depth >= c_K >= min(n + 1, rank) over Q and each prime,
    sharing the per-face depth reports across the fields."""
    n = n_value(model)
    fl = model.fl
    reports = {
        f.index: depth_report(restrict_model(model, f), primes=primes) for f in fl.faces
    }
    out = {}
    for p in (None, *primes):
        c_k = model.rank
        for f in fl.faces:
            if f.dim - 1 < c_k and not reports[f.index].cm(p):
                c_k = f.dim - 1
        depth = reports[fl.top.index].depth(p)
        out[p] = DepthBounds(c_k, n, depth, depth >= c_k >= min(n + 1, model.rank))
    return out


def depth_bounds(model: DecoratedCone, p: int | None = None) -> DepthBounds:
    """The chain depth >= c_K >= min(n + 1, rank), evaluated exactly."""
    return depth_bounds_multi(model, primes=() if p is None else (p,))[p]


def f_bad_primes(model: DecoratedCone) -> frozenset[int]:
    """Primes p where the ring fails to be F-split / F-pure / F-injective:
    the torsion primes of the quotients (reference ∩ face span) / lambda_F."""
    out: set[int] = set()
    ref = model.reference
    for f in model.fl.faces:
        numerator = lattice_intersect(ref, f.span_lattice)
        q = quotient_structure(numerator, model.lattice_of(f))
        for factor in q.invariant_factors:
            out |= prime_factors(factor)
    return frozenset(out)


def _sigma_forms(model: DecoratedCone) -> list[tuple[Vec, int]]:
    """Per facet: the support form and the positive generator of its value
    group on the reference lattice, so sigma = form / scale is the primitive
    integer-valued form on the reference group vanishing on the facet."""
    fl = model.fl
    ref = model.reference
    out = []
    for i in fl.facet_indices():
        facet = fl.faces[i]
        form_idx = next(iter(facet.zero_set))
        form = fl.cone.support_forms[form_idx]
        scale = 0
        for b in ref.basis:
            scale = gcd(scale, dot(form, b))
        assert scale > 0
        out.append((form, scale))
    return out


def gorenstein_check(
    model: DecoratedCone, p: int | None = None, report: DepthReport | None = None
) -> tuple[bool, Vec | None]:
    """Gorenstein test for a Cohen-Macaulay model.

    Facets of group index > 2 rule it out.  Otherwise the candidate b is the
    unique reference point with sigma_F(b) = 0 on index-2 facets and = 1 on
    the others; it must lie in the cone's reference points and outside every
    index-2 facet lattice.
    """
    rep = report if report is not None else depth_report(model, primes=() if p is None else (p,))
    if not rep.cm(p):
        raise NotCM("the Gorenstein test requires a Cohen-Macaulay model")
    fl = model.fl
    ref = model.reference
    gammas = {}
    for i in fl.facet_indices():
        facet = fl.faces[i]
        numerator = lattice_intersect(ref, facet.span_lattice)
        q = quotient_structure(numerator, model.lattice_of(facet))
        gamma = q.order
        assert gamma is not None
        gammas[i] = gamma
        if gamma > 2:
            return False, None
    sigma = _sigma_forms(model)
    facet_ids = fl.facet_indices()
    # solve sigma_F(b) = target over the reference coordinates
    k = ref.rank
    rows = []
    rhs = []
    for (form, scale), i in zip(sigma, facet_ids):
        rows.append([Fraction(dot(form, b), scale) for b in ref.basis])
        rhs.append(Fraction(0 if gammas[i] == 2 else 1))
    # gaussian elimination on the overdetermined system
    aug = [row + [r] for row, r in zip(rows, rhs)]
    piv_cols = []
    r = 0
    for c in range(k):
        pivot = next((i for i in range(r, len(aug)) if aug[i][c]), None)
        if pivot is None:
            continue
        aug[r], aug[pivot] = aug[pivot], aug[r]
        pv = aug[r][c]
        aug[r] = [x / pv for x in aug[r]]
        for i in range(len(aug)):
            if i != r and aug[i][c]:
                e = aug[i][c]
                aug[i] = [x - e * y for x, y in zip(aug[i], aug[r])]
        piv_cols.append(c)
        r += 1
    for i in range(r, len(aug)):
        if aug[i][k]:
            return False, None
    assert len(piv_cols) == k, "facet forms span the dual space of a pointed cone"
    coords = [Fraction(0)] * k
    for i, c in enumerate(piv_cols):
        coords[c] = aug[i][k]
    if any(c.denominator != 1 for c in coords):
        return False, None
    b = ref.from_coords([int(c) for c in coords])
    if not model.cone.contains(b):
        return False, None
    for i in facet_ids:
        if gammas[i] == 2 and model.lambdas[i].member(b):
            return False, None
    return True, b
