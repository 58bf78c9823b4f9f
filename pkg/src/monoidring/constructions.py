"""Builders for decorated-cone models with prescribed cohomology.

The main construction turns a simplicial complex into a seminormal model
whose local cohomology at one distinguished degree is the reduced homology
of the complex.  Steps:

1. realize the dual simplex of the vertex simplex as a scaled standard
   simplex, erect a pyramid over it with an integer apex;
2. plane off the pyramid faces corresponding to the minimal non-faces of
   the complex, each by a small rational displacement (geometrically
   decreasing, so later cuts never interfere with earlier ones);
3. erect a second pyramid over the planed polytope, embed it at height one
   and take the cone over it;
4. decorate: facets matching the vertex-derived side facets keep their full
   saturated lattice, every other facet keeps only the points of even last
   coordinate; faces inherit the intersection of the facet lattices above
   them.

The apex of the second pyramid is the distinguished degree.  Construction
success is verified (facet inventory, survival and dimension of the
expected faces, simplicity away from the distinguished ray, and the
order-reversing bijection between the filter at the apex and the complex);
on failure the displacement scale is doubled and the construction retries.

A self-contained simplicial chain complex provides the independent homology
oracle, including integer torsion primes.
"""

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .cohomology import filter_at
from .errors import VerificationFailed
from .exactlin import (
    Mat,
    Vec,
    identity,
    lattice_from_rows,
    lattice_intersect,
    mat,
    prime_factors,
    primitive,
    rank,
    rank_mod,
    snf,
)
from .monoid import DecoratedCone, decorated_cone
from .polyhedral import (
    _dd_extreme_rays,
    dual_description,
    face_lattice,
    is_simple_face,
    minimal_face,
)


@dataclass(frozen=True)
class SimplicialComplex:
    """An abstract simplicial complex given by its inclusion-maximal faces."""

    vertices: tuple[int, ...]
    facets: tuple[frozenset[int], ...]

    @classmethod
    def from_facets(cls, facets) -> "SimplicialComplex":
        sets = [frozenset(f) for f in facets if f]
        maximal = [f for f in sets if not any(f < g for g in sets)]
        uniq = sorted(set(maximal), key=lambda f: sorted(f))
        vertices = tuple(sorted(set().union(*uniq))) if uniq else ()
        return cls(vertices, tuple(uniq))

    @classmethod
    def from_file(cls, path) -> "SimplicialComplex":
        facets = []
        with open(path) as fh:
            for line in fh:
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                facets.append([int(tok) for tok in line.split()])
        return cls.from_facets(facets)

    def faces(self) -> set[frozenset[int]]:
        out = {frozenset()}
        for f in self.facets:
            for k in range(1, len(f) + 1):
                out.update(map(frozenset, itertools.combinations(sorted(f), k)))
        return out

    def minimal_non_faces(self) -> list[frozenset[int]]:
        faces = self.faces()
        out = []
        for k in range(1, len(self.vertices) + 1):
            for sub in itertools.combinations(self.vertices, k):
                s = frozenset(sub)
                if s in faces:
                    continue
                if all(s - {v} in faces for v in s):
                    out.append(s)
        return sorted(out, key=sorted)

    @property
    def dim(self) -> int:
        return max((len(f) for f in self.facets), default=0) - 1


RP2_SIX_VERTEX = SimplicialComplex.from_facets(
    [
        (1, 2, 5),
        (1, 2, 6),
        (1, 3, 4),
        (1, 3, 6),
        (1, 4, 5),
        (2, 3, 4),
        (2, 3, 5),
        (2, 4, 6),
        (3, 5, 6),
        (4, 5, 6),
    ]
)


@dataclass(frozen=True)
class HomologyResult:
    """Reduced homology of a simplicial complex: dims_by_degree[j + 1] is
    the dimension of H~_j, for j = -1 .. dim."""

    dims_q: tuple[int, ...]
    dims_p: dict[int, tuple[int, ...]]
    torsion_primes: frozenset[int]

    def reduced_rank(self, j: int, p: int | None = None) -> int:
        dims = self.dims_q if p is None or p not in self.dims_p else self.dims_p[p]
        idx = j + 1
        if idx < 0 or idx >= len(dims):
            return 0
        return dims[idx]


def simplicial_homology(delta: SimplicialComplex, primes=()) -> HomologyResult:
    """Reduced simplicial homology over Q and prime fields, with the torsion
    primes of the integer boundary matrices.  Independent of the face-filter
    machinery: this is the plain ordered chain complex of the complex."""
    faces_by_dim: list[list[tuple[int, ...]]] = [[()]]
    all_faces = delta.faces()
    for k in range(delta.dim + 1):
        faces_by_dim.append(sorted(tuple(sorted(f)) for f in all_faces if len(f) == k + 1))
    boundaries: list[Mat] = []
    for k in range(1, len(faces_by_dim)):
        rows = faces_by_dim[k]
        cols = faces_by_dim[k - 1]
        col_index = {f: i for i, f in enumerate(cols)}
        matrix = []
        for f in rows:
            row = [0] * len(cols)
            for i in range(len(f)):
                sub = f[:i] + f[i + 1 :]
                row[col_index[sub]] = (-1) ** i
            matrix.append(tuple(row))
        boundaries.append(mat(matrix))

    def dims_over(p: int | None) -> tuple[int, ...]:
        rk = rank if p is None else (lambda m: rank_mod(m, p))
        ranks = [rk(b) if b and b[0] else 0 for b in boundaries]
        out = []
        for k in range(len(faces_by_dim)):
            n = len(faces_by_dim[k])
            r_in = ranks[k] if k < len(boundaries) else 0
            r_out = ranks[k - 1] if k > 0 else 0
            out.append(n - r_in - r_out)
        return tuple(out)

    tors: set[int] = set()
    for b in boundaries:
        if not b or not b[0]:
            continue
        s, _, _ = snf(b)
        for i in range(min(len(s), len(s[0]))):
            if s[i][i] > 1:
                tors |= prime_factors(s[i][i])
    dims_q = dims_over(None)
    dims_p = {p: dims_over(p) for p in sorted(set(primes) | tors)}
    return HomologyResult(dims_q, dims_p, frozenset(tors))


@dataclass(frozen=True, eq=False)
class ConstructionResult:
    model: DecoratedCone
    distinguished_degree: Vec
    rank: int
    provenance: tuple[str, ...]


def _pi_constraints(n: int) -> list[tuple[Vec, int]]:
    """H-representation (linear, rhs) with linear . y >= rhs of the first
    pyramid: base z >= 0 and one side facet per vertex of the complex."""
    cons: list[tuple[Vec, int]] = []
    cons.append((tuple([0] * (n - 1) + [1]), 0))  # z >= 0, the base
    for i in range(n - 1):
        lin = [0] * n
        lin[i] = 1
        lin[-1] = -1
        cons.append((tuple(lin), 0))  # x_i - z >= 0, side facet of vertex i
    lin = [-1] * n
    cons.append((tuple(lin), -n))  # n - sum x - z >= 0, side facet of vertex n
    return cons


def _side_constraint(n: int, vertex_pos: int) -> tuple[Vec, int]:
    return _pi_constraints(n)[1 + vertex_pos]


def _polytope_vertices(constraints: list[tuple[Vec, int]], dim: int) -> list[tuple[Fraction, ...]]:
    """Vertices of {y : lin . y >= rhs} via the homogenization cone."""
    forms = [tuple(lin) + (-rhs,) for lin, rhs in constraints]
    forms.append(tuple([0] * dim + [1]))
    lin_space, rays = _dd_extreme_rays(forms, dim + 1)
    assert not lin_space, "a polytope homogenization is pointed"
    vertices = []
    for r in rays:
        if r[-1] == 0:
            raise VerificationFailed("planed polytope is unbounded")
        vertices.append(tuple(Fraction(c, r[-1]) for c in r[:-1]))
    return sorted(vertices)


def delta_construct(delta: SimplicialComplex, max_retries: int = 8) -> ConstructionResult:
    """Build the decorated model attached to a simplicial complex.

    The rank is the vertex count plus two; the distinguished degree is the
    apex of the final pyramid, of degree one in the last coordinate.
    """
    if not delta.vertices:
        raise ValueError("the complex needs at least one vertex")
    n = len(delta.vertices)
    vertex_pos = {v: i for i, v in enumerate(sorted(delta.vertices))}
    d = n + 2
    non_faces = delta.minimal_non_faces()
    scale = 3 * (n + 2)
    provenance: list[str] = []
    last_error = None
    for attempt in range(max_retries):
        try:
            result = _delta_construct_once(delta, n, vertex_pos, d, non_faces, scale, provenance)
            provenance.append(f"attempt {attempt}: verified with displacement scale {scale}")
            return ConstructionResult(result[0], result[1], d, tuple(provenance))
        except VerificationFailed as exc:
            provenance.append(f"attempt {attempt}: scale {scale} failed: {exc}")
            last_error = exc
            scale *= 2
    raise VerificationFailed(
        f"construction failed after {max_retries} attempts: {last_error}"
    )


def _delta_construct_once(delta, n, vertex_pos, d, non_faces, scale, provenance):
    pi = _pi_constraints(n)
    constraints = list(pi)
    for k, g in enumerate(non_faces):
        lin = [0] * n
        rhs = 0
        for v in sorted(g):
            side_lin, side_rhs = _side_constraint(n, vertex_pos[v])
            lin = [a + b for a, b in zip(lin, side_lin)]
            rhs += side_rhs
        mult = scale * 3**k
        constraints.append((tuple(mult * a for a in lin), mult * rhs + 1))
        provenance.append(
            f"planing {sorted(g)}: displacement 1/{mult}"
        )
    vertices = _polytope_vertices(constraints, n)

    # rays of the cone over the pyramid over the planed polytope
    rays = []
    for p in vertices:
        denom = 1
        for c in p:
            denom = denom * c.denominator // _gcd(denom, c.denominator)
        ray = tuple(int(c * denom) for c in p) + (0, denom)
        rays.append(primitive(ray))
    apex = tuple([0] * n + [1, 1])
    rays.append(apex)
    cone = dual_description(sorted(rays), d)
    if cone.dim != d:
        raise VerificationFailed("cone is not full dimensional")

    # expected facet forms: lifted constraints plus the base of the pyramid
    expected: dict[Vec, str] = {}
    for idx, (lin, rhs) in enumerate(constraints):
        lifted = primitive(tuple(lin) + (rhs, -rhs))
        kind = "vertex" if 1 <= idx <= n else "parity"
        expected[lifted] = kind
    expected[tuple([0] * n + [1, 0])] = "parity"  # base of the final pyramid
    if set(cone.support_forms) != set(expected):
        raise VerificationFailed("facet inventory differs from the expected forms")

    fl = face_lattice(cone)
    form_kind = {i: expected[f] for i, f in enumerate(cone.support_forms)}
    vertex_form = {}
    for v, pos in vertex_pos.items():
        lin, rhs = _side_constraint(n, pos)
        lifted = primitive(tuple(lin) + (rhs, -rhs))
        vertex_form[v] = cone.support_forms.index(lifted)

    # survival of the faces of the complex with the right dimension and no
    # extra facets through them
    for f in sorted(delta.faces() - {frozenset()}, key=sorted):
        want_zero = frozenset(vertex_form[v] for v in f)
        face = fl.by_zero_set(want_zero)
        if face is None or face.dim != n - len(f) + 2:
            raise VerificationFailed(f"face {sorted(f)} did not survive the planing")

    # simplicity away from the distinguished ray
    apex_ray = minimal_face(fl, apex)
    if apex_ray.dim != 1:
        raise VerificationFailed("the distinguished degree is not on its own ray")
    for face in fl.faces[:-1]:
        if face.dim == 1 and face.index != apex_ray.index:
            if not is_simple_face(fl, face):
                raise VerificationFailed("a vertex ray lost simplicity")
    if len(non_faces) > 0 and is_simple_face(fl, apex_ray):
        raise VerificationFailed("the distinguished ray must not be simple after planing")

    # decoration: parity facets carry the even-degree lattice
    even = _even_last_lattice(d)
    lambdas = []
    for face in fl.faces:
        lam = face.span_lattice
        if any(form_kind[i] == "parity" for i in face.zero_set):
            lam = lattice_intersect(lam, even)
        lambdas.append(lam)
    model = decorated_cone(fl, lambdas)

    # the filter at the apex must be the complex, upside down
    ids = filter_at(model, apex)
    by_vertices = {}
    for i in ids:
        face = fl.faces[i]
        key = frozenset(v for v in vertex_pos if vertex_form[v] in face.zero_set)
        if key in by_vertices:
            raise VerificationFailed("two filter faces match one complex face")
        by_vertices[key] = face
    if set(by_vertices) != delta.faces():
        raise VerificationFailed("filter at the apex does not match the complex")
    for a, fa in by_vertices.items():
        for b, fb in by_vertices.items():
            if a < b and not fb.ray_set < fa.ray_set:
                raise VerificationFailed("filter order does not reverse the complex order")
    return model, apex


def _even_last_lattice(dim: int):
    rows = [list(r) for r in identity(dim)]
    rows[-1][-1] = 2
    return lattice_from_rows(dim, rows)


def _gcd(a: int, b: int) -> int:
    from math import gcd

    return gcd(a, b)


def builtin(name: str) -> DecoratedCone:
    """The two shipped pyramid models over the unit square.

    Both restrict facet lattices to even-degree points: the first on the two
    opposite side facets through the apex, the second on one side facet only.
    """
    verts = [
        (0, 0, 1, 1),
        (-1, 1, 0, 1),
        (-1, -1, 0, 1),
        (1, -1, 0, 1),
        (1, 1, 0, 1),
    ]
    m0, m1, m2, m3, m4 = verts
    if name == "pyramid-7.1":
        restricted = [(m0, m1, m2), (m0, m3, m4)]
    elif name == "pyramid-7.3":
        restricted = [(m0, m1, m2)]
    else:
        raise ValueError(f"unknown builtin {name!r}")
    cone = dual_description(sorted(verts))
    fl = face_lattice(cone)
    even = _even_last_lattice(4)
    restricted_forms = set()
    for rays in restricted:
        want = frozenset(cone.extreme_rays.index(r) for r in rays)
        facet = next(
            f for f in fl.faces if f.dim == 3 and f.ray_set == want
        )
        restricted_forms.add(next(iter(facet.zero_set)))
    lambdas = []
    for face in fl.faces:
        lam = face.span_lattice
        if face.zero_set & restricted_forms:
            lam = lattice_intersect(lam, even)
        lambdas.append(lam)
    return decorated_cone(fl, lambdas)


def verify_eq_homology(result: ConstructionResult, delta: SimplicialComplex, p: int | None = None) -> bool:
    """Local cohomology at the distinguished degree against the reduced
    homology of the complex, shifted so cohomological degree i pairs with
    homological degree d - i - 1."""
    from .cohomology import local_cohomology_at

    primes = () if p is None else (p,)
    profile = local_cohomology_at(result.model, result.distinguished_degree, primes)
    hom = simplicial_homology(delta, primes)
    d = result.rank
    for i in range(d + 1):
        if profile.dims(p)[i] != hom.reduced_rank(d - i - 1, p):
            return False
    return True
