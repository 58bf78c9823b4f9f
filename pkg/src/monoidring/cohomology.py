"""Degreewise local cohomology through finite face-filter cochain complexes.

For a decorated cone W and a degree vector a in the cone, the filter of a
collects the faces F with a in F and a in lambda_F.  The cochain complex of
the filter (with the incidence signs of the ambient face lattice) computes
the local cohomology of the represented monoid ring in degree -a, graded
piece by graded piece; dimensions are taken over Q and over prime fields,
and the torsion primes of the differentials flag every prime where the two
can differ.
"""

from dataclasses import dataclass

from .errors import NotUpClosed, OutOfRange
from .exactlin import Mat, Vec, mat, mat_mul, prime_factors, rank, rank_mod, snf
from .monoid import DecoratedCone
from .polyhedral import FaceLattice, minimal_face


def filter_at(model: DecoratedCone, a) -> frozenset[int]:
    """Face indices F with a in F and a in lambda_F; up-closed by the
    monotonicity of the decoration."""
    a = tuple(a)
    if not model.cone.contains(a) or not model.reference.member(a):
        raise OutOfRange(f"{a} is not in the cone intersected with the reference group")
    base = minimal_face(model.fl, a)
    out = set()
    for f in model.fl.faces_above(base):
        if model.lattice_of(f).member(a):
            out.add(f.index)
    result = frozenset(out)
    assert is_up_closed(model.fl, result)
    return result


def is_up_closed(fl: FaceLattice, face_ids: frozenset[int]) -> bool:
    for i in face_ids:
        for up in fl.up_covers[i]:
            if up not in face_ids:
                return False
    return True


@dataclass(frozen=True, eq=False)
class CochainComplex:
    """Integer cochain complex over a face filter.

    faces_by_deg[t] lists the member faces of dimension t; matrices[t] is
    the differential from degree t to t+1 in the row convention (rows =
    t-faces, columns = (t+1)-faces), with entries given by the incidence
    function on cover pairs.
    """

    top_dim: int
    faces_by_deg: tuple[tuple[int, ...], ...]
    matrices: tuple[Mat, ...]

    def euler_characteristic(self) -> int:
        return sum((-1) ** t * len(fs) for t, fs in enumerate(self.faces_by_deg))


def cochain_complex(fl: FaceLattice, face_ids: frozenset[int]) -> CochainComplex:
    if not is_up_closed(fl, face_ids):
        raise NotUpClosed("the face set is not an up-closed filter")
    d = fl.top.dim
    by_deg = tuple(
        tuple(sorted(i for i in face_ids if fl.faces[i].dim == t)) for t in range(d + 1)
    )
    matrices = []
    for t in range(d):
        rows = by_deg[t]
        cols = by_deg[t + 1]
        matrices.append(
            mat(
                [[fl.epsilon.get((g, f), 0) for f in cols] for g in rows]
                if rows and cols
                else [(0,) * len(cols) for _ in rows]
            )
        )
    complex_ = CochainComplex(d, by_deg, tuple(matrices))
    for t in range(d - 1):
        a, b = complex_.matrices[t], complex_.matrices[t + 1]
        if a and b and a[0]:
            prod = mat_mul(a, b)
            assert all(all(x == 0 for x in row) for row in prod), "differential squares to zero"
    return complex_


def cohomology_dims(complex_: CochainComplex, p: int | None = None) -> tuple[int, ...]:
    """dim H^t for t = 0..d over Q (p=None) or over F_p."""
    rk = rank if p is None else (lambda m: rank_mod(m, p))
    ranks = [rk(m) if m and m[0] else 0 for m in complex_.matrices]
    dims = []
    for t in range(complex_.top_dim + 1):
        n = len(complex_.faces_by_deg[t])
        r_out = ranks[t] if t < complex_.top_dim else 0
        r_in = ranks[t - 1] if t > 0 else 0
        dims.append(n - r_out - r_in)
    return tuple(dims)


def torsion_primes(complex_: CochainComplex) -> frozenset[int]:
    """Primes dividing an invariant factor of some differential: exactly the
    primes p whose F_p dimensions differ from the rational ones."""
    primes: set[int] = set()
    for m in complex_.matrices:
        if not m or not m[0]:
            continue
        s, _, _ = snf(m)
        for i in range(min(len(s), len(s[0]))):
            if s[i][i] > 1:
                primes |= prime_factors(s[i][i])
    return frozenset(primes)


@dataclass(frozen=True)
class CohomologyProfile:
    """Cohomology dimensions of one filter complex, per field."""

    dims_q: tuple[int, ...]
    dims_p: dict[int, tuple[int, ...]]
    torsion_primes: frozenset[int]

    def dims(self, p: int | None) -> tuple[int, ...]:
        if p is None:
            return self.dims_q
        if p in self.dims_p:
            return self.dims_p[p]
        assert p not in self.torsion_primes
        return self.dims_q

    def fields_differ(self) -> bool:
        return any(self.dims_p[p] != self.dims_q for p in self.dims_p)


def profile_of_complex(complex_: CochainComplex, primes=()) -> CohomologyProfile:
    dims_q = cohomology_dims(complex_)
    tors = torsion_primes(complex_)
    dims_p = {p: cohomology_dims(complex_, p) for p in sorted(set(primes) | tors)}
    for p, dims in dims_p.items():
        if p not in tors:
            assert dims == dims_q, "torsion primes must flag every deviating prime"
    euler = complex_.euler_characteristic()
    assert sum((-1) ** t * d for t, d in enumerate(dims_q)) == euler
    for dims in dims_p.values():
        assert sum((-1) ** t * d for t, d in enumerate(dims)) == euler
    return CohomologyProfile(dims_q, dims_p, tors)


def local_cohomology_at(model: DecoratedCone, a, primes=()) -> CohomologyProfile:
    """Profile of the local cohomology in degree -a for a in cn ∩ reference."""
    face_ids = filter_at(model, a)
    complex_ = cochain_complex(model.fl, face_ids)
    return profile_of_complex(complex_, primes)


def top_support_member(model: DecoratedCone, a) -> bool:
    """Whether a supports nonzero top cohomology: a in cn ∩ reference but in
    no facet lattice."""
    a = tuple(a)
    if not model.cone.contains(a) or not model.reference.member(a):
        return False
    for i in model.fl.facet_indices():
        if model.lambdas[i].member(a):
            return False
    return True
