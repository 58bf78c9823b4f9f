"""Exact integer and rational linear algebra.

Everything runs on arbitrary-precision Python integers (and
``fractions.Fraction`` where division is unavoidable); no floating point
enters any computation.  Matrices are tuples of row tuples, vectors are
tuples, and the row convention is used throughout: a lattice is the set of
integer combinations of the *rows* of its basis matrix.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import NotSublattice

Vec = tuple[int, ...]
Mat = tuple[Vec, ...]


def vec(entries) -> Vec:
    return tuple(int(e) for e in entries)


def mat(rows) -> Mat:
    return tuple(vec(r) for r in rows)


def identity(n: int) -> Mat:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def zero_matrix(rows: int, cols: int) -> Mat:
    return tuple((0,) * cols for _ in range(rows))


def transpose(m: Mat) -> Mat:
    return tuple(zip(*m)) if m else ()


def dot(u, v) -> int:
    return sum(a * b for a, b in zip(u, v))


def vadd(u: Vec, v: Vec) -> Vec:
    return tuple(a + b for a, b in zip(u, v))


def vsub(u: Vec, v: Vec) -> Vec:
    return tuple(a - b for a, b in zip(u, v))


def vscale(k: int, u: Vec) -> Vec:
    return tuple(k * a for a in u)


def vneg(u: Vec) -> Vec:
    return tuple(-a for a in u)


def is_zero_vec(u) -> bool:
    return all(a == 0 for a in u)


def content(u: Vec) -> int:
    """Gcd of the entries, nonnegative."""
    g = 0
    for a in u:
        g = gcd(g, a)
    return g


def primitive(u: Vec) -> Vec:
    """Divide out the content; the zero vector stays zero."""
    g = content(u)
    if g <= 1:
        return tuple(u)
    return tuple(a // g for a in u)


def mat_mul(a: Mat, b: Mat) -> Mat:
    bt = transpose(b)
    return tuple(tuple(dot(ra, cb) for cb in bt) for ra in a)


def mat_vec(m: Mat, x) -> Vec:
    return tuple(dot(r, x) for r in m)


def vec_mat(x, m: Mat) -> Vec:
    cols = len(m[0]) if m else 0
    return tuple(sum(x[i] * m[i][j] for i in range(len(m))) for j in range(cols))


def prime_factors(n: int) -> set[int]:
    """Prime divisors of |n| by trial division (desk-scale inputs)."""
    out = set()
    n = abs(n)
    p = 2
    while p * p <= n:
        while n % p == 0:
            out.add(p)
            n //= p
        p += 1
    if n > 1:
        out.add(n)
    return out


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with s*a + t*b = g = gcd(a, b) >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def _row_gcd_transform(rows, trans, i, j, col):
    """Left-multiply rows i, j by the 2x2 determinant-one matrix that moves
    gcd(rows[i][col], rows[j][col]) into position (i, col) and zeroes (j, col)."""
    a, b = rows[i][col], rows[j][col]
    if b == 0:
        return
    if a and b % a == 0:
        # shear only; keeping the pivot row fixed guarantees progress
        q = b // a
        for m in (rows, trans):
            m[j] = [y - q * x for x, y in zip(m[i], m[j])]
        return
    g, s, t = xgcd(a, b)
    p, q = -(b // g), a // g
    for m in (rows, trans):
        ri, rj = m[i], m[j]
        m[i] = [s * x + t * y for x, y in zip(ri, rj)]
        m[j] = [p * x + q * y for x, y in zip(ri, rj)]


def hnf(matrix) -> tuple[Mat, Mat]:
    """Row Hermite normal form.

    Returns (h, u) with u unimodular, u @ matrix == h, pivots positive,
    entries above each pivot reduced into [0, pivot).  Zero rows sink to the
    bottom, so the nonzero rows of h are the canonical basis of the row span.
    """
    rows = [list(r) for r in matrix]
    n = len(rows)
    cols = len(rows[0]) if n else 0
    trans = [list(r) for r in identity(n)]
    piv_row = 0
    for col in range(cols):
        if piv_row >= n:
            break
        pivot = next((i for i in range(piv_row, n) if rows[i][col]), None)
        if pivot is None:
            continue
        if pivot != piv_row:
            rows[piv_row], rows[pivot] = rows[pivot], rows[piv_row]
            trans[piv_row], trans[pivot] = trans[pivot], trans[piv_row]
        for i in range(piv_row + 1, n):
            _row_gcd_transform(rows, trans, piv_row, i, col)
        if rows[piv_row][col] < 0:
            rows[piv_row] = [-x for x in rows[piv_row]]
            trans[piv_row] = [-x for x in trans[piv_row]]
        p = rows[piv_row][col]
        for i in range(piv_row):
            q = rows[i][col] // p
            if q:
                rows[i] = [x - q * y for x, y in zip(rows[i], rows[piv_row])]
                trans[i] = [x - q * y for x, y in zip(trans[i], trans[piv_row])]
        piv_row += 1
    return mat(rows), mat(trans)


def snf(matrix) -> tuple[Mat, Mat, Mat]:
    """Smith normal form.

    Returns (s, u, v) with u, v unimodular, u @ matrix @ v == s, s diagonal
    with nonnegative entries forming a divisibility chain.
    """
    s = [list(r) for r in matrix]
    n = len(s)
    cols = len(s[0]) if n else 0
    u = [list(r) for r in identity(n)]
    v = [list(r) for r in identity(cols)]

    def col_gcd_transform(i, j, row):
        a, b = s[row][i], s[row][j]
        if b == 0:
            return
        if a and b % a == 0:
            q = b // a
            for m in (s, v):
                for r in m:
                    r[j] -= q * r[i]
            return
        g, sc, tc = xgcd(a, b)
        p, q = -(b // g), a // g
        for m in (s, v):
            for r in m:
                xi, xj = r[i], r[j]
                r[i] = sc * xi + tc * xj
                r[j] = p * xi + q * xj

    # v accumulates column operations applied on the right: they act on the
    # rows of v the same way they act on the columns of s, i.e. v is updated
    # column-wise alongside s so that u @ matrix @ v == s stays true.
    k = 0
    while k < min(n, cols):
        nz = [(abs(s[i][j]), i, j) for i in range(k, n) for j in range(k, cols) if s[i][j]]
        if not nz:
            break
        _, bi, bj = min(nz)
        if bi != k:
            s[k], s[bi] = s[bi], s[k]
            u[k], u[bi] = u[bi], u[k]
        if bj != k:
            for m in (s, v):
                for r in m:
                    r[k], r[bj] = r[bj], r[k]
        while True:
            for i in range(k + 1, n):
                _row_gcd_transform(s, u, k, i, col=k)
            for j in range(k + 1, cols):
                col_gcd_transform(k, j, row=k)
            if all(s[i][k] == 0 for i in range(k + 1, n)) and all(
                s[k][j] == 0 for j in range(k + 1, cols)
            ):
                bad = next(
                    (
                        (i, j)
                        for i in range(k + 1, n)
                        for j in range(k + 1, cols)
                        if s[i][j] % s[k][k]
                    ),
                    None,
                )
                if bad is None:
                    break
                i, _ = bad
                s[k] = [x + y for x, y in zip(s[k], s[i])]
                u[k] = [x + y for x, y in zip(u[k], u[i])]
        if s[k][k] < 0:
            s[k] = [-x for x in s[k]]
            u[k] = [-x for x in u[k]]
        k += 1
    return mat(s), mat(u), mat(v)


def det(matrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(matrix)
    if n == 0:
        return 1
    a = [list(r) for r in matrix]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[-1][-1]


def rank(matrix) -> int:
    """Rank over the rationals, by integer elimination."""
    rows = [list(r) for r in matrix if not is_zero_vec(r)]
    if not rows:
        return 0
    cols = len(rows[0])
    rk = 0
    for col in range(cols):
        pivot = next((i for i in range(rk, len(rows)) if rows[i][col]), None)
        if pivot is None:
            continue
        rows[rk], rows[pivot] = rows[pivot], rows[rk]
        p = rows[rk][col]
        for i in range(rk + 1, len(rows)):
            e = rows[i][col]
            if e:
                rows[i] = [p * x - e * y for x, y in zip(rows[i], rows[rk])]
                g = content(rows[i])
                if g > 1:
                    rows[i] = [x // g for x in rows[i]]
        rk += 1
        if rk == len(rows):
            break
    return rk


def rank_mod(matrix, p: int) -> int:
    """Rank over the prime field F_p."""
    rows = [[x % p for x in r] for r in matrix]
    rows = [r for r in rows if any(r)]
    if not rows:
        return 0
    cols = len(rows[0])
    rk = 0
    for col in range(cols):
        pivot = next((i for i in range(rk, len(rows)) if rows[i][col]), None)
        if pivot is None:
            continue
        rows[rk], rows[pivot] = rows[pivot], rows[rk]
        inv = pow(rows[rk][col], -1, p)
        rows[rk] = [(x * inv) % p for x in rows[rk]]
        for i in range(len(rows)):
            if i != rk and rows[i][col]:
                e = rows[i][col]
                rows[i] = [(x - e * y) % p for x, y in zip(rows[i], rows[rk])]
        rk += 1
        if rk == len(rows):
            break
    return rk


def left_kernel(matrix, nrows: int) -> Mat:
    """Basis (rows) of {x : x @ matrix == 0} for a matrix with nrows rows."""
    if nrows == 0:
        return ()
    h, u = hnf(matrix)
    return tuple(u[i] for i in range(nrows) if is_zero_vec(h[i]))


def solve_rational(rows: Mat, target) -> tuple[Fraction, ...] | None:
    """Solve t @ rows == target over Q for linearly independent rows.

    Returns None when target is outside the rational row span.
    """
    k = len(rows)
    if k == 0:
        return () if is_zero_vec(target) else None
    m = len(rows[0])
    # Augmented system over the coordinates: rows^T t = target^T.
    aug = [[Fraction(rows[i][j]) for i in range(k)] + [Fraction(target[j])] for j in range(m)]
    piv_cols: list[int] = []
    r = 0
    for c in range(k):
        pivot = next((i for i in range(r, m) if aug[i][c]), None)
        if pivot is None:
            continue
        aug[r], aug[pivot] = aug[pivot], aug[r]
        pv = aug[r][c]
        aug[r] = [x / pv for x in aug[r]]
        for i in range(m):
            if i != r and aug[i][c]:
                e = aug[i][c]
                aug[i] = [x - e * y for x, y in zip(aug[i], aug[r])]
        piv_cols.append(c)
        r += 1
    for i in range(r, m):
        if aug[i][k]:
            return None
    assert len(piv_cols) == k, "solve_rational requires independent rows"
    sol = [Fraction(0)] * k
    for i, c in enumerate(piv_cols):
        sol[c] = aug[i][k]
    return tuple(sol)


def sign_det_fractions(rows) -> int:
    """Sign of the determinant of a square matrix of Fractions."""
    cleared = []
    for r in rows:
        denom_lcm = 1
        for x in r:
            denom_lcm = denom_lcm * x.denominator // gcd(denom_lcm, x.denominator)
        cleared.append([int(x * denom_lcm) for x in r])
    d = det(cleared)
    return (d > 0) - (d < 0)


@dataclass(frozen=True)
class Lattice:
    """A subgroup of Z^ambient_dim in canonical row-HNF form.

    Two Lattice values describe the same subgroup exactly when they compare
    equal componentwise, so equality of lattices is decidable by ``==``.
    """

    ambient_dim: int
    basis: Mat

    @property
    def rank(self) -> int:
        return len(self.basis)

    def member(self, x) -> bool:
        return self.coords(x) is not None

    def coords(self, x) -> Vec | None:
        """Integer coordinates of x in the basis, or None."""
        if len(x) != self.ambient_dim:
            raise ValueError("dimension mismatch")
        residue = list(x)
        out = []
        for row in self.basis:
            p = next(j for j in range(self.ambient_dim) if row[j])
            c, r = divmod(residue[p], row[p])
            if r:
                return None
            if c:
                residue = [a - c * b for a, b in zip(residue, row)]
            out.append(c)
        if any(residue):
            return None
        return tuple(out)

    def from_coords(self, coords) -> Vec:
        return vec_mat(coords, self.basis) if self.basis else (0,) * self.ambient_dim


@dataclass(frozen=True)
class AbelianQuotient:
    """Structure of a quotient A/B: free rank plus invariant factor chain."""

    free_rank: int
    invariant_factors: tuple[int, ...]

    @property
    def order(self) -> int | None:
        """Group order when finite, else None."""
        if self.free_rank:
            return None
        n = 1
        for f in self.invariant_factors:
            n *= f
        return n


def lattice_from_rows(ambient_dim: int, rows) -> Lattice:
    rows = mat(rows)
    for r in rows:
        if len(r) != ambient_dim:
            raise ValueError("row length does not match ambient dimension")
    if not rows:
        return Lattice(ambient_dim, ())
    h, _ = hnf(rows)
    return Lattice(ambient_dim, tuple(r for r in h if not is_zero_vec(r)))


def lattice_member(lat: Lattice, x) -> bool:
    return lat.member(x)


def full_lattice(ambient_dim: int) -> Lattice:
    return Lattice(ambient_dim, identity(ambient_dim))


def lattice_intersect(a: Lattice, b: Lattice) -> Lattice:
    if a.ambient_dim != b.ambient_dim:
        raise ValueError("ambient dimensions differ")
    if a.rank == 0 or b.rank == 0:
        return Lattice(a.ambient_dim, ())
    stacked = a.basis + b.basis
    kern = left_kernel(stacked, len(stacked))
    gens = [vec_mat(z[: a.rank], a.basis) for z in kern]
    return lattice_from_rows(a.ambient_dim, gens)


def saturation(lat: Lattice) -> Lattice:
    """Smallest saturated lattice containing lat: (R-span of lat) cap Z^m."""
    if lat.rank == 0:
        return lat
    _, _, v = snf(lat.basis)
    v_inv = unimodular_inverse(v)
    return lattice_from_rows(lat.ambient_dim, v_inv[: lat.rank])


def unimodular_inverse(m: Mat) -> Mat:
    """Inverse of a unimodular integer matrix (via its HNF, which is I)."""
    h, u = hnf(m)
    if h != identity(len(m)):
        raise ValueError("matrix is not unimodular")
    return u


def complete_saturated_basis(lat: Lattice) -> Mat:
    """Extend the basis of a saturated lattice to a basis of Z^m.

    The first ``lat.rank`` rows of the result are exactly ``lat.basis``.
    """
    r = lat.rank
    m = lat.ambient_dim
    if r == 0:
        return identity(m)
    s, _, v = snf(lat.basis)
    if any(s[i][i] != 1 for i in range(r)):
        raise ValueError("lattice is not saturated")
    v_inv = unimodular_inverse(v)
    return lat.basis + tuple(v_inv[r:])


def _coord_matrix(a: Lattice, b: Lattice) -> Mat:
    coords = []
    for row in b.basis:
        c = a.coords(row)
        if c is None:
            raise NotSublattice("second lattice is not contained in the first")
        coords.append(c)
    return mat(coords)


def quotient_structure(a: Lattice, b: Lattice) -> AbelianQuotient:
    """Structure of a/b for b a sublattice of a, factors of 1 dropped."""
    c = _coord_matrix(a, b)
    s, _, _ = snf(c)
    factors = tuple(s[i][i] for i in range(min(len(s), len(s[0]) if s else 0)) if s[i][i] > 1)
    return AbelianQuotient(a.rank - b.rank, factors)


def quotient_decomposition(a: Lattice, b: Lattice) -> tuple[tuple[int, ...], Mat]:
    """Aligned basis for a finite quotient a/b of equal-rank lattices.

    Returns (d, rows) with rows a basis of a such that the d[i]-multiples of
    the rows form a basis of b; the classes of a/b are exactly the sums
    sum c_i rows[i] with 0 <= c_i < d[i].
    """
    if a.rank != b.rank:
        raise NotSublattice("quotient is infinite: ranks differ")
    if a.rank == 0:
        return (), ()
    c = _coord_matrix(a, b)
    s, _, v = snf(c)
    v_inv = unimodular_inverse(v)
    new_basis = mat_mul(v_inv, a.basis)
    d = tuple(s[i][i] for i in range(a.rank))
    return d, new_basis
