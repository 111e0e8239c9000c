"""Integral chain complexes of nerves, Smith normal form and (co)homology.

The nerve of a finite category has nondegenerate m-simplices the strings of
m composable non-identity morphisms; normalized chains set a face to zero
when the two morphisms compose to an identity.  Constant-coefficient
cohomology of the presheaf topos on a finite category agrees with the
cohomology of this nerve (the classifying-space identification; validated
against torsor and component counts in the test suite rather than assumed).

All arithmetic is exact: Python integers for Smith normal form, explicit
Gaussian elimination for ranks over a prime field.
"""

from __future__ import annotations

from dataclasses import dataclass

from .fincat import FiniteCategory


class IntegerMatrix:
    """Dense integer matrix with exact arithmetic (rows of Python ints)."""

    def __init__(self, rows, cols, entries=None):
        self.rows = rows
        self.cols = cols
        if entries is None:
            self.entries = [[0] * cols for _ in range(rows)]
        else:
            self.entries = [list(r) for r in entries]
            if len(self.entries) != rows or any(len(r) != cols for r in self.entries):
                raise ValueError("inconsistent matrix dimensions")

    @staticmethod
    def identity(n):
        m = IntegerMatrix(n, n)
        for i in range(n):
            m.entries[i][i] = 1
        return m

    def copy(self):
        return IntegerMatrix(self.rows, self.cols, self.entries)

    def mul(self, other):
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        out = IntegerMatrix(self.rows, other.cols)
        for i in range(self.rows):
            row = self.entries[i]
            for k in range(self.cols):
                a = row[k]
                if a:
                    orow = other.entries[k]
                    target = out.entries[i]
                    for j in range(other.cols):
                        target[j] += a * orow[j]
        return out

    def transpose(self):
        return IntegerMatrix(self.cols, self.rows,
                             [[self.entries[i][j] for i in range(self.rows)]
                              for j in range(self.cols)])

    def det_unimodular(self):
        """Determinant, for small square matrices (fraction-free elimination)."""
        if self.rows != self.cols:
            raise ValueError("determinant of non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        a = [row[:] for row in self.entries]
        # Bareiss algorithm
        prev = 1
        sign = 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k] != 0:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1]

    def __eq__(self, other):
        return (isinstance(other, IntegerMatrix) and self.rows == other.rows
                and self.cols == other.cols and self.entries == other.entries)

    def __repr__(self):
        return f"IntegerMatrix({self.rows}x{self.cols})"


def smith_normal_form(m: IntegerMatrix):
    """U·M·V = D with D diagonal, each entry dividing the next, U and V unimodular.

    Pivots are chosen with minimal absolute value to limit coefficient growth.
    Returns (U, D, V).
    """
    a = [row[:] for row in m.entries]
    rows, cols = m.rows, m.cols
    u = [[1 if i == j else 0 for j in range(rows)] for i in range(rows)]
    v = [[1 if i == j else 0 for j in range(cols)] for i in range(cols)]

    def row_op(i, j, q):  # row_i -= q * row_j
        a[i] = [x - q * y for x, y in zip(a[i], a[j])]
        u[i] = [x - q * y for x, y in zip(u[i], u[j])]

    def col_op(i, j, q):  # col_i -= q * col_j
        for r in a:
            r[i] -= q * r[j]
        for r in v:
            r[i] -= q * r[j]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    t = 0
    while True:
        pivot = None
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                x = a[i][j]
                if x and (best is None or abs(x) < best):
                    best = abs(x)
                    pivot = (i, j)
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])
        while True:
            # clear column t then row t by division with remainder
            done = True
            for i in range(t + 1, rows):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    row_op(i, t, q)
                    if a[i][t]:  # remainder smaller than pivot: swap up and retry
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, cols):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    col_op(j, t, q)
                    if a[t][j]:
                        swap_cols(t, j)
                        done = False
            if done and all(a[i][t] == 0 for i in range(t + 1, rows)) \
                    and all(a[t][j] == 0 for j in range(t + 1, cols)):
                break
        # pivot must divide the whole remaining block for the divisibility chain
        offender = None
        for i in range(t + 1, rows):
            for j in range(t + 1, cols):
                if a[i][j] % a[t][t]:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            # fold the offending row into row t and redo this pivot
            a[t] = [x + y for x, y in zip(a[t], a[offender])]
            u[t] = [x + y for x, y in zip(u[t], u[offender])]
            continue
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1
        if t == rows or t == cols:
            break
    d = IntegerMatrix(rows, cols, a)
    return IntegerMatrix(rows, rows, u), d, IntegerMatrix(cols, cols, v)


def invariant_factors(m: IntegerMatrix):
    """Nonzero diagonal entries of the Smith normal form, in divisibility order."""
    _, d, _ = smith_normal_form(m)
    out = []
    for i in range(min(d.rows, d.cols)):
        if d.entries[i][i]:
            out.append(abs(d.entries[i][i]))
    return out


def integer_rank(m: IntegerMatrix) -> int:
    return len(invariant_factors(m))


def rank_mod_p(m: IntegerMatrix, p: int) -> int:
    a = [[x % p for x in row] for row in m.entries]
    rank = 0
    col = 0
    rows, cols = m.rows, m.cols
    for col in range(cols):
        piv = None
        for i in range(rank, rows):
            if a[i][col] % p:
                piv = i
                break
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        inv = pow(a[rank][col], p - 2, p) if p > 2 else a[rank][col]
        a[rank] = [(x * inv) % p for x in a[rank]]
        for i in range(rows):
            if i != rank and a[i][col]:
                f = a[i][col]
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[rank])]
        rank += 1
        if rank == rows:
            break
    return rank


# ---------------------------------------------------------------------------
# chain complexes of nerves
# ---------------------------------------------------------------------------

class ChainComplex:
    """Truncated complex with labelled bases and boundary matrices.

    ``basis[m]`` labels the degree-m generators; ``boundary[m]`` is the
    matrix of ∂_m : C_m -> C_{m-1} (rows indexed by degree m-1, columns by
    degree m).  ∂∂ = 0 is asserted at construction for all computed degrees.
    """

    def __init__(self, max_degree, basis, boundary):
        self.max_degree = max_degree
        self.basis = {m: tuple(basis[m]) for m in range(max_degree + 1)}
        self.boundary = dict(boundary)
        for m in range(1, max_degree + 1):
            b = self.boundary[m]
            if b.rows != len(self.basis[m - 1]) or b.cols != len(self.basis[m]):
                raise ValueError(f"boundary {m} has wrong shape")
        for m in range(2, max_degree + 1):
            prod = self.boundary[m - 1].mul(self.boundary[m])
            if any(any(row) for row in prod.entries):
                raise ValueError(f"∂∂ ≠ 0 between degrees {m} and {m - 2}")

    def rank(self, m):
        return len(self.basis.get(m, ()))

    def boundary_or_zero(self, m):
        if m <= 0 or m > self.max_degree:
            return IntegerMatrix(self.rank(m - 1), self.rank(m))
        return self.boundary[m]


def nerve_chain_complex(d: FiniteCategory, max_degree: int) -> ChainComplex:
    """Normalized chains of the nerve: degree-m basis = strings of m
    composable non-identity morphisms (f_1, ..., f_m), read left to right
    (target of f_i = source of f_{i+1}); faces that compose to an identity
    contribute zero."""
    if max_degree < 0:
        raise ValueError("max_degree must be >= 0")
    basis = {0: tuple(d.objects)}
    for m in range(1, max_degree + 1):
        prev = basis[m - 1]
        cur = []
        if m == 1:
            cur = [(f,) for (f, s, t) in d.morphisms if not d.is_identity(f)]
        else:
            for string in prev:
                end = d.tgt[string[-1]]
                for f in d.out_of[end]:
                    if not d.is_identity(f):
                        cur.append(string + (f,))
        basis[m] = tuple(cur)
    index = {m: {lab: i for i, lab in enumerate(basis[m])} for m in basis}
    boundary = {}
    for m in range(1, max_degree + 1):
        mat = IntegerMatrix(len(basis[m - 1]), len(basis[m]))
        for j, string in enumerate(basis[m]):
            sign = 1
            for i in range(m + 1):
                face = _face(d, string, i)
                if face is not None:
                    mat.entries[index[m - 1][face]][j] += sign
                sign = -sign
        boundary[m] = mat
    return ChainComplex(max_degree, basis, boundary)


def _face(d: FiniteCategory, string, i):
    m = len(string)
    if m == 1:
        return d.src[string[0]] if i == 1 else d.tgt[string[0]]
    if i == 0:
        return string[1:]
    if i == m:
        return string[:-1]
    comp = d.compose_table[(string[i], string[i - 1])]
    if d.is_identity(comp):
        return None  # degenerate face, zero in normalized chains
    return string[:i - 1] + (comp,) + string[i + 1:]


@dataclass(frozen=True)
class HomologyGroup:
    """H_m as betti number plus torsion coefficients in divisibility order."""
    degree: int
    betti: int
    torsion: tuple

    def is_zero(self):
        return self.betti == 0 and not self.torsion

    def __str__(self):
        parts = ["Z"] * self.betti + [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) if parts else "0"


def homology_group(c: ChainComplex, m: int) -> HomologyGroup:
    """H_m = ker ∂_m / im ∂_{m+1}, computed by Smith normal form.

    Requires m + 1 <= max_degree so that the incoming boundary is known.
    """
    if m < 0 or m + 1 > c.max_degree:
        raise ValueError(f"degree {m} outside computed range (max {c.max_degree})")
    n = c.rank(m)
    rank_out = integer_rank(c.boundary_or_zero(m)) if m >= 1 else 0
    incoming = c.boundary_or_zero(m + 1)
    factors = invariant_factors(incoming)
    betti = n - rank_out - len(factors)
    torsion = tuple(f for f in factors if f > 1)
    return HomologyGroup(m, betti, torsion)


def vanishes_all_coefficients(c: ChainComplex, m: int) -> bool:
    """H^m(C; A) = 0 for every abelian group A.

    By universal coefficients, H^m(-; A) = Ext(H_{m-1}, A) ⊕ Hom(H_m, A)
    vanishes for all A exactly when the integral H_m is zero and H_{m-1}
    is torsion-free.  This discharges the "all abelian coefficients"
    quantifier exactly on finite complexes.
    """
    if m < 2:
        raise ValueError("vanishes_all_coefficients needs m >= 2")
    if m + 1 > c.max_degree:
        raise ValueError(f"degree {m} outside computed range (max {c.max_degree})")
    hm = homology_group(c, m)
    hm1 = homology_group(c, m - 1)
    return hm.is_zero() and not hm1.torsion


def _is_prime(p):
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def cohomology_mod_p(c: ChainComplex, m: int, p: int) -> int:
    """dim over F_p of H^m of the dualized complex mod p."""
    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    if m < 0 or m + 1 > c.max_degree:
        raise ValueError(f"degree {m} outside computed range (max {c.max_degree})")
    # delta^m = (∂_{m+1})^T, delta^{m-1} = (∂_m)^T
    n = c.rank(m)
    rank_in = rank_mod_p(c.boundary_or_zero(m + 1), p)
    rank_out = rank_mod_p(c.boundary_or_zero(m), p) if m >= 1 else 0
    return n - rank_in - rank_out


# ---------------------------------------------------------------------------
# induced restriction maps on mod-p cohomology
# ---------------------------------------------------------------------------

def _mod_p_solve_space(a_cols, p, ncols_total, nrows):
    """Row-reduce the matrix with the given columns; return (pivot data, rank)."""
    # columns as vectors of length nrows
    mat = [[a_cols[j][i] % p for j in range(len(a_cols))] for i in range(nrows)]
    pivots = []
    r = 0
    for jcol in range(len(a_cols)):
        piv = None
        for i in range(r, nrows):
            if mat[i][jcol] % p:
                piv = i
                break
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = pow(mat[r][jcol], p - 2, p)
        mat[r] = [(x * inv) % p for x in mat[r]]
        for i in range(nrows):
            if i != r and mat[i][jcol]:
                f = mat[i][jcol]
                mat[i] = [(x - f * y) % p for x, y in zip(mat[i], mat[r])]
        pivots.append(jcol)
        r += 1
    return mat, pivots


def _cocycle_basis(c: ChainComplex, m: int, p: int):
    """Representative cocycles spanning H^m(C; F_p), plus the coboundary columns.

    Cochains in degree m are vectors indexed by basis[m]; the differential is
    the transpose of ∂_{m+1}.
    """
    n = c.rank(m)
    delta = c.boundary_or_zero(m + 1)  # C_{m+1} -> C_m; cochain diff = delta^T
    # kernel of delta^T over F_p: vectors v with v·∂_{m+1} column = 0
    # build matrix with rows = columns of ∂_{m+1} (as linear functionals on cochains)
    rows = []
    for j in range(delta.cols):
        rows.append([delta.entries[i][j] % p for i in range(delta.rows)])
    # solve rows · v = 0
    kernel = _nullspace_mod_p(rows, n, p)
    # coboundaries: image of (∂_m)^T applied to cochains in degree m-1
    cob = []
    if m >= 1:
        dm = c.boundary_or_zero(m)  # C_m -> C_{m-1}
        for i in range(dm.rows):
            cob.append([dm.entries[i][j] % p for j in range(dm.cols)])
    # select kernel vectors spanning the quotient kernel / span(cob)
    basis = []
    span = [row[:] for row in cob]
    rank0 = _rank_rows_mod_p(span, p)
    for v in kernel:
        if _rank_rows_mod_p(span + [v], p) > rank0:
            basis.append(v)
            span.append(v)
            rank0 += 1
    return basis, cob


def _nullspace_mod_p(rows, n, p):
    """Basis of {v in F_p^n : row · v = 0 for each row}."""
    mat = [r[:] for r in rows]
    pivots = {}
    r = 0
    for col in range(n):
        piv = None
        for i in range(r, len(mat)):
            if mat[i][col] % p:
                piv = i
                break
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = pow(mat[r][col], p - 2, p)
        mat[r] = [(x * inv) % p for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][col]:
                f = mat[i][col]
                mat[i] = [(x - f * y) % p for x, y in zip(mat[i], mat[r])]
        pivots[col] = r
        r += 1
    free = [c for c in range(n) if c not in pivots]
    out = []
    for fc in free:
        v = [0] * n
        v[fc] = 1
        for col, rr in pivots.items():
            v[col] = (-mat[rr][fc]) % p
        out.append(v)
    return out


def _rank_rows_mod_p(rows, p):
    if not rows:
        return 0
    m = IntegerMatrix(len(rows), len(rows[0]), rows)
    return rank_mod_p(m, p)


def restriction_cohomology_map(big: ChainComplex, small: ChainComplex, m: int, p: int):
    """Matrix of H^m(big; F_p) -> H^m(small; F_p) induced by restricting
    cochains along a basis-label inclusion of small into big, plus an
    injectivity verdict.

    The degree-m basis labels of ``small`` must be a subset of those of
    ``big`` (as for the nerve of a full subcategory closed under the needed
    composites).
    """
    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    big_index = {lab: i for i, lab in enumerate(big.basis[m])}
    positions = []
    for lab in small.basis[m]:
        if lab not in big_index:
            raise ValueError(f"simplex {lab!r} of the small complex is not in the big one")
        positions.append(big_index[lab])
    h_big, _ = _cocycle_basis(big, m, p)
    h_small, cob_small = _cocycle_basis(small, m, p)
    # express each restricted big cocycle in the H^m(small) basis modulo coboundaries
    matrix = []
    for v in h_big:
        restricted = [v[i] % p for i in positions]
        matrix.append(_coords_in_quotient(restricted, h_small, cob_small, p))
    if not h_big:
        injective = True
    elif not h_small:
        injective = False
    else:
        mat = IntegerMatrix(len(matrix), len(h_small), matrix)
        injective = rank_mod_p(mat, p) == len(h_big)
    result = IntegerMatrix(len(h_small), len(h_big),
                           [[matrix[j][i] for j in range(len(h_big))]
                            for i in range(len(h_small))])
    return result, injective


def _coords_in_quotient(vec, h_basis, cob, p):
    """Coordinates of vec in the cohomology basis, modulo coboundaries."""
    if not h_basis:
        return []
    n = len(vec)
    cols = [list(b) for b in cob] + [list(b) for b in h_basis]
    # solve cols^T x = vec
    aug = [[cols[j][i] % p for j in range(len(cols))] + [vec[i] % p] for i in range(n)]
    ncols = len(cols)
    r = 0
    pivots = []
    for col in range(ncols):
        piv = None
        for i in range(r, n):
            if aug[i][col] % p:
                piv = i
                break
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = pow(aug[r][col], p - 2, p)
        aug[r] = [(x * inv) % p for x in aug[r]]
        for i in range(n):
            if i != r and aug[i][col]:
                f = aug[i][col]
                aug[i] = [(x - f * y) % p for x, y in zip(aug[i], aug[r])]
        pivots.append(col)
        r += 1
    for i in range(r, n):
        if aug[i][ncols] % p:
            raise ValueError("vector not in the span: not a cocycle class?")
    x = [0] * ncols
    for rr, col in enumerate(pivots):
        x[col] = aug[rr][ncols] % p
    return [x[len(cob) + k] for k in range(len(h_basis))]
