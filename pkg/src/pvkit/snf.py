"""Integer matrix normal forms with carried transforms.

Row-style Hermite form canonicalizes relation lattices (pivots positive,
entries below a pivot zero, entries above reduced into [0, pivot)); Smith
form diagonalizes a lattice for the component-splitting step. Both return
the unimodular transforms so exponent-vector bookkeeping (witness products,
variable changes) stays exact.
"""
from __future__ import annotations

from fractions import Fraction

from .errors import InternalInvariantError


def exgcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, s, t) with s*a + t*b = g = gcd(a, b) >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        qt = old_r // r
        old_r, r = r, old_r - qt * r
        old_s, s = s, old_s - qt * s
        old_t, t = t, old_t - qt * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def identity(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def matmul(a: list[list[int]], b: list[list[int]]) -> list[list[int]]:
    if not a or not b:
        return []
    rows, inner, cols = len(a), len(b), len(b[0])
    out = [[0] * cols for _ in range(rows)]
    for i in range(rows):
        ai = a[i]
        for k in range(inner):
            c = ai[k]
            if c == 0:
                continue
            bk = b[k]
            oi = out[i]
            for j in range(cols):
                oi[j] += c * bk[j]
    return out


def int_det(a: list[list[int]]) -> int:
    n = len(a)
    if n == 0:
        return 1
    m = [[Fraction(v) for v in row] for row in a]
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            return 0
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for r in range(col + 1, n):
            f = m[r][col] * inv
            if f == 0:
                continue
            for c in range(col, n):
                m[r][c] -= f * m[col][c]
    if det.denominator != 1:
        raise InternalInvariantError("integer determinant came out fractional")
    return int(det)


def hermite_normal_form(rows: list[list[int]]) -> tuple[list[list[int]], list[list[int]]]:
    """Row-style Hermite form of the lattice spanned by ``rows``.

    Returns (H, U) with U unimodular, U @ rows = [H; 0...]: H has one row per
    pivot, positive pivots, zeros below each pivot, and entries above each
    pivot reduced into [0, pivot). Zero input rows are absorbed; H contains
    no zero rows.
    """
    if not rows:
        return [], []
    work = [list(r) for r in rows]
    n = len(work)
    m = len(work[0])
    u = identity(n)
    r = 0
    pivots: list[int] = []
    for col in range(m):
        # combine rows r..n-1 to leave a single positive entry at (r, col)
        nz = [i for i in range(r, n) if work[i][col] != 0]
        if not nz:
            continue
        lead = nz[0]
        for i in nz[1:]:
            g, s, t = exgcd(work[lead][col], work[i][col])
            a_over, b_over = work[lead][col] // g, work[i][col] // g
            row_lead = [s * work[lead][j] + t * work[i][j] for j in range(m)]
            row_i = [-b_over * work[lead][j] + a_over * work[i][j] for j in range(m)]
            work[lead], work[i] = row_lead, row_i
            u_lead = [s * u[lead][j] + t * u[i][j] for j in range(n)]
            u_i = [-b_over * u[lead][j] + a_over * u[i][j] for j in range(n)]
            u[lead], u[i] = u_lead, u_i
        if lead != r:
            work[lead], work[r] = work[r], work[lead]
            u[lead], u[r] = u[r], u[lead]
        if work[r][col] < 0:
            work[r] = [-v for v in work[r]]
            u[r] = [-v for v in u[r]]
        # reduce the entries above the new pivot into [0, pivot)
        p = work[r][col]
        for i in range(r):
            c = work[i][col] // p
            if c != 0:
                work[i] = [work[i][j] - c * work[r][j] for j in range(m)]
                u[i] = [u[i][j] - c * u[r][j] for j in range(n)]
        pivots.append(col)
        r += 1
        if r == n:
            break
    h = [work[i] for i in range(r)]
    return h, u


def hnf_pivot_columns(h: list[list[int]]) -> list[int]:
    cols = []
    for row in h:
        for j, v in enumerate(row):
            if v != 0:
                cols.append(j)
                break
    return cols


def hnf_reduce(h: list[list[int]], v: list[int]) -> tuple[list[int], list[int]]:
    """Reduce v against HNF rows: returns (coeffs, residue) with
    v = sum coeffs[i] * h[i] + residue, and residue's pivot-column entries
    lying in [0, pivot). Membership in the lattice <=> residue == 0."""
    res = list(v)
    coeffs = []
    for row, pcol in zip(h, hnf_pivot_columns(h)):
        c = res[pcol] // row[pcol]
        coeffs.append(c)
        if c != 0:
            res = [res[j] - c * row[j] for j in range(len(res))]
    return coeffs, res


def in_lattice(h: list[list[int]], v: list[int]) -> bool:
    if not h:
        return all(c == 0 for c in v)
    _, res = hnf_reduce(h, v)
    return all(c == 0 for c in res)


def unimodular_inverse(m: list[list[int]]) -> list[list[int]]:
    """Exact inverse of a unimodular integer matrix, again integral."""
    n = len(m)
    a = [[Fraction(v) for v in row]
         + [Fraction(1 if i == j else 0) for j in range(n)]
         for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise InternalInvariantError("singular matrix has no inverse")
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [v * inv for v in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [vr - f * vc for vr, vc in zip(a[r], a[col])]
    out = []
    for row in a:
        vals = row[n:]
        if any(v.denominator != 1 for v in vals):
            raise InternalInvariantError("inverse is not integral; input was not unimodular")
        out.append([int(v) for v in vals])
    return out


def smith_normal_form(a: list[list[int]]) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """(D, U, V) with U @ a @ V = D diagonal, d1 | d2 | ..., U, V unimodular."""
    if not a:
        return [], [], []
    d = [list(r) for r in a]
    n, m = len(d), len(d[0])
    u = identity(n)
    v = identity(m)

    def row_op(i, k, s, t, bo, ao):
        # (row_i, row_k) <- (s*row_i + t*row_k, -bo*row_i + ao*row_k)
        for mat, width in ((d, m), (u, n)):
            ri = [s * mat[i][j] + t * mat[k][j] for j in range(width)]
            rk = [-bo * mat[i][j] + ao * mat[k][j] for j in range(width)]
            mat[i], mat[k] = ri, rk

    def col_op(i, k, s, t, bo, ao):
        for mat, height in ((d, n), (v, m)):
            for r in range(height):
                ci = s * mat[r][i] + t * mat[r][k]
                ck = -bo * mat[r][i] + ao * mat[r][k]
                mat[r][i], mat[r][k] = ci, ck

    def swap_rows(i, k):
        d[i], d[k] = d[k], d[i]
        u[i], u[k] = u[k], u[i]

    def swap_cols(i, k):
        for r in range(n):
            d[r][i], d[r][k] = d[r][k], d[r][i]
        for r in range(m):
            v[r][i], v[r][k] = v[r][k], v[r][i]

    def clear_at(i: int) -> None:
        # Alternately clear column i below and row i to the right; each
        # pass may dirty the other. When the pivot divides the entry we do
        # a plain elimination (pivot row/column untouched); the exgcd op is
        # reserved for entries the pivot does not divide, where it strictly
        # shrinks |pivot| -- that is what makes the loop terminate instead
        # of ping-ponging on Bezout pairs like exgcd(1, 1) = (1, 0, 1).
        dirty = True
        while dirty:
            dirty = False
            for r in range(i + 1, n):
                if d[r][i] != 0:
                    if d[r][i] % d[i][i] == 0:
                        f = d[r][i] // d[i][i]
                        d[r] = [d[r][j] - f * d[i][j] for j in range(m)]
                        u[r] = [u[r][j] - f * u[i][j] for j in range(n)]
                    else:
                        g, s, t = exgcd(d[i][i], d[r][i])
                        row_op(i, r, s, t, d[r][i] // g, d[i][i] // g)
                        dirty = True
            for c in range(i + 1, m):
                if d[i][c] != 0:
                    if d[i][c] % d[i][i] == 0:
                        f = d[i][c] // d[i][i]
                        for r in range(n):
                            d[r][c] -= f * d[r][i]
                        for r in range(m):
                            v[r][c] -= f * v[r][i]
                    else:
                        g, s, t = exgcd(d[i][i], d[i][c])
                        col_op(i, c, s, t, d[i][c] // g, d[i][i] // g)
                        dirty = True

    rank_bound = min(n, m)
    for i in range(rank_bound):
        # find a nonzero pivot in the trailing submatrix
        found = None
        for r in range(i, n):
            for c in range(i, m):
                if d[r][c] != 0:
                    found = (r, c)
                    break
            if found:
                break
        if not found:
            break
        r, c = found
        if r != i:
            swap_rows(i, r)
        if c != i:
            swap_cols(i, c)
        clear_at(i)

    # divisibility chain: fold any offending later diagonal into position i
    # by adding column j into column i and re-clearing; the block ends as
    # diag(gcd, lcm) and nothing outside rows/cols {i, j} moves
    changed = True
    while changed:
        changed = False
        for i in range(rank_bound - 1):
            if d[i][i] == 0:
                continue
            for j in range(i + 1, rank_bound):
                if d[j][j] % d[i][i] != 0:
                    for r in range(n):
                        d[r][i] += d[r][j]
                    for r in range(m):
                        v[r][i] += v[r][j]
                    clear_at(i)
                    changed = True

    for i in range(rank_bound):
        if d[i][i] < 0:
            for j in range(m):
                d[i][j] = -d[i][j]
            for j in range(n):
                u[i][j] = -u[i][j]
    return d, u, v


def invariant_factors(a: list[list[int]]) -> list[int]:
    """Diagonal of the Smith form, nonzero entries only."""
    d, _, _ = smith_normal_form(a)
    out = []
    for i in range(min(len(d), len(d[0]) if d else 0)):
        if d[i][i] != 0:
            out.append(d[i][i])
    return out


def lattice_index(sub: list[list[int]], sup: list[list[int]]) -> int:
    """Index [sup : sub] for sublattices of equal rank, both given as
    generating rows; raises if sub is not inside sup or ranks differ."""
    h_sup, _ = hermite_normal_form(sup)
    h_sub, _ = hermite_normal_form(sub)
    if len(h_sub) != len(h_sup):
        raise InternalInvariantError("lattice index needs equal ranks")
    coords = []
    for row in h_sub:
        cf, res = hnf_reduce(h_sup, row)
        if any(res):
            raise InternalInvariantError("claimed sublattice is not contained")
        coords.append(cf)
    det = int_det(coords)
    if det == 0:
        raise InternalInvariantError("rank collapsed in index computation")
    return abs(det)
