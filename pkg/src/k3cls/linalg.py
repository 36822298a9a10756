"""Exact integer and rational linear algebra.

Matrices are plain lists of rows.  Entries are Python ints (or
``fractions.Fraction`` for the rational helpers), so nothing ever overflows.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

from .errors import NotSquareError, SingularMatrixError

IntMatrix = list[list[int]]
RatMatrix = list[list[Fraction]]


def to_matrix(rows: Sequence[Sequence[int]]) -> IntMatrix:
    return [list(map(int, r)) for r in rows]


def shape(m: Sequence[Sequence]) -> tuple[int, int]:
    if not m:
        return 0, 0
    return len(m), len(m[0])


def identity(n: int) -> IntMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def zeros(r: int, c: int) -> IntMatrix:
    return [[0] * c for _ in range(r)]


def transpose(m: Sequence[Sequence]) -> list[list]:
    return [list(col) for col in zip(*m)] if m else []


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(a: Sequence[Sequence], v: Sequence) -> list:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def freeze(m: Sequence[Sequence]) -> tuple[tuple, ...]:
    return tuple(tuple(r) for r in m)


def block_diag(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> IntMatrix:
    na, nb = len(a), len(b)
    out = zeros(na + nb, na + nb)
    for i in range(na):
        out[i][:na] = list(a[i])
    for i in range(nb):
        out[na + i][na:] = list(b[i])
    return out


def det(m: Sequence[Sequence[int]]) -> int:
    """Determinant by fraction-free Bareiss elimination."""
    n, c = shape(m)
    if n != c:
        raise NotSquareError(f"determinant of a {n}x{c} matrix")
    if n == 0:
        return 1
    a = [list(r) for r in m]
    sign = 1
    prev = 1
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


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def hnf(m: Sequence[Sequence[int]]) -> tuple[IntMatrix, IntMatrix]:
    """Row Hermite normal form.

    Returns ``(H, U)`` with ``U`` unimodular and ``U @ M == H``.  ``H`` is in
    row echelon form with positive pivots, entries above each pivot reduced
    into ``[0, pivot)``, and zero rows at the bottom.
    """
    rows, cols = shape(m)
    h = [list(r) for r in m]
    u = identity(rows)
    piv_row = 0
    for col in range(cols):
        if piv_row >= rows:
            break
        # gcd-combine every lower row into the pivot row
        for i in range(piv_row + 1, rows):
            if h[i][col] == 0:
                continue
            a, b = h[piv_row][col], h[i][col]
            g, x, y = _xgcd(a, b)
            p, q = a // g, b // g
            r1 = [x * s + y * t for s, t in zip(h[piv_row], h[i])]
            r2 = [-q * s + p * t for s, t in zip(h[piv_row], h[i])]
            h[piv_row], h[i] = r1, r2
            u1 = [x * s + y * t for s, t in zip(u[piv_row], u[i])]
            u2 = [-q * s + p * t for s, t in zip(u[piv_row], u[i])]
            u[piv_row], u[i] = u1, u2
        pivot = h[piv_row][col]
        if pivot == 0:
            continue
        if pivot < 0:
            h[piv_row] = [-x for x in h[piv_row]]
            u[piv_row] = [-x for x in u[piv_row]]
            pivot = -pivot
        for i in range(piv_row):
            f = h[i][col] // pivot
            if f:
                h[i] = [s - f * t for s, t in zip(h[i], h[piv_row])]
                u[i] = [s - f * t for s, t in zip(u[i], u[piv_row])]
        piv_row += 1
    return h, u


def snf(m: Sequence[Sequence[int]]) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Smith normal form ``(S, U, V)`` with ``U @ M @ V == S``.

    ``S`` is diagonal with nonnegative entries, each dividing the next.
    """
    rows, cols = shape(m)
    s = [list(r) for r in m]
    u = identity(rows)
    v = identity(cols)

    def swap_rows(i, j):
        s[i], s[j] = s[j], s[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in s:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def row_combo(i, j, x, y, p, q):
        # row_i <- x*row_i + y*row_j ; row_j <- -q*row_i + p*row_j
        for mat in (s, u):
            ri, rj = mat[i], mat[j]
            mat[i] = [x * a + y * b for a, b in zip(ri, rj)]
            mat[j] = [-q * a + p * b for a, b in zip(ri, rj)]

    def col_combo(i, j, x, y, p, q):
        for mat in (s, v):
            for r in mat:
                a, b = r[i], r[j]
                r[i], r[j] = x * a + y * b, -q * a + p * b

    t = 0
    while t < min(rows, cols):
        # pick the smallest nonzero entry in the trailing block as pivot
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                if s[i][j] and (best is None or abs(s[i][j]) < abs(s[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        done = False
        while not done:
            done = True
            for i in range(t + 1, rows):
                if s[i][t]:
                    a, b = s[t][t], s[i][t]
                    if b % a == 0:
                        row_combo(t, i, 1, 0, 1, b // a)
                    else:
                        g, x, y = _xgcd(a, b)
                        row_combo(t, i, x, y, a // g, b // g)
            for j in range(t + 1, cols):
                if s[t][j]:
                    a, b = s[t][t], s[t][j]
                    if b % a == 0:
                        col_combo(t, j, 1, 0, 1, b // a)
                    else:
                        g, x, y = _xgcd(a, b)
                        col_combo(t, j, x, y, a // g, b // g)
                        done = False
            if not done:
                continue
            # enforce divisibility of the trailing block
            d = s[t][t]
            for i in range(t + 1, rows):
                for j in range(t + 1, cols):
                    if s[i][j] % d:
                        for mat in (s, u):
                            mat[t] = [a + b for a, b in zip(mat[t], mat[i])]
                        done = False
                        break
                if not done:
                    break
        if s[t][t] < 0:
            s[t] = [-a for a in s[t]]
            u[t] = [-a for a in u[t]]
        t += 1
    return s, u, v


def invariant_factors(m: Sequence[Sequence[int]]) -> list[int]:
    s, _, _ = snf(m)
    return [s[i][i] for i in range(min(shape(s)))]


def rank(m: Sequence[Sequence[int]]) -> int:
    h, _ = hnf(m)
    return sum(1 for r in h if any(r))


def kernel_saturated(m: Sequence[Sequence[int]], ncols: int | None = None) -> IntMatrix:
    """Saturated basis (as rows) of ``{v in Z^n : M v = 0}``.

    The rows come from the unimodular transform of an HNF computation, so
    they extend to a basis of ``Z^n``; the result is HNF-reduced for a
    canonical presentation.
    """
    n = len(m[0]) if m else (ncols or 0)
    if not m:
        return identity(n)
    mt = transpose(m)
    h, u = hnf(mt)
    basis = [u[i] for i in range(n) if not any(h[i])]
    if not basis:
        return []
    kb, _ = hnf(basis)
    return [r for r in kb if any(r)]


def solve_rational(a: Sequence[Sequence[int]], b: Sequence) -> list:
    """Solve ``A x = b`` exactly over the rationals.

    ``b`` is either a vector or a matrix (list of rows); the result has the
    same shape.  Raises :class:`SingularMatrixError` for singular ``A``.
    """
    n, c = shape(a)
    if n != c:
        raise NotSquareError(f"solve with a {n}x{c} matrix")
    is_vec = not b or not isinstance(b[0], (list, tuple))
    rhs = [[Fraction(x)] for x in b] if is_vec else [[Fraction(x) for x in r] for r in b]
    k = len(rhs[0]) if rhs else 0
    aug = [[Fraction(x) for x in a[i]] + rhs[i] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise SingularMatrixError("matrix is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    sol = [row[n:] for row in aug]
    return [r[0] for r in sol] if is_vec else sol


def inverse_rational(a: Sequence[Sequence[int]]) -> RatMatrix:
    return solve_rational(a, identity(len(a)))


def common_denominator(rows: Sequence[Sequence[Fraction]]) -> int:
    d = 1
    for r in rows:
        for x in r:
            x = Fraction(x)
            d = d * x.denominator // gcd(d, x.denominator)
    return d


def lattice_basis(rows: Sequence[Sequence]) -> list[list[Fraction]]:
    """Basis (rows) of the Z-span of rational row vectors, in HNF order."""
    if not rows:
        return []
    d = common_denominator(rows)
    scaled = [[int(Fraction(x) * d) for x in r] for r in rows]
    h, _ = hnf(scaled)
    return [[Fraction(x, d) for x in r] for r in h if any(r)]


def charpoly(m: Sequence[Sequence[int]]) -> list[int]:
    """Coefficients of ``det(x I - M)``, highest degree first (Faddeev-LeVerrier)."""
    n = len(m)
    coeffs = [Fraction(1)]
    a = [[Fraction(x) for x in r] for r in m]
    mk = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{k-1} I ; c_k = -tr(A M_k)/k
        prod = matmul(a, mk) if k > 1 else [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            prod[i][i] += coeffs[-1]
        mk = prod
        am = matmul(a, mk)
        coeffs.append(-sum(am[i][i] for i in range(n)) / k)
    return [int(c) for c in coeffs]
