"""Exact-rational linear algebra over Fraction entries.

Only what the positivity module needs: determinants, minors, and inverses of
unit triangular matrices, all sign-exact.  Matrices are lists of lists of
``fractions.Fraction`` (or ints).
"""

from fractions import Fraction


def as_fraction_matrix(rows):
    return [[Fraction(x) for x in row] for row in rows]


def is_exact_matrix(M):
    """True when every entry is an int or Fraction (no floats)."""
    try:
        return all(isinstance(x, (int, Fraction)) for row in M for x in row)
    except TypeError:
        return False


def mat_mul(A, B):
    n, m, p = len(A), len(B), len(B[0])
    return [[sum(A[i][k] * B[k][j] for k in range(m)) for j in range(p)] for i in range(n)]


def det(M):
    """Exact determinant by fraction-preserving Gaussian elimination."""
    n = len(M)
    a = [[Fraction(x) for x in row] for row in M]
    sign = 1
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            sign = -sign
        for r in range(col + 1, n):
            if a[r][col] != 0:
                f = a[r][col] / a[col][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    out = Fraction(sign)
    for i in range(n):
        out *= a[i][i]
    return out


def minor(M, rows, cols):
    return det([[M[i][j] for j in cols] for i in rows])


def inv_unitriangular(U):
    """Inverse of a unit upper-triangular Fraction matrix (exact)."""
    n = len(U)
    inv = [[Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)]
    # back-substitution column by column
    for j in range(n):
        for i in range(j - 1, -1, -1):
            s = sum(U[i][k] * inv[k][j] for k in range(i + 1, j + 1))
            inv[i][j] = -s
    return inv
