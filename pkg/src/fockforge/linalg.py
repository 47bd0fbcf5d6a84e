"""Dense exact linear algebra over any field-like scalar type.

Works uniformly for `Fraction` and `RationalFunction` entries: scalars
need +, -, *, /, unary minus, equality and truthiness (zero test).
Matrices are lists of row lists.
"""

from __future__ import annotations

__all__ = [
    "SingularMatrixError",
    "mat_mul",
    "mat_vec",
    "mat_add",
    "mat_sub",
    "mat_scale",
    "identity",
    "zeros",
    "transpose",
    "mat_inv",
    "det",
    "rref",
    "rank",
    "kernel",
    "solve",
    "is_zero_matrix",
]


class SingularMatrixError(ValueError):
    def __init__(self, pivot_info: str = ""):
        super().__init__(f"singular matrix{': ' + pivot_info if pivot_info else ''}")
        self.pivot_info = pivot_info


def mat_mul(A, B):
    n, k, m = len(A), len(B), len(B[0])
    assert len(A[0]) == k
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = A[i][0] * B[0][j]
            for t in range(1, k):
                acc = acc + A[i][t] * B[t][j]
            row.append(acc)
        out.append(row)
    return out


def mat_vec(A, v):
    out = []
    for row in A:
        acc = row[0] * v[0]
        for t in range(1, len(v)):
            acc = acc + row[t] * v[t]
        out.append(acc)
    return out


def mat_add(A, B):
    return [[x + y for x, y in zip(r, s)] for r, s in zip(A, B)]


def mat_sub(A, B):
    return [[x - y for x, y in zip(r, s)] for r, s in zip(A, B)]


def mat_scale(A, c):
    return [[x * c for x in r] for r in A]


def identity(n, one):
    zero = one - one
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def zeros(n, m, one):
    zero = one - one
    return [[zero for _ in range(m)] for _ in range(n)]


def transpose(A):
    return [list(col) for col in zip(*A)]


def is_zero_matrix(A) -> bool:
    return all(not x for row in A for x in row)


def mat_inv(A, one):
    """Gauss-Jordan inverse; raises SingularMatrixError with the vanishing pivot."""
    n = len(A)
    M = [list(r) + list(i) for r, i in zip(A, identity(n, one))]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col]), None)
        if piv is None:
            raise SingularMatrixError(f"pivot column {col}")
        M[col], M[piv] = M[piv], M[col]
        inv_p = one / M[col][col]
        M[col] = [x * inv_p for x in M[col]]
        for r in range(n):
            if r != col and M[r][col]:
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return [row[n:] for row in M]


def det(A, one):
    n = len(A)
    M = [list(r) for r in A]
    acc = one
    sign = 1
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col]), None)
        if piv is None:
            return one - one
        if piv != col:
            M[col], M[piv] = M[piv], M[col]
            sign = -sign
        p = M[col][col]
        acc = acc * p
        inv_p = one / p
        for r in range(col + 1, n):
            if M[r][col]:
                f = M[r][col] * inv_p
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return acc if sign == 1 else (one - one) - acc


def rref(A, one):
    """Reduced row echelon form; returns (R, pivot_columns)."""
    if not A:
        return [], []
    M = [list(r) for r in A]
    n, m = len(M), len(M[0])
    pivots = []
    row = 0
    for col in range(m):
        piv = next((r for r in range(row, n) if M[r][col]), None)
        if piv is None:
            continue
        M[row], M[piv] = M[piv], M[row]
        inv_p = one / M[row][col]
        M[row] = [x * inv_p for x in M[row]]
        for r in range(n):
            if r != row and M[r][col]:
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[row])]
        pivots.append(col)
        row += 1
        if row == n:
            break
    return M, pivots


def rank(A, one) -> int:
    if not A or not A[0]:
        return 0
    return len(rref(A, one)[1])


def kernel(A, one):
    """Basis of the right null space of A (list of column vectors)."""
    if not A:
        return []
    m = len(A[0])
    R, pivots = rref(A, one)
    zero = one - one
    free = [c for c in range(m) if c not in pivots]
    basis = []
    for fc in free:
        v = [zero] * m
        v[fc] = one
        for r, pc in enumerate(pivots):
            v[pc] = zero - R[r][fc]
        basis.append(v)
    return basis


def solve(A, b, one):
    """Solve A x = b for square invertible A; b a vector."""
    return mat_vec(mat_inv(A, one), b)


def poly_det(A):
    """Fraction-free Bareiss determinant for entries supporting div_exact."""
    n = len(A)
    if n == 0:
        raise ValueError("empty matrix")
    spec = A[0][0].spec
    from .exact import Poly

    M = [list(row) for row in A]
    sign = 1
    prev = Poly.const(spec, 1)
    for k in range(n - 1):
        if M[k][k].is_zero():
            piv = next((i for i in range(k + 1, n) if not M[i][k].is_zero()), None)
            if piv is None:
                return Poly.zero(spec)
            M[k], M[piv] = M[piv], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[k][k] * M[i][j] - M[i][k] * M[k][j]).div_exact(prev)
            M[i][k] = Poly.zero(spec)
        prev = M[k][k]
    d = M[n - 1][n - 1]
    return d if sign == 1 else -d


def poly_adjugate(A):
    """Adjugate matrix (transpose of cofactors) of a square Poly matrix."""
    n = len(A)
    spec = A[0][0].spec
    from .exact import Poly

    if n == 1:
        return [[Poly.const(spec, 1)]]
    adj = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [[A[r][c] for c in range(n) if c != j] for r in range(n) if r != i]
            m = poly_det(minor)
            adj[j][i] = m if (i + j) % 2 == 0 else -m
    return adj
