"""Univariate polynomials over Q and Smith normal form over Q[t].

Q[t] is a euclidean domain, so module questions about lattices reduce to
elementary row/column operations with division by degree.  The transform
matrices are tracked and unimodular by construction.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

__all__ = ["UPoly", "smith_normal_form", "upoly_kernel", "solve_in_span", "upoly_det"]


class UPoly:
    """Dense univariate polynomial with Fraction coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence):
        cs = [Fraction(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def zero(cls) -> "UPoly":
        return cls(())

    @classmethod
    def one(cls) -> "UPoly":
        return cls((1,))

    @classmethod
    def const(cls, c) -> "UPoly":
        return cls((c,))

    @classmethod
    def t(cls) -> "UPoly":
        return cls((0, 1))

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self) -> Fraction:
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def is_unit(self) -> bool:
        return self.degree == 0

    def __add__(self, other: "UPoly") -> "UPoly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return UPoly([x + (b[i] if i < len(b) else 0) for i, x in enumerate(a)])

    def __neg__(self) -> "UPoly":
        return UPoly([-c for c in self.coeffs])

    def __sub__(self, other: "UPoly") -> "UPoly":
        return self + (-other)

    def __mul__(self, other: "UPoly") -> "UPoly":
        if self.is_zero() or other.is_zero():
            return UPoly.zero()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return UPoly(out)

    def scale(self, c) -> "UPoly":
        return UPoly([x * Fraction(c) for x in self.coeffs])

    def __pow__(self, n: int) -> "UPoly":
        r = UPoly.one()
        b = self
        while n:
            if n & 1:
                r = r * b
            b = b * b
            n >>= 1
        return r

    def __divmod__(self, other: "UPoly") -> tuple["UPoly", "UPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        q = [Fraction(0)] * max(0, len(self.coeffs) - len(other.coeffs) + 1)
        r = list(self.coeffs)
        dlo = other.degree
        lo = other.lead
        while len(r) - 1 >= dlo and any(r):
            dr = len(r) - 1
            while dr >= 0 and not r[dr]:
                dr -= 1
            if dr < dlo:
                break
            f = r[dr] / lo
            q[dr - dlo] = f
            for i, c in enumerate(other.coeffs):
                r[dr - dlo + i] -= f * c
        return UPoly(q), UPoly(r)

    def __mod__(self, other: "UPoly") -> "UPoly":
        return divmod(self, other)[1]

    def div_exact(self, other: "UPoly") -> "UPoly":
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ValueError("inexact univariate division")
        return q

    def monic(self) -> "UPoly":
        if self.is_zero():
            return self
        return self.scale(1 / self.lead)

    def gcd(self, other: "UPoly") -> "UPoly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def derivative(self) -> "UPoly":
        return UPoly([i * c for i, c in enumerate(self.coeffs)][1:])

    def eval(self, x) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other):
        return isinstance(other, UPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def to_string(self, var: str = "t") -> str:
        if self.is_zero():
            return "0"
        bits = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            if k == 0:
                mon = str(abs(c))
            else:
                head = "" if abs(c) == 1 else f"{abs(c)}*"
                mon = f"{head}{var}" + (f"^{k}" if k > 1 else "")
            if not bits:
                bits.append(("-" if c < 0 else "") + mon)
            else:
                bits.append(("- " if c < 0 else "+ ") + mon)
        return " ".join(bits)

    def __str__(self):
        return self.to_string()

    __repr__ = __str__


def _eye(n: int) -> list[list[UPoly]]:
    return [[UPoly.one() if i == j else UPoly.zero() for j in range(n)] for i in range(n)]


def smith_normal_form(M: Sequence[Sequence[UPoly]]):
    """Return (U, D, V) with D = U*M*V diagonal, monic, in divisibility order.

    U and V are unimodular (products of elementary operations).
    """
    A = [list(row) for row in M]
    n = len(A)
    m = len(A[0]) if n else 0
    U = _eye(n)
    V = _eye(m)

    def row_op(i, k, q):  # row_i -= q*row_k
        A[i] = [a - q * b for a, b in zip(A[i], A[k])]
        U[i] = [a - q * b for a, b in zip(U[i], U[k])]

    def col_op(j, k, q):  # col_j -= q*col_k
        for r in range(n):
            A[r][j] = A[r][j] - q * A[r][k]
        for r in range(m):
            V[r][j] = V[r][j] - q * V[r][k]

    def row_swap(i, k):
        A[i], A[k] = A[k], A[i]
        U[i], U[k] = U[k], U[i]

    def col_swap(j, k):
        for r in range(n):
            A[r][j], A[r][k] = A[r][k], A[r][j]
        for r in range(m):
            V[r][j], V[r][k] = V[r][k], V[r][j]

    def row_scale(i, c):
        A[i] = [a.scale(c) for a in A[i]]
        U[i] = [a.scale(c) for a in U[i]]

    t = 0
    while t < min(n, m):
        best = None
        for i in range(t, n):
            for j in range(t, m):
                if A[i][j] and (best is None or A[i][j].degree < A[best[0]][best[1]].degree):
                    best = (i, j)
        if best is None:
            break
        if best != (t, t):
            if best[0] != t:
                row_swap(t, best[0])
            if best[1] != t:
                col_swap(t, best[1])
        while True:
            dirty = False
            for i in range(t + 1, n):
                if A[i][t]:
                    q, r = divmod(A[i][t], A[t][t])
                    row_op(i, t, q)
                    if r:
                        row_swap(t, i)
                        dirty = True
            for j in range(t + 1, m):
                if A[t][j]:
                    q, r = divmod(A[t][j], A[t][t])
                    col_op(j, t, q)
                    if r:
                        col_swap(t, j)
                        dirty = True
            if dirty:
                continue
            if any(A[i][t] for i in range(t + 1, n)) or any(A[t][j] for j in range(t + 1, m)):
                continue
            stuck = None
            for i in range(t + 1, n):
                for j in range(t + 1, m):
                    if A[i][j] and not (A[i][j] % A[t][t]).is_zero():
                        stuck = i
                        break
                if stuck is not None:
                    break
            if stuck is None:
                break
            row_op(t, stuck, UPoly.const(-1))  # row_t += row_stuck
        row_scale(t, 1 / A[t][t].lead)
        t += 1
    return U, A, V


def upoly_kernel(M: Sequence[Sequence[UPoly]]) -> list[list[UPoly]]:
    """Basis of the right kernel of M over Q[t] (columns)."""
    n = len(M)
    m = len(M[0]) if n else 0
    if m == 0:
        return []
    if n == 0:
        return [[UPoly.one() if i == j else UPoly.zero() for i in range(m)] for j in range(m)]
    U, D, V = smith_normal_form(M)
    rank = sum(1 for i in range(min(n, m)) if D[i][i])
    return [[V[r][j] for r in range(m)] for j in range(rank, m)]


def solve_in_span(B: Sequence[Sequence[UPoly]], G: Sequence[Sequence[UPoly]]):
    """Solve B*C = G over Q[t]; returns C or None when G is not in the span."""
    n = len(B)
    k = len(B[0]) if n else 0
    s = len(G[0]) if G else 0
    U, D, V = smith_normal_form(B)
    UG = [[sum((U[i][r] * G[r][j] for r in range(n)), UPoly.zero()) for j in range(s)]
          for i in range(n)]
    Y = [[UPoly.zero() for _ in range(s)] for _ in range(k)]
    for i in range(n):
        d = D[i][i] if i < min(n, k) else UPoly.zero()
        for j in range(s):
            if d.is_zero() or i >= k:
                if UG[i][j]:
                    return None
            else:
                q, r = divmod(UG[i][j], d)
                if r:
                    return None
                Y[i][j] = q
    return [[sum((V[i][r] * Y[r][j] for r in range(k)), UPoly.zero()) for j in range(s)]
            for i in range(k)]


def upoly_det(M: Sequence[Sequence[UPoly]]) -> UPoly:
    """Fraction-free Bareiss determinant (exact divisions in Q[t])."""
    n = len(M)
    if n == 0:
        return UPoly.one()
    A = [list(row) for row in M]
    sign = 1
    prev = UPoly.one()
    for k in range(n - 1):
        if A[k][k].is_zero():
            piv = next((i for i in range(k + 1, n) if A[i][k]), None)
            if piv is None:
                return UPoly.zero()
            A[k], A[piv] = A[piv], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[k][k] * A[i][j] - A[i][k] * A[k][j]).div_exact(prev)
            A[i][k] = UPoly.zero()
        prev = A[k][k]
    d = A[n - 1][n - 1]
    return d if sign == 1 else -d
