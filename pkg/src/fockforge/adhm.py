"""Quiver description of framed sheaves on the plane: moment map,
stability, torus fixed points from partitions, the monad complex, and
factorization-morphism spectra.

All matrices are exact rational; spectra report rational roots with
multiplicity plus any rational-root-free factors symbolically.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exact import Poly, VarSpec
from .linalg import identity, kernel, mat_mul, rref
from .smith import UPoly

__all__ = [
    "AdhmData",
    "Spectrum",
    "NonRationalSpectrumError",
    "moment_map",
    "is_stable",
    "fixed_point_data",
    "direct_sum",
    "monad_matrices",
    "ba_residual",
    "char_poly",
    "spectrum_projection",
    "support_cycle",
    "random_adhm",
    "partition_tuples",
]

_ONE = Fraction(1)


def _fm(rows) -> list[list[Fraction]]:
    return [[Fraction(x) for x in row] for row in rows]


@dataclass
class AdhmData:
    """Quadruple (B1, B2, I, J) with dim V = d, dim W = r."""

    d: int
    r: int
    B1: list[list[Fraction]]
    B2: list[list[Fraction]]
    I: list[list[Fraction]]
    J: list[list[Fraction]]

    def __post_init__(self):
        self.B1, self.B2 = _fm(self.B1), _fm(self.B2)
        self.I, self.J = _fm(self.I), _fm(self.J)
        d, r = self.d, self.r
        if d:
            if len(self.B1) != d or any(len(row) != d for row in self.B1):
                raise ValueError("B1 must be d x d")
            if len(self.B2) != d or any(len(row) != d for row in self.B2):
                raise ValueError("B2 must be d x d")
        if len(self.I) != d or (d and any(len(row) != r for row in self.I)):
            raise ValueError("I must be d x r")
        if len(self.J) != r or any(len(row) != d for row in self.J):
            raise ValueError("J must be r x d")

    @classmethod
    def zero(cls, d: int, r: int) -> "AdhmData":
        z = [[0] * d for _ in range(d)]
        return cls(d, r, z, z, [[0] * r for _ in range(d)], [[0] * d for _ in range(r)])

    def to_jsonable(self) -> dict:
        f = lambda M: [[str(x) for x in row] for row in M]
        return {"d": self.d, "r": self.r, "B1": f(self.B1), "B2": f(self.B2),
                "I": f(self.I), "J": f(self.J)}


def moment_map(x: AdhmData) -> list[list[Fraction]]:
    """[B1, B2] + I*J."""
    if x.d == 0:
        return []
    comm = [
        [
            sum(x.B1[i][k] * x.B2[k][j] - x.B2[i][k] * x.B1[k][j] for k in range(x.d))
            for j in range(x.d)
        ]
        for i in range(x.d)
    ]
    ij = mat_mul(x.I, x.J) if x.r else [[Fraction(0)] * x.d for _ in range(x.d)]
    return [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(comm, ij)]


def is_stable(x: AdhmData) -> bool:
    """No proper B1,B2-invariant subspace contains the image of I."""
    if x.d == 0:
        return True
    rows: list[list[Fraction]] = []
    pivots: set[int] = set()

    def try_add(vec: list[Fraction]) -> bool:
        v = list(vec)
        for row in rows:
            lead = next(i for i, c in enumerate(row) if c)
            if v[lead]:
                f = v[lead] / row[lead]
                v = [a - f * b for a, b in zip(v, row)]
        if any(v):
            lead = next(i for i, c in enumerate(v) if c)
            rows.append(v)
            pivots.add(lead)
            return True
        return False

    frontier = []
    for k in range(x.r):
        col = [x.I[i][k] for i in range(x.d)]
        if try_add(col):
            frontier.append(col)
    while frontier and len(rows) < x.d:
        nxt = []
        for v in frontier:
            for B in (x.B1, x.B2):
                w = [sum(B[i][j] * v[j] for j in range(x.d)) for i in range(x.d)]
                if try_add(w):
                    nxt.append(w)
        frontier = nxt
    return len(rows) == x.d


def fixed_point_data(lams: Sequence[Sequence[int]], r: int | None = None) -> AdhmData:
    """Torus fixed point attached to a tuple of partitions (monomial ideals).

    Basis vectors are the boxes of the diagrams; B1/B2 shift along rows and
    columns (zero off the diagram); I hits each corner box from its framing
    slot; J = 0.
    """
    lams = [tuple(lam) for lam in lams]
    r = len(lams) if r is None else r
    if len(lams) != r:
        raise ValueError("need one partition per framing slot")
    for lam in lams:
        if any(lam[i] < lam[i + 1] for i in range(len(lam) - 1)) or any(p <= 0 for p in lam):
            raise ValueError("parts must be positive and weakly decreasing")
    boxes = []
    for k, lam in enumerate(lams):
        for i, row_len in enumerate(lam):
            for j in range(row_len):
                boxes.append((k, i, j))
    d = len(boxes)
    idx = {b: t for t, b in enumerate(boxes)}
    B1 = [[Fraction(0)] * d for _ in range(d)]
    B2 = [[Fraction(0)] * d for _ in range(d)]
    for (k, i, j), t in idx.items():
        if (k, i + 1, j) in idx:
            B1[idx[(k, i + 1, j)]][t] = Fraction(1)
        if (k, i, j + 1) in idx:
            B2[idx[(k, i, j + 1)]][t] = Fraction(1)
    I = [[Fraction(0)] * r for _ in range(d)]
    for k, lam in enumerate(lams):
        if lam:
            I[idx[(k, 0, 0)]][k] = Fraction(1)
    J = [[Fraction(0)] * d for _ in range(r)]
    return AdhmData(d, r, B1, B2, I, J)


def direct_sum(x: AdhmData, y: AdhmData, framing: str = "both") -> AdhmData:
    """Block sum along V; the framing maps are stacked, or kept on one
    summand when modeling semisimple points (framing='first'/'second')."""
    if x.r != y.r:
        raise ValueError("framing ranks differ")
    if framing not in ("both", "first", "second"):
        raise ValueError("framing must be both/first/second")
    d = x.d + y.d
    z = Fraction(0)

    def block(A, B):
        out = [[z] * d for _ in range(d)]
        for i in range(x.d):
            for j in range(x.d):
                out[i][j] = A[i][j]
        for i in range(y.d):
            for j in range(y.d):
                out[x.d + i][x.d + j] = B[i][j]
        return out

    keep_x = framing in ("both", "first")
    keep_y = framing in ("both", "second")
    I = [[x.I[i][k] if keep_x else z for k in range(x.r)] for i in range(x.d)]
    I += [[y.I[i][k] if keep_y else z for k in range(y.r)] for i in range(y.d)]
    J = [
        ([x.J[k][j] if keep_x else z for j in range(x.d)]
         + [y.J[k][j] if keep_y else z for j in range(y.d)])
        for k in range(x.r)
    ]
    return AdhmData(d, x.r, block(x.B1, y.B1), block(x.B2, y.B2), I, J)


# -- monad complex ---------------------------------------------------------------

Z_SPEC = VarSpec(("z0", "z1", "z2"))


def _lin(spec: VarSpec, mat, zvar: str, diag_var: str | None = None):
    """z * mat - diag_var * Id as a Poly matrix (diag part optional)."""
    z = Poly.var(spec, zvar)
    n = len(mat)
    out = [[Poly.const(spec, c) * z for c in row] for row in mat]
    if diag_var is not None:
        w = Poly.var(spec, diag_var)
        for i in range(n):
            out[i][i] = out[i][i] - w
    return out


def monad_matrices(x: AdhmData) -> tuple[list[list[Poly]], list[list[Poly]]]:
    """The two linear-form matrices of the three-term complex; b*a = z0^2*mu."""
    spec = Z_SPEC
    d, r = x.d, x.r
    a_top = _lin(spec, x.B1, "z0", "z1")
    a_mid = _lin(spec, x.B2, "z0", "z2")
    z0 = Poly.var(spec, "z0")
    a_bot = [[Poly.const(spec, c) * z0 for c in row] for row in x.J]
    a = a_top + a_mid + a_bot  # (2d + r) x d
    b_left = [[-p for p in row] for row in _lin(spec, x.B2, "z0", "z2")]
    b_mid = _lin(spec, x.B1, "z0", "z1")
    b_right = [[Poly.const(spec, c) * z0 for c in row] for row in x.I]
    b = [b_left[i] + b_mid[i] + b_right[i] for i in range(d)]  # d x (2d + r)
    return a, b


def ba_residual(x: AdhmData) -> list[list[Poly]]:
    """b*a - z0^2 * moment_map(x); identically zero for every quadruple."""
    a, b = monad_matrices(x)
    d = x.d
    if d == 0:
        return []
    spec = Z_SPEC
    z0sq = Poly.var(spec, "z0") ** 2
    mu = moment_map(x)
    out = []
    for i in range(d):
        row = []
        for j in range(d):
            acc = Poly.zero(spec)
            for k in range(len(a)):
                acc = acc + b[i][k] * a[k][j]
            row.append(acc - Poly.const(spec, mu[i][j]) * z0sq)
        out.append(row)
    return out


# -- spectra ---------------------------------------------------------------------


class NonRationalSpectrumError(ValueError):
    pass


def char_poly(M: Sequence[Sequence[Fraction]]) -> UPoly:
    """Monic characteristic polynomial det(x*Id - M), Faddeev-LeVerrier."""
    n = len(M)
    if n == 0:
        return UPoly.one()
    A = [list(row) for row in M]
    coeffs = [Fraction(1)]
    Ak = [list(row) for row in M]
    for k in range(1, n + 1):
        ck = -sum(Ak[i][i] for i in range(n)) / k
        coeffs.append(ck)
        if k < n:
            for i in range(n):
                Ak[i][i] += ck
            Ak = mat_mul(A, Ak)
    return UPoly(list(reversed(coeffs)))


def _squarefree(f: UPoly) -> list[tuple[UPoly, int]]:
    """Yun decomposition of a monic polynomial into squarefree factors."""
    f = f.monic()
    if f.degree <= 0:
        return []
    df = f.derivative()
    a = f.gcd(df)
    b = f.div_exact(a)
    c = df.div_exact(a)
    out = []
    i = 1
    while b.degree > 0:
        dd = c - b.derivative()
        a = b.gcd(dd)
        if a.degree > 0:
            out.append((a, i))
        b = b.div_exact(a)
        c = dd.div_exact(a)
        i += 1
    return out


def _int_divisors(n: int) -> list[int]:
    n = abs(n)
    out = [k for k in range(1, n + 1) if n % k == 0]
    return out


def _rational_roots(f: UPoly) -> list[Fraction]:
    """All rational roots of a squarefree polynomial."""
    roots = []
    while f.degree > 0 and not f.coeffs[0]:
        roots.append(Fraction(0))
        f = f.div_exact(UPoly.t())
    if f.degree <= 0:
        return roots
    den = 1
    for c in f.coeffs:
        den = den * c.denominator // __import__("math").gcd(den, c.denominator)
    ints = [int(c * den) for c in f.coeffs]
    a0, an = ints[0], ints[-1]
    cands = set()
    for p in _int_divisors(a0):
        for q in _int_divisors(an):
            cands.add(Fraction(p, q))
            cands.add(Fraction(-p, q))
    for cand in sorted(cands):
        if not f.eval(cand):
            roots.append(cand)
    return roots


@dataclass(frozen=True)
class Spectrum:
    """Multiplicity-aware root data of a characteristic polynomial."""

    roots: tuple[tuple[Fraction, int], ...]
    residual_factors: tuple[tuple[UPoly, int], ...]

    @property
    def total_multiplicity(self) -> int:
        return sum(m for _, m in self.roots) + sum(
            f.degree * m for f, m in self.residual_factors
        )

    def residual_product(self) -> UPoly:
        out = UPoly.one()
        for f, m in self.residual_factors:
            out = out * f ** m
        return out

    def union(self, other: "Spectrum") -> "Spectrum":
        acc: dict[Fraction, int] = {}
        for rt, m in self.roots + other.roots:
            acc[rt] = acc.get(rt, 0) + m
        return Spectrum(
            tuple(sorted(acc.items())),
            tuple(sorted(self.residual_factors + other.residual_factors,
                         key=lambda fm: (fm[0].degree, fm[0].coeffs, fm[1]))),
        )

    def same_multiset(self, other: "Spectrum") -> bool:
        return (
            self.roots == other.roots
            and self.residual_product() == other.residual_product()
        )

    def to_jsonable(self) -> dict:
        return {
            "roots": [[str(rt), m] for rt, m in self.roots],
            "residual_factors": [[f.to_string("x"), m] for f, m in self.residual_factors],
        }


def spectrum_of_poly(f: UPoly) -> Spectrum:
    roots: dict[Fraction, int] = {}
    residual = []
    for part, mult in _squarefree(f):
        found = _rational_roots(part)
        rem = part
        for rt in found:
            roots[rt] = roots.get(rt, 0) + mult
            rem = rem.div_exact(UPoly([-rt, 1]))
        if rem.degree > 0:
            residual.append((rem.monic(), mult))
    return Spectrum(tuple(sorted(roots.items())),
                    tuple(sorted(residual, key=lambda fm: (fm[0].degree, fm[0].coeffs, fm[1]))))


def spectrum_projection(x: AdhmData, direction: tuple) -> Spectrum:
    """Spectrum of c1*B1 + c2*B2 with multiplicities (factorization morphism)."""
    c1, c2 = Fraction(direction[0]), Fraction(direction[1])
    if not c1 and not c2:
        raise ValueError("direction must be nonzero")
    if x.d == 0:
        return Spectrum((), ())
    M = [
        [c1 * x.B1[i][j] + c2 * x.B2[i][j] for j in range(x.d)]
        for i in range(x.d)
    ]
    return spectrum_of_poly(char_poly(M))


# -- support cycles ----------------------------------------------------------------


def _mat_pow(M, k):
    n = len(M)
    out = identity(n, _ONE)
    for _ in range(k):
        out = mat_mul(out, M)
    return out


def _solve_columns(K: list[list[Fraction]], B: list[list[Fraction]]) -> list[list[Fraction]]:
    """Solve K*C = B for full-column-rank K (coordinates in the K basis)."""
    n = len(K)
    k = len(K[0])
    s = len(B[0])
    aug = [K[i] + B[i] for i in range(n)]
    R, pivots = rref(aug, _ONE)
    if any(p >= k for p in pivots):
        raise ValueError("columns not in the span")
    C = [[Fraction(0)] * s for _ in range(k)]
    for rrow, pc in enumerate(pivots):
        for j in range(s):
            C[pc][j] = R[rrow][k + j]
    return C


def support_cycle(x: AdhmData) -> list[tuple[tuple[Fraction, Fraction], int]]:
    """Joint generalized eigenvalue pairs of (B1, B2) with multiplicities.

    Requires r = 1, J = 0 and mu = 0 (so B1, B2 commute); both
    characteristic polynomials must split over Q.
    """
    if x.r != 1:
        raise ValueError("support cycles are for rank-1 data")
    if any(c for row in x.J for c in row):
        raise ValueError("J must vanish")
    if any(c for row in moment_map(x) for c in row):
        raise ValueError("matrices do not commute (moment map nonzero)")
    if x.d == 0:
        return []
    spec1 = spectrum_of_poly(char_poly(x.B1))
    if spec1.residual_factors:
        raise NonRationalSpectrumError("B1 spectrum does not split over Q")
    out: dict[tuple[Fraction, Fraction], int] = {}
    for ev, mult in spec1.roots:
        shifted = [[x.B1[i][j] - (ev if i == j else 0) for j in range(x.d)]
                   for i in range(x.d)]
        K = kernel(_mat_pow(shifted, x.d), _ONE)
        Kcols = [list(col) for col in zip(*K)]  # d x mult
        B2K = mat_mul(x.B2, Kcols)
        C = _solve_columns(Kcols, B2K)
        spec2 = spectrum_of_poly(char_poly(C))
        if spec2.residual_factors:
            raise NonRationalSpectrumError("B2 spectrum does not split over Q")
        for ev2, m2 in spec2.roots:
            out[(ev, ev2)] = out.get((ev, ev2), 0) + m2
    return sorted(out.items())


# -- test/CLI helpers ---------------------------------------------------------------


def random_adhm(rng: random.Random, d: int, r: int, lo: int = -3, hi: int = 3) -> AdhmData:
    m = lambda rows, cols: [[Fraction(rng.randint(lo, hi)) for _ in range(cols)]
                            for _ in range(rows)]
    return AdhmData(d, r, m(d, d), m(d, d), m(d, r), m(r, d))


def partition_tuples(total: int, slots: int):
    """All tuples of `slots` partitions with |lambda| summing to `total`."""
    from .virasoro import partitions

    if slots == 0:
        if total == 0:
            yield ()
        return
    for first in range(total, -1, -1):
        for lam in partitions(first):
            for rest in partition_tuples(total - first, slots - 1):
                yield (lam,) + rest
