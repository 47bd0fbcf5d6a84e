"""Generating functions and level-1 affine weight multiplicities.

Everything is exact integer series arithmetic truncated at a declared
order.  The multiplicity of the n-th imaginary root in the relevant
(possibly twisted) affine algebra drives the eta-type products; the
dual Coxeter numbers feed the level map k + h_dual = -e2/e1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exact import Poly, RationalFunction, VarSpec

__all__ = [
    "QSeries",
    "AffineType",
    "colored_partition_series",
    "gieseker_series",
    "ih_series",
    "level1_multiplicity",
    "level1_series",
    "frenkel_kac_check",
    "level_map",
    "DUAL_COXETER",
]

DUAL_COXETER = {
    "A": lambda r: r + 1,
    "B": lambda r: 2 * r - 1,
    "C": lambda r: r + 1,
    "D": lambda r: 2 * r - 2,
    "E": lambda r: {6: 12, 7: 18, 8: 30}[r],
    "F": lambda r: 9,
    "G": lambda r: 4,
}

_ALLOWED_RANKS = {
    "A": lambda r: r >= 1,
    "B": lambda r: r >= 2,
    "C": lambda r: r >= 2,
    "D": lambda r: r >= 3,
    "E": lambda r: r in (6, 7, 8),
    "F": lambda r: r == 4,
    "G": lambda r: r == 2,
}


class QSeries:
    """Truncated power series in q with exact integer (or rational) coefficients."""

    __slots__ = ("order", "coeffs")

    def __init__(self, coeffs, order: int):
        cs = list(coeffs)[: order + 1]
        cs += [0] * (order + 1 - len(cs))
        self.coeffs = cs
        self.order = order

    @classmethod
    def one(cls, order: int) -> "QSeries":
        return cls([1], order)

    def __eq__(self, other):
        return isinstance(other, QSeries) and self.order == other.order and self.coeffs == other.coeffs

    def __getitem__(self, d: int):
        return self.coeffs[d]

    def __mul__(self, other: "QSeries") -> "QSeries":
        order = min(self.order, other.order)
        out = [0] * (order + 1)
        for i, a in enumerate(self.coeffs[: order + 1]):
            if a:
                for j, b in enumerate(other.coeffs[: order + 1 - i]):
                    out[i + j] += a * b
        return QSeries(out, order)

    def inverse(self) -> "QSeries":
        if not self.coeffs[0]:
            raise ZeroDivisionError("series has no constant term")
        c0 = self.coeffs[0]
        inv0 = Fraction(1, 1) / c0 if isinstance(c0, Fraction) or c0 != 1 else 1
        out = [inv0]
        for d in range(1, self.order + 1):
            acc = 0
            for i in range(1, d + 1):
                acc += self.coeffs[i] * out[d - i] if i < len(self.coeffs) else 0
            out.append(-acc * inv0)
        out = [int(x) if isinstance(x, Fraction) and x.denominator == 1 else x for x in out]
        return QSeries(out, self.order)

    def __str__(self):
        return str(self.coeffs)

    __repr__ = __str__


def eta_product(mult, order: int) -> QSeries:
    """prod_{n>=1} (1 - q^n)^(-mult(n)) up to the given order."""
    out = QSeries.one(order)
    for n in range(1, order + 1):
        m = mult(n)
        if not m:
            continue
        # (1 - q^n)^(-m) = sum_k binom(m-1+k, k) q^(nk)
        geom = [0] * (order + 1)
        k = 0
        coef = 1
        while n * k <= order:
            geom[n * k] = coef
            coef = coef * (m + k) // (k + 1)
            k += 1
        out = out * QSeries(geom, order)
    return out


def colored_partition_series(colors: int, order: int) -> QSeries:
    """Number of `colors`-colored partitions of d, d = 0..order."""
    if colors < 0:
        raise ValueError("colors must be nonnegative")
    return eta_product(lambda n: colors, order)


def gieseker_series(r: int, order: int) -> QSeries:
    """Graded dimensions over the equivariant base ring for rank r."""
    return colored_partition_series(r, order)


def ih_series(rank: int, order: int) -> QSeries:
    """Intersection-cohomology series: gieseker(r) divided by one boson factor."""
    return colored_partition_series(rank, order)


@dataclass(frozen=True)
class AffineType:
    """Finite type X_r together with its level-1 affine counterpart.

    For ADE the relevant algebra is untwisted X_r^(1); for B, C, F, G it is
    the twisted dual (A_2r^(2), D_{r+1}^(2), E_6^(2), D_4^(3)).
    """

    base: str
    rank: int

    def __post_init__(self):
        if self.base not in _ALLOWED_RANKS or not _ALLOWED_RANKS[self.base](self.rank):
            raise ValueError(f"unsupported type {self.base}{self.rank}")

    @classmethod
    def parse(cls, label: str) -> "AffineType":
        return cls(label[0].upper(), int(label[1:]))

    @property
    def is_ade(self) -> bool:
        return self.base in ("A", "D", "E")

    @property
    def dual_label(self) -> str:
        if self.is_ade:
            return f"{self.base}{self.rank}(1)"
        return {
            "B": f"A{2 * self.rank}(2)",
            "C": f"D{self.rank + 1}(2)",
            "F": "E6(2)",
            "G": "D4(3)",
        }[self.base]

    @property
    def lacing(self) -> int:
        if self.is_ade:
            return 1
        return 3 if self.base == "G" else 2

    @property
    def long_simple_roots(self) -> int:
        return {
            "A": self.rank,
            "D": self.rank,
            "E": self.rank,
            "B": self.rank - 1,
            "C": 1,
            "F": 2,
            "G": 1,
        }[self.base]

    def imaginary_root_multiplicity(self, n: int) -> int:
        """mult of n*delta in the level-1 algebra attached to this type."""
        if n <= 0:
            raise ValueError("n must be positive")
        if self.is_ade or n % self.lacing == 0:
            return self.rank
        return self.long_simple_roots

    @property
    def dual_coxeter(self) -> int:
        return DUAL_COXETER[self.base](self.rank)


def level1_series(typ: AffineType, order: int) -> QSeries:
    return eta_product(typ.imaginary_root_multiplicity, order)


def level1_multiplicity(typ: AffineType, d: int) -> int:
    """Multiplicity of the weight (basic highest weight) - d*delta."""
    return level1_series(typ, d)[d]


def frenkel_kac_check(rank: int, order: int, base: str = "A") -> bool:
    """Degree-d sizes of the vertex-operator realization match the
    multiplicity series for ADE types."""
    typ = AffineType(base, rank)
    if not typ.is_ade:
        raise ValueError("Frenkel-Kac applies to ADE types")
    return colored_partition_series(rank, order) == level1_series(typ, order)


def level_map(typ: AffineType, spec: VarSpec | None = None) -> RationalFunction:
    """Level as a function of the equivariant weights: k = -e2/e1 - h_dual."""
    spec = spec or VarSpec(("e1", "e2"), eps_names=("e1", "e2"))
    e1 = Poly.var(spec, "e1")
    e2 = Poly.var(spec, "e2")
    return RationalFunction(-e2, e1) - RationalFunction.const(spec, typ.dual_coxeter)
