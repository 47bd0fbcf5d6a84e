"""Integral lattices inside Fock spaces and their intersections.

The ambient lattice is the integral-form Heisenberg module (basis: ~P
monomials with polynomial coefficients).  Virasoro sublattices are
spanned by integral mode monomials applied to the vacuum, optionally
tensored with an integral boson along the orthogonal complement of the
chosen simple root.  Module intersections are probed along generic
parameter lines, where everything is Smith-normal-form linear algebra
over Q[t].
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .exact import Poly, RationalFunction, VarSpec
from .fock import BosonLattice, FockVector
from .linalg import kernel as field_kernel
from .linalg import rank as field_rank
from .smith import UPoly, smith_normal_form, solve_in_span, upoly_kernel
from .virasoro import FeiginFuchsSpec, partitions, root_spec_sl3, sl2_spec, virasoro_apply

__all__ = [
    "FockLattice",
    "LineSpecialization",
    "DegenerateLineError",
    "IntegralityError",
    "heis_lattice",
    "vir_sublattice",
    "integrality_check",
    "pid_intersection",
    "annihilator_kernel",
    "PERP_DIRECTIONS_SL3",
]

# Primitive lattice vector orthogonal to each sl3 simple root under the
# Cartan pairing: alpha1 -> alpha1 + 2 alpha2, alpha2 -> 2 alpha1 + alpha2.
PERP_DIRECTIONS_SL3 = {0: (1, 2), 1: (2, 1)}


class DegenerateLineError(RuntimeError):
    """The chosen line dropped rank; retry with a new seed."""


class IntegralityError(ValueError):
    """A lattice coefficient failed to be polynomial (theorem-level failure)."""

    def __init__(self, coeff: RationalFunction):
        super().__init__(f"non-polynomial lattice coefficient: {coeff}")
        self.coeff = coeff


@dataclass
class FockLattice:
    """Free module spanned by Fock vectors with polynomial coefficients."""

    ambient: BosonLattice
    degree: int
    basis: list[FockVector]

    def __post_init__(self):
        for v in self.basis:
            for c in v.terms.values():
                if not c.is_polynomial():
                    raise IntegralityError(c)

    def coefficient_matrix(self) -> list[list[RationalFunction]]:
        """Columns = basis vectors in the canonical monomial basis."""
        mons = self.ambient.degree_basis(self.degree)
        return [[v.coefficient(m) for v in self.basis] for m in mons]


def heis_lattice(ambient: BosonLattice, d: int) -> FockLattice:
    """The full integral Heisenberg lattice: unit-coefficient monomials."""
    return FockLattice(ambient, d, [ambient.basis_vector(m) for m in ambient.degree_basis(d)])


def _sl2_integral_spec() -> FeiginFuchsSpec:
    return sl2_spec("integral")


def vir_sublattice(i: int, d: int, g: str) -> FockLattice:
    """Basis of the degree-d integral Virasoro (x orthogonal boson) lattice.

    For sl2 the basis is {~L_{-lambda}|vac>}.  For sl3 and simple root i it
    is {~L_{i,-lambda} ~Q^perp_{-mu}|vac>} over |lambda| + |mu| = d.
    """
    if g == "sl2":
        if i != 0:
            raise ValueError("sl2 has a single simple root")
        ff = _sl2_integral_spec()
        vecs = []
        for lam in partitions(d):
            v = ff.lattice.vacuum()
            for part in reversed(lam):
                v = virasoro_apply(-part, ff, v)
            vecs.append(v)
        return FockLattice(ff.lattice, d, vecs)
    if g == "sl3":
        ff = root_spec_sl3(i, "integral")
        perp = PERP_DIRECTIONS_SL3[i]
        vecs = []
        for dl in range(d, -1, -1):
            for lam in partitions(dl):
                for mu in partitions(d - dl):
                    v = ff.lattice.vacuum()
                    for part in reversed(mu):
                        v = ff.lattice.create_combo(perp, part, v)
                    for part in reversed(lam):
                        v = virasoro_apply(-part, ff, v)
                    vecs.append(v)
        return FockLattice(ff.lattice, d, vecs)
    raise ValueError("g must be 'sl2' or 'sl3'")


def integrality_check(g: str, d: int) -> dict:
    """Verify all vir_sublattice coefficients are polynomial for degrees <= d."""
    roots = (0,) if g == "sl2" else (0, 1)
    witnesses = []
    ok = True
    for i in roots:
        for dd in range(0, d + 1):
            try:
                vir_sublattice(i, dd, g)
            except IntegralityError as exc:
                ok = False
                witnesses.append({"root": i, "degree": dd, "coefficient": str(exc.coeff)})
    return {"check": "integrality", "algebra": g, "max_degree": d, "ok": ok,
            "witnesses": witnesses}


@dataclass
class LineSpecialization:
    """Affine line var -> c0 + c1*t through parameter space, seeded."""

    seed: int
    spec: VarSpec
    assignment: dict[str, tuple[Fraction, Fraction]] = field(default_factory=dict)

    def __post_init__(self):
        if not self.assignment:
            rng = random.Random(self.seed)
            for name in self.spec.names:
                c0 = Fraction(rng.randint(-9, 9))
                c1 = Fraction(rng.randint(1, 9))
                self.assignment[name] = (c0, c1)

    def poly_image(self, p: Poly) -> UPoly:
        out = UPoly.zero()
        lines = [UPoly([self.assignment[n][0], self.assignment[n][1]]) for n in self.spec.names]
        for e, c in p.terms.items():
            term = UPoly.const(c)
            for i, k in enumerate(e):
                if k:
                    term = term * lines[i] ** k
            out = out + term
        return out

    def rf_image(self, x: RationalFunction) -> UPoly:
        if not x.is_polynomial():
            raise ValueError("line specialization expects polynomial coefficients")
        return self.poly_image(x.num).scale(1 / x.den.constant_value())

    def jsonable(self) -> dict:
        return {"seed": self.seed,
                "assignment": {n: [str(c0), str(c1)] for n, (c0, c1) in self.assignment.items()}}


def _upoly_matrix(lat: FockLattice, line: LineSpecialization) -> list[list[UPoly]]:
    return [[line.rf_image(c) for c in row] for row in lat.coefficient_matrix()]


def _upoly_rank(M: list[list[UPoly]]) -> int:
    if not M or not M[0]:
        return 0
    _, D, _ = smith_normal_form(M)
    return sum(1 for i in range(min(len(M), len(M[0]))) if D[i][i])


def pid_intersection(L1: FockLattice, L2: FockLattice, line: LineSpecialization) -> dict:
    """Intersection of the two lattices along the line, over Q[t].

    Reports the rank, a Q[t]-basis of the intersection in ambient
    coordinates, and the elementary divisors of the intersection viewed
    inside L2 (Smith form of its coordinates in L2's basis).
    """
    if L1.ambient != L2.ambient or L1.degree != L2.degree:
        raise ValueError("lattices must live in the same ambient graded piece")
    A = _upoly_matrix(L1, line)
    B = _upoly_matrix(L2, line)
    k1, k2 = len(L1.basis), len(L2.basis)
    if _upoly_rank(A) != k1 or _upoly_rank(B) != k2:
        raise DegenerateLineError(f"rank drop along line seed={line.seed}")
    n = len(A)
    stacked = [[A[i][j] for j in range(k1)] + [-B[i][j] for j in range(k2)] for i in range(n)]
    ker = upoly_kernel(stacked)
    X = [[vec[j] for vec in ker] for j in range(k1)]  # k1 x s
    s = len(ker)
    G = [[sum((A[i][j] * X[j][c] for j in range(k1)), UPoly.zero()) for c in range(s)]
         for i in range(n)]
    C = solve_in_span(B, G)
    if C is None:
        raise RuntimeError("intersection generators not inside L2 (internal error)")
    _, D, _ = smith_normal_form(C) if s else (None, [], None)
    divisors = [D[i][i] for i in range(min(len(C), s))] if s else []
    return {
        "check": "pid-intersection",
        "degree": L1.degree,
        "line": line.jsonable(),
        "rank": s,
        "divisors": [dv.to_string("t") for dv in divisors],
        "basis": [[G[i][c].to_string("t") for i in range(n)] for c in range(s)],
    }


def annihilator_kernel(r: int, d: int) -> list[FockVector]:
    """Basis of the joint kernel of the diagonal annihilators P^Delta_m,
    0 < m <= d, on the degree-d piece of the rank-r gl Fock space.

    Every annihilation coefficient is a rational multiple of 1/(e1*e2), so
    the elimination happens over Q after scaling out that unit.
    """
    spec = VarSpec.equivariant(r)
    L = BosonLattice.gl(r, spec)
    p = RationalFunction.from_poly(Poly.var(spec, "e1") * Poly.var(spec, "e2"))
    mons = L.degree_basis(d)
    ones = [Fraction(1)] * r
    rows: list[list[Fraction]] = []
    for m in range(1, d + 1):
        tgt = L.degree_basis(d - m)
        idx = {mm: k for k, mm in enumerate(tgt)}
        block = [[Fraction(0) for _ in mons] for _ in tgt]
        for col, mon in enumerate(mons):
            w = L.annihilate_combo(ones, m, L.basis_vector(mon))
            for mm, c in w.terms.items():
                block[idx[mm]][col] = (c * p).constant_value()
        rows.extend(block)
    if rows:
        null = field_kernel(rows, Fraction(1))
    else:  # no conditions: the whole graded piece
        null = [[Fraction(1) if i == j else Fraction(0) for i in range(len(mons))]
                for j in range(len(mons))]
    out = []
    for vec in null:
        terms = {m: RationalFunction.const(spec, c) for m, c in zip(mons, vec) if c}
        out.append(FockVector(L, terms))
    return out


def kernel_membership(basis: list[FockVector], v: FockVector) -> bool:
    """Is v in the F_T-span of the basis vectors?"""
    if v.is_zero():
        return True
    L = v.lattice
    d = v.homogeneous_degree()
    if d is None:
        return all(
            kernel_membership(basis, FockVector(L, {m: c for m, c in v.terms.items()
                                                    if sum(n for n, _ in m) == dd}))
            for dd in v.degrees()
        )
    mons = L.degree_basis(d)
    one = RationalFunction.one(L.spec)
    cols = [[b.coefficient(m) for b in basis] for m in mons]
    aug = [row + [v.coefficient(m)] for row, m in zip(cols, mons)]
    return field_rank(cols, one) == field_rank(aug, one)
