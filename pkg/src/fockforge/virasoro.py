"""Feigin-Fuchs Virasoro modes on a single boson, integral forms, and
the rank-1 cubic operator coming from the tautological first Chern class.

The boson is a direction vector c inside a BosonLattice with self-pairing
(c,c) = 2 for root-type modes, or a gl-type rank-1 boson for the cubic
operator.  The zero mode is a declared central scalar; mode sums are
normal ordered (annihilators to the right) and are finite on any vector.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exact import Poly, RationalFunction, VarSpec
from .fock import BosonLattice, FockVector, OperatorMatrix

__all__ = [
    "FeiginFuchsSpec",
    "sl2_spec",
    "fminus_spec",
    "root_spec_sl3",
    "virasoro_apply",
    "virasoro_mode",
    "central_charge",
    "virasoro_bracket_residual",
    "integral_mode",
    "LehnSpec",
    "lehn_apply",
    "lehn_operator",
    "lehn_commutator_display",
    "lehn_commutator_residual",
    "pbw_matrix",
    "partitions",
]


def partitions(d: int) -> list[tuple[int, ...]]:
    """Partitions of d as descending tuples, largest-first order."""
    out: list[tuple[int, ...]] = []

    def rec(rem: int, biggest: int, acc: list[int]):
        if rem == 0:
            out.append(tuple(acc))
            return
        for part in range(min(rem, biggest), 0, -1):
            acc.append(part)
            rec(rem - part, part, acc)
            acc.pop()

    rec(d, d, [])
    return out


@dataclass(frozen=True)
class FeiginFuchsSpec:
    """A root-type boson (self-pairing 2) carrying Virasoro modes."""

    lattice: BosonLattice
    direction: tuple[Fraction, ...]
    zero_mode: RationalFunction

    def __post_init__(self):
        c = self.direction
        g = self.lattice.gram
        pairing = sum(c[i] * g[i][j] * c[j] for i in range(len(c)) for j in range(len(c)))
        if pairing != 2:
            raise ValueError("Feigin-Fuchs boson must have self-pairing 2")

    @property
    def form(self) -> str:
        return self.lattice.form


def _s(spec: VarSpec) -> RationalFunction:
    return RationalFunction.from_poly(Poly.var(spec, "e1") + Poly.var(spec, "e2"))


def _p(spec: VarSpec) -> RationalFunction:
    return RationalFunction.from_poly(Poly.var(spec, "e1") * Poly.var(spec, "e2"))


def sl2_spec(form: str = "standard") -> FeiginFuchsSpec:
    """The antidiagonal boson with highest-weight parameter a1 - a2."""
    vs = VarSpec.equivariant(2)
    lat = BosonLattice.cartan("sl2", vs, form)
    u = RationalFunction.from_poly(Poly.var(vs, "a1") - Poly.var(vs, "a2"))
    z = u - _s(vs)
    if form == "standard":
        z = z / _p(vs)
    return FeiginFuchsSpec(lat, (Fraction(1),), z)


def fminus_spec(form: str = "standard") -> FeiginFuchsSpec:
    """Same boson over the smaller ring Q(u, e1, e2), u the weight parameter."""
    vs = VarSpec(("u", "e1", "e2"), eps_names=("e1", "e2"))
    lat = BosonLattice([[2]], vs, form)
    z = RationalFunction.var(vs, "u") - _s(vs)
    if form == "standard":
        z = z / _p(vs)
    return FeiginFuchsSpec(lat, (Fraction(1),), z)


def root_spec_sl3(i: int, form: str = "integral") -> FeiginFuchsSpec:
    """Virasoro boson along the i-th simple root in the sl3 Cartan lattice."""
    if i not in (0, 1):
        raise ValueError("sl3 has two simple roots: i in {0, 1}")
    vs = VarSpec.equivariant(3)
    lat = BosonLattice.cartan("sl3", vs, form)
    weight = Poly.var(vs, f"a{i + 1}") - Poly.var(vs, f"a{i + 2}")
    z = RationalFunction.from_poly(weight) - _s(vs)
    if form == "standard":
        z = z / _p(vs)
    direction = (Fraction(1), Fraction(0)) if i == 0 else (Fraction(0), Fraction(1))
    return FeiginFuchsSpec(lat, direction, z)


def _quad_sum(lattice: BosonLattice, direction: Sequence, zero_mode: RationalFunction | None,
              n: int, v: FockVector) -> FockVector:
    """sum_m :Q_m Q_{n-m}: v, zero modes treated as the central scalar."""
    out = lattice.zero_vector()
    if v.is_zero():
        return out
    dv = v.max_degree()
    for m in range(n - dv, dv + 1):
        k = n - m
        if m > k:
            continue  # count unordered pairs once below
        weight = 1 if m == k else 2
        if m == 0 or k == 0:
            if zero_mode is None:
                continue
            if m == 0 and k == 0:
                term = v.scale_rf(zero_mode * zero_mode)
            else:
                other = k if m == 0 else m
                term = lattice.mode_combo(direction, other, v, zero_mode).scale_rf(zero_mode)
        else:
            hi, lo = (k, m) if k >= m else (m, k)
            if hi > 0 and hi > dv:
                continue
            term = lattice.mode_combo(direction, hi, v, zero_mode)
            if term.is_zero():
                continue
            term = lattice.mode_combo(direction, lo, term, zero_mode)
        if weight == 2:
            term = term + term
        out = out + term
    return out


_MODE_CACHE: dict = {}


def _virasoro_apply_monomial(n: int, ff: FeiginFuchsSpec, mon) -> FockVector:
    key = (ff, n, mon)
    hit = _MODE_CACHE.get(key)
    if hit is not None:
        return hit
    v = ff.lattice.basis_vector(mon)
    spec = ff.lattice.spec
    quad = _quad_sum(ff.lattice, ff.direction, ff.zero_mode, n, v)
    if ff.form == "standard":
        pref = -_p(spec) * RationalFunction.const(spec, Fraction(1, 4))
    else:
        pref = RationalFunction.const(spec, Fraction(-1, 4))
    lin = ff.lattice.mode_combo(ff.direction, n, v, ff.zero_mode)
    lin_coeff = -_s(spec).scale(Fraction(n + 1, 2))
    out = quad.scale_rf(pref) + lin.scale_rf(lin_coeff)
    _MODE_CACHE[key] = out
    return out


def virasoro_apply(n: int, ff: FeiginFuchsSpec, v: FockVector) -> FockVector:
    """L_n v (standard form) or the rescaled integral mode (integral form)."""
    out = ff.lattice.zero_vector()
    for mon, c in v.terms.items():
        out = out + _virasoro_apply_monomial(n, ff, mon).scale_rf(c)
    return out


def virasoro_mode(n: int, ff: FeiginFuchsSpec, D: int) -> OperatorMatrix:
    return OperatorMatrix.from_action(
        ff.lattice, -n, range(0, D + 1), lambda v: virasoro_apply(n, ff, v)
    )


def integral_mode(n: int, ff: FeiginFuchsSpec, D: int) -> OperatorMatrix:
    if ff.form != "integral":
        raise ValueError("integral_mode needs an integral-form spec")
    return virasoro_mode(n, ff, D)


def central_charge(ff: FeiginFuchsSpec) -> RationalFunction:
    """1 + 6(e1+e2)^2/(e1 e2); integral bracket uses e1e2(e1e2 + 6(e1+e2)^2)."""
    spec = ff.lattice.spec
    s, p = _s(spec), _p(spec)
    return RationalFunction.one(spec) + s * s.scale(6) / p


def _bracket_rhs(m: int, n: int, ff: FeiginFuchsSpec, v: FockVector) -> FockVector:
    spec = ff.lattice.spec
    s, p = _s(spec), _p(spec)
    lterm = virasoro_apply(m + n, ff, v)
    coef = Fraction(m**3 - m, 12)
    if ff.form == "standard":
        out = lterm.scale(m - n)
        if m + n == 0:
            out = out + v.scale_rf(central_charge(ff).scale(coef))
    else:
        out = lterm.scale_rf(p.scale(m - n))
        if m + n == 0:
            out = out + v.scale_rf((p * p + p * s * s.scale(6)).scale(coef))
    return out


def virasoro_bracket_residual(m: int, n: int, ff: FeiginFuchsSpec, D: int) -> OperatorMatrix:
    """[L_m, L_n] minus the Virasoro right-hand side; zero when the relations hold."""

    def action(v: FockVector) -> FockVector:
        comm = virasoro_apply(m, ff, virasoro_apply(n, ff, v)) - virasoro_apply(
            n, ff, virasoro_apply(m, ff, v)
        )
        return comm - _bracket_rhs(m, n, ff, v)

    return OperatorMatrix.from_action(ff.lattice, -(m + n), range(0, D + 1), action)


# -- rank-1 cubic operator (multiplication by c1 of the tautological bundle) --


@dataclass(frozen=True)
class LehnSpec:
    """gl-type single boson: <1,1> = -1/(e1 e2), no zero mode."""

    lattice: BosonLattice

    @classmethod
    def default(cls) -> "LehnSpec":
        vs = VarSpec.equivariant(1)
        return cls(BosonLattice.gl(1, vs))


def lehn_apply(spec: LehnSpec, v: FockVector) -> FockVector:
    """Cubic-plus-quadratic boson expression for c1 cup on the rank-1 Fock space.

    The cubic prefactor is +(e1 e2)^2/6: with the bracket convention
    [P_m, P_n] = -m delta_{m,-n}/(e1 e2) this is the sign that makes the
    operator and its commutator with P_n mutually consistent.
    """
    out = spec.lattice.zero_vector()
    for mon, c in v.terms.items():
        key = (spec, mon)
        hit = _MODE_CACHE.get(key)
        if hit is None:
            hit = _lehn_apply_monomial(spec, spec.lattice.basis_vector(mon))
            _MODE_CACHE[key] = hit
        out = out + hit.scale_rf(c)
    return out


def _lehn_apply_monomial(spec: LehnSpec, v: FockVector) -> FockVector:
    L = spec.lattice
    vs = L.spec
    out = L.zero_vector()
    if v.is_zero():
        return out
    dv = v.max_degree()
    dir1 = (Fraction(1),)
    cubic = L.zero_vector()
    for m1 in range(-dv, dv + 1):
        if m1 == 0:
            continue
        for m2 in range(-dv, dv + 1):
            if m2 == 0:
                continue
            m3 = -m1 - m2
            if m3 == 0 or abs(m3) > dv:
                continue
            term = v
            for mode in sorted((m1, m2, m3), reverse=True):
                term = L.mode_combo(dir1, mode, term)
                if term.is_zero():
                    break
            else:
                cubic = cubic + term
    p, s = _p(vs), _s(vs)
    out = out + cubic.scale_rf((p * p).scale(Fraction(1, 6)))
    quad = L.zero_vector()
    for m in range(2, dv + 1):
        term = L.mode_combo(dir1, m, v)
        if term.is_zero():
            continue
        term = L.mode_combo(dir1, -m, term)
        quad = quad + term.scale(2 * (m - 1))
    out = out + quad.scale_rf(-(p * s).scale(Fraction(1, 4)))
    return out


def lehn_operator(D: int, spec: LehnSpec | None = None) -> OperatorMatrix:
    spec = spec or LehnSpec.default()
    return OperatorMatrix.from_action(spec.lattice, 0, range(0, D + 1), lambda v: lehn_apply(spec, v))


def lehn_commutator_display(n: int, spec: LehnSpec, v: FockVector) -> FockVector:
    """(n e1 e2 / 2) sum_{l+m=n} :P_l P_m: - (n(|n|-1)/2)(e1+e2) P_n, applied to v."""
    L = spec.lattice
    vs = L.spec
    dir1 = (Fraction(1),)
    quad = _quad_sum(L, dir1, None, n, v)
    p, s = _p(vs), _s(vs)
    out = quad.scale_rf(p.scale(Fraction(n, 2)))
    lin = L.mode_combo(dir1, n, v) if n != 0 else L.zero_vector()
    return out + lin.scale_rf(-s.scale(Fraction(n * (abs(n) - 1), 2)))


def lehn_commutator_residual(n: int, D: int, spec: LehnSpec | None = None) -> OperatorMatrix:
    """[c1 cup, P_n] computed from the cubic operator, minus the closed form."""
    spec = spec or LehnSpec.default()
    L = spec.lattice
    dir1 = (Fraction(1),)

    def action(v: FockVector) -> FockVector:
        comm = lehn_apply(spec, L.mode_combo(dir1, n, v)) - L.mode_combo(
            dir1, n, lehn_apply(spec, v)
        )
        return comm - lehn_commutator_display(n, spec, v)

    return OperatorMatrix.from_action(L, -n, range(0, D + 1), action)


# -- change of basis between PBW (L) vectors and boson monomials ---------------


def pbw_matrix(d: int, ff: FeiginFuchsSpec) -> list[list[RationalFunction]]:
    """Columns are L_{-lambda}|vac>, lambda a partition of d, in the monomial basis."""
    L = ff.lattice
    basis = L.degree_basis(d)
    index = {m: r for r, m in enumerate(basis)}
    zero = RationalFunction.zero(L.spec)
    mat = [[zero] * len(partitions(d)) for _ in basis]
    for col, lam in enumerate(partitions(d)):
        v = L.vacuum()
        for part in reversed(lam):
            v = virasoro_apply(-part, ff, v)
        for mon, c in v.terms.items():
            mat[index[mon]][col] = c
    return mat
