"""Bosonic Fock spaces over a lattice with a symmetric Gram form.

Generators P^i_m carry a mode m and a color i < rank.  Negative modes
create, positive modes annihilate, and the only nonzero brackets are

    [P^i_m, P^j_n] = -m delta_{m,-n} * gram[i][j] * scale,

where scale is 1/(e1*e2) for the standard form and e1*e2 for the
integral form (generators rescaled by e1*e2).  A Fock vector is a finite
combination of creation monomials; a creation monomial is a multiset of
(mode, color) pairs stored as a sorted tuple.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .exact import Poly, RationalFunction, VarSpec

__all__ = [
    "BosonLattice",
    "FockVector",
    "OperatorMatrix",
    "change_of_generators",
    "contravariant_form",
    "rescale_form",
]

Monomial = tuple[tuple[int, int], ...]


class BosonLattice:
    """Rank-l boson system; the Gram matrix fixes all commutators."""

    __slots__ = ("rank", "gram", "form", "spec", "_scale", "_bracket_cache")

    def __init__(self, gram: Sequence[Sequence], spec: VarSpec, form: str = "standard"):
        self.rank = len(gram)
        self.gram = tuple(tuple(Fraction(x) for x in row) for row in gram)
        for i in range(self.rank):
            for j in range(self.rank):
                if self.gram[i][j] != self.gram[j][i]:
                    raise ValueError("gram matrix must be symmetric")
        if form not in ("standard", "integral"):
            raise ValueError("form must be 'standard' or 'integral'")
        self.form = form
        self.spec = spec
        p = Poly.var(spec, "e1") * Poly.var(spec, "e2")
        one = Poly.const(spec, 1)
        if form == "standard":
            self._scale = RationalFunction(one, p)
        else:
            self._scale = RationalFunction(p, one)
        self._bracket_cache: dict = {}

    def bracket_value(self, i: int, j: int, n: int) -> RationalFunction:
        """[P^i_n, P^j_{-n}] for n > 0: the scalar -n*gram[i][j]*scale."""
        key = (i, j, n)
        hit = self._bracket_cache.get(key)
        if hit is None:
            hit = self._scale.scale(-n * self.gram[i][j])
            self._bracket_cache[key] = hit
        return hit

    @classmethod
    def gl(cls, rank: int, spec: VarSpec, form: str = "standard") -> "BosonLattice":
        """gl-type factor: identity Gram matrix."""
        eye = [[1 if i == j else 0 for j in range(rank)] for i in range(rank)]
        return cls(eye, spec, form)

    @classmethod
    def cartan(cls, kind: str, spec: VarSpec, form: str = "standard") -> "BosonLattice":
        """Cartan-lattice Gram matrix for sl2 / sl3."""
        if kind == "sl2":
            return cls([[2]], spec, form)
        if kind == "sl3":
            return cls([[2, -1], [-1, 2]], spec, form)
        raise ValueError(f"unsupported kind {kind!r}")

    @property
    def scale(self) -> RationalFunction:
        return self._scale

    def __eq__(self, other):
        return (
            isinstance(other, BosonLattice)
            and self.gram == other.gram
            and self.form == other.form
            and self.spec == other.spec
        )

    def __hash__(self):
        return hash((self.gram, self.form, self.spec))

    def __repr__(self):
        return f"BosonLattice(rank={self.rank}, form={self.form!r})"

    # -- vectors -----------------------------------------------------------

    def vacuum(self) -> "FockVector":
        return FockVector(self, {(): RationalFunction.one(self.spec)})

    def zero_vector(self) -> "FockVector":
        return FockVector(self, {})

    def basis_vector(self, monomial: Monomial) -> "FockVector":
        key = tuple(sorted(monomial))
        return FockVector(self, {key: RationalFunction.one(self.spec)})

    # -- graded structure -----------------------------------------------------

    def degree_basis(self, d: int) -> list[Monomial]:
        """Canonically ordered creation monomials of total degree d."""
        out: list[Monomial] = []

        def rec(rem: int, max_pair: tuple[int, int], acc: list[tuple[int, int]]):
            if rem == 0:
                out.append(tuple(sorted(acc)))
                return
            top_n = min(rem, max_pair[0])
            for n in range(top_n, 0, -1):
                imax = max_pair[1] if n == max_pair[0] else self.rank - 1
                for i in range(imax, -1, -1):
                    acc.append((n, i))
                    rec(rem - n, (n, i), acc)
                    acc.pop()

        rec(d, (d, self.rank - 1), [])
        return sorted(out)

    def graded_dimension(self, d: int) -> int:
        """Number of rank-colored partitions of d."""
        if d < 0:
            return 0
        f = [0] * (d + 1)
        f[0] = 1
        for n in range(1, d + 1):
            for _ in range(self.rank):
                for k in range(n, d + 1):
                    f[k] += f[k - n]
        return f[d]

    # -- generator action --------------------------------------------------------

    def create(self, i: int, n: int, v: "FockVector") -> "FockVector":
        if n <= 0:
            raise ValueError("creation mode must be positive")
        if not 0 <= i < self.rank:
            raise ValueError("generator index out of range")
        terms = {}
        for mon, c in v.terms.items():
            key = tuple(sorted(mon + ((n, i),)))
            acc = terms.get(key)
            terms[key] = c if acc is None else acc + c
        return FockVector(self, terms)

    def annihilate(self, i: int, n: int, v: "FockVector") -> "FockVector":
        if n <= 0:
            raise ValueError("annihilation mode must be positive")
        if not 0 <= i < self.rank:
            raise ValueError("generator index out of range")
        terms: dict = {}
        for mon, c in v.terms.items():
            seen = set()
            for t, (m, j) in enumerate(mon):
                if m != n or (m, j) in seen:
                    continue
                seen.add((m, j))
                if not self.gram[i][j]:
                    continue
                mult = sum(1 for p in mon if p == (m, j))
                rest = mon[:t] + mon[t + 1:]
                coeff = (c * self.bracket_value(i, j, n)).scale(mult)
                acc = terms.get(rest)
                acc = coeff if acc is None else acc + coeff
                if acc:
                    terms[rest] = acc
                else:
                    terms.pop(rest, None)
        return FockVector(self, terms)

    def create_combo(self, coeffs: Sequence, n: int, v: "FockVector") -> "FockVector":
        """Apply the creation mode of Q_{-n} = sum_i coeffs[i] P^i_{-n}."""
        out = self.zero_vector()
        for i, ci in enumerate(coeffs):
            ci = _as_rf(self.spec, ci)
            if ci:
                out = out + self.create(i, n, v).scale_rf(ci)
        return out

    def annihilate_combo(self, coeffs: Sequence, n: int, v: "FockVector") -> "FockVector":
        out = self.zero_vector()
        for i, ci in enumerate(coeffs):
            ci = _as_rf(self.spec, ci)
            if ci:
                out = out + self.annihilate(i, n, v).scale_rf(ci)
        return out

    def mode_combo(self, coeffs: Sequence, m: int, v: "FockVector",
                   zero_mode: RationalFunction | None = None) -> "FockVector":
        """Q_m action: create for m<0, annihilate for m>0, central scalar at m=0."""
        if m < 0:
            return self.create_combo(coeffs, -m, v)
        if m > 0:
            return self.annihilate_combo(coeffs, m, v)
        if zero_mode is None:
            raise ValueError("no zero mode declared for this boson")
        return v.scale_rf(zero_mode)


def _as_rf(spec: VarSpec, x) -> RationalFunction:
    if isinstance(x, RationalFunction):
        return x
    return RationalFunction.const(spec, x)


class FockVector:
    """Finite linear combination of creation monomials."""

    __slots__ = ("lattice", "terms")

    def __init__(self, lattice: BosonLattice, terms: Mapping[Monomial, RationalFunction]):
        self.lattice = lattice
        self.terms = {m: c for m, c in terms.items() if c}

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return not self.is_zero()

    def __add__(self, other: "FockVector") -> "FockVector":
        if self.lattice != other.lattice:
            raise ValueError("vectors over different lattices")
        t = dict(self.terms)
        for m, c in other.terms.items():
            s = t.get(m)
            s = c if s is None else s + c
            if s:
                t[m] = s
            else:
                t.pop(m, None)
        return FockVector(self.lattice, t)

    def __neg__(self) -> "FockVector":
        return FockVector(self.lattice, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "FockVector") -> "FockVector":
        return self + (-other)

    def scale_rf(self, c: RationalFunction) -> "FockVector":
        if not c:
            return self.lattice.zero_vector()
        return FockVector(self.lattice, {m: x * c for m, x in self.terms.items()})

    def scale(self, c) -> "FockVector":
        return self.scale_rf(_as_rf(self.lattice.spec, Fraction(c)))

    def coefficient(self, monomial: Monomial) -> RationalFunction:
        return self.terms.get(tuple(sorted(monomial)), RationalFunction.zero(self.lattice.spec))

    def vacuum_coefficient(self) -> RationalFunction:
        return self.terms.get((), RationalFunction.zero(self.lattice.spec))

    def degrees(self) -> set[int]:
        return {sum(n for n, _ in m) for m in self.terms}

    def max_degree(self) -> int:
        return max((sum(n for n, _ in m) for m in self.terms), default=0)

    def homogeneous_degree(self) -> int | None:
        ds = self.degrees()
        if len(ds) == 1:
            return ds.pop()
        return None

    def __eq__(self, other):
        return (
            isinstance(other, FockVector)
            and self.lattice == other.lattice
            and self.terms == other.terms
        )

    def __str__(self):
        if self.is_zero():
            return "0"
        bits = []
        for m in sorted(self.terms):
            mon = "|vac>" if not m else "*".join(f"P[{i}]_(-{n})" for n, i in m) + "|vac>"
            bits.append(f"({self.terms[m]})*{mon}")
        return " + ".join(bits)

    __repr__ = __str__

    def to_jsonable(self) -> list[dict]:
        return [
            {"monomial": [[n, i] for n, i in m], "coeff": str(c)}
            for m, c in sorted(self.terms.items())
        ]


def contravariant_form(v: FockVector, w: FockVector) -> RationalFunction:
    """Symmetric bilinear form with (P^i_n)* = P^i_{-n} and <vac,vac> = 1."""
    if v.lattice != w.lattice:
        raise ValueError("vectors over different lattices")
    L = v.lattice
    acc = RationalFunction.zero(L.spec)
    for mon, c in v.terms.items():
        cur = w
        for n, i in mon:
            cur = L.annihilate(i, n, cur)
            if cur.is_zero():
                break
        acc = acc + c * cur.vacuum_coefficient()
    return acc


def change_of_generators(T: Sequence[Sequence], L: BosonLattice):
    """New lattice with Gram T*gram*T^t plus transport maps on vectors.

    Transport requires T square and invertible; returns
    (new_lattice, to_new, to_old) where to_new rewrites a vector in the
    Q-generators Q^k = sum_i T[k][i] P^i and to_old undoes it.
    """
    Tm = [[Fraction(x) for x in row] for row in T]
    lp = len(Tm)
    gram = [
        [
            sum(Tm[a][i] * L.gram[i][j] * Tm[b][j] for i in range(L.rank) for j in range(L.rank))
            for b in range(lp)
        ]
        for a in range(lp)
    ]
    new_lattice = BosonLattice(gram, L.spec, L.form)
    if lp != L.rank:
        return new_lattice, None, None

    from .linalg import mat_inv

    try:
        Tinv = mat_inv(Tm, Fraction(1))
    except Exception as exc:
        raise ValueError("change of generators needs an invertible matrix") from exc

    def transport(v: FockVector, src: BosonLattice, dst: BosonLattice, rows) -> FockVector:
        out = dst.zero_vector()
        for mon, c in v.terms.items():
            cur = FockVector(dst, {(): c})
            for n, i in mon:
                cur = dst.create_combo(rows[i], n, cur)
            out = out + cur
        return out

    def to_new(v: FockVector) -> FockVector:
        if v.lattice != L:
            raise ValueError("vector not over the source lattice")
        return transport(v, L, new_lattice, Tinv)

    def to_old(v: FockVector) -> FockVector:
        if v.lattice != new_lattice:
            raise ValueError("vector not over the transported lattice")
        return transport(v, new_lattice, L, Tm)

    return new_lattice, to_new, to_old


def rescale_form(v: FockVector, target: BosonLattice) -> FockVector:
    """Rewrite between standard (P) and integral (~P = e1*e2*P) generators."""
    src = v.lattice
    if src.gram != target.gram or src.spec != target.spec or src.form == target.form:
        raise ValueError("expected same lattice in the opposite form")
    spec = src.spec
    p = RationalFunction.from_poly(Poly.var(spec, "e1") * Poly.var(spec, "e2"))
    factor = p.inv() if target.form == "integral" else p
    out = {}
    for mon, c in v.terms.items():
        f = c
        for _ in mon:
            f = f * factor
        out[mon] = f
    return FockVector(target, out)


class OperatorMatrix:
    """Graded operator stored as per-degree matrices over canonical bases.

    blocks[d] maps the degree-d piece to the degree-(d+shift) piece;
    rows are indexed by the target basis, columns by the source basis.
    """

    __slots__ = ("lattice", "shift", "blocks")

    def __init__(self, lattice: BosonLattice, shift: int,
                 blocks: Mapping[int, list[list[RationalFunction]]]):
        self.lattice = lattice
        self.shift = shift
        self.blocks = dict(blocks)

    @classmethod
    def from_action(cls, lattice: BosonLattice, shift: int, degrees: Iterable[int],
                    action: Callable[[FockVector], FockVector]) -> "OperatorMatrix":
        blocks = {}
        zero = RationalFunction.zero(lattice.spec)
        for d in degrees:
            if d < 0:
                continue
            src = lattice.degree_basis(d)
            td = d + shift
            tgt = lattice.degree_basis(td) if td >= 0 else []
            index = {m: r for r, m in enumerate(tgt)}
            mat = [[zero for _ in src] for _ in tgt]
            for col, mon in enumerate(src):
                w = action(lattice.basis_vector(mon))
                for m, c in w.terms.items():
                    if m not in index:
                        raise ValueError(
                            f"action is not homogeneous of shift {shift}: "
                            f"degree {d} produced {m}"
                        )
                    mat[index[m]][col] = c
            blocks[d] = mat
        return cls(lattice, shift, blocks)

    def block(self, d: int) -> list[list[RationalFunction]]:
        return self.blocks[d]

    def is_zero(self) -> bool:
        return all(not c for mat in self.blocks.values() for row in mat for c in row)

    def __eq__(self, other):
        return (
            isinstance(other, OperatorMatrix)
            and self.lattice == other.lattice
            and self.shift == other.shift
            and self.blocks == other.blocks
        )

    def __add__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        if self.shift != other.shift or self.lattice != other.lattice:
            raise ValueError("incompatible operators")
        out = {}
        for d in self.blocks.keys() & other.blocks.keys():
            out[d] = [
                [a + b for a, b in zip(r1, r2)]
                for r1, r2 in zip(self.blocks[d], other.blocks[d])
            ]
        return OperatorMatrix(self.lattice, self.shift, out)

    def __sub__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        return self + other.scale_rf(RationalFunction.const(self.lattice.spec, -1))

    def scale_rf(self, c: RationalFunction) -> "OperatorMatrix":
        return OperatorMatrix(
            self.lattice, self.shift,
            {d: [[x * c for x in row] for row in mat] for d, mat in self.blocks.items()},
        )

    def compose(self, other: "OperatorMatrix") -> "OperatorMatrix":
        """self after other (matrix product per degree)."""
        if self.lattice != other.lattice:
            raise ValueError("incompatible operators")
        from .linalg import mat_mul

        out = {}
        for d, mat in other.blocks.items():
            mid = d + other.shift
            if mid in self.blocks:
                if not mat or not self.blocks[mid]:
                    out[d] = []
                else:
                    out[d] = mat_mul(self.blocks[mid], mat)
        return OperatorMatrix(self.lattice, self.shift + other.shift, out)

    def apply(self, v: FockVector) -> FockVector:
        out = self.lattice.zero_vector()
        for d in sorted(v.degrees()):
            if d not in self.blocks:
                raise ValueError(f"degree {d} not stored")
            src = self.lattice.degree_basis(d)
            tgt = self.lattice.degree_basis(d + self.shift) if d + self.shift >= 0 else []
            col = [v.coefficient(m) for m in src]
            mat = self.blocks[d]
            for r, mon in enumerate(tgt):
                acc = RationalFunction.zero(self.lattice.spec)
                for c, x in enumerate(col):
                    if x and mat[r][c]:
                        acc = acc + mat[r][c] * x
                if acc:
                    out = out + FockVector(self.lattice, {mon: acc})
        return out

    def to_jsonable(self) -> dict:
        return {
            "shift": self.shift,
            "blocks": {
                str(d): [[str(c) for c in row] for row in mat]
                for d, mat in sorted(self.blocks.items())
            },
        }
