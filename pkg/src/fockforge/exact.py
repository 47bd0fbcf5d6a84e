"""Exact multivariate polynomial and rational-function arithmetic over Q.

Everything downstream (Fock coefficients, operator matrices, lattice data)
lives in the fraction field of Q[a1..aN, e1, e2].  Coefficients are
arbitrary-precision `Fraction`s; there is no floating point anywhere.

Canonical forms: monomials are ordered by graded lexicographic order over
the declared variable list.  A reduced rational function is stored with
integer-coefficient numerator and denominator whose integer contents are
coprime and whose denominator has positive leading coefficient, so equal
values have identical representations.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import gcd as int_gcd
from typing import Iterable, Mapping

__all__ = [
    "VarSpec",
    "Poly",
    "RationalFunction",
    "PoleError",
    "parse_rf",
    "laurent_at_infinity",
]


class PoleError(ZeroDivisionError):
    """Denominator vanished; carries the vanishing factor as a string."""

    def __init__(self, factor: str):
        super().__init__(f"denominator vanishes: {factor}")
        self.factor = factor


class VarSpec:
    """Ordered list of variable names, with a/epsilon markers.

    The order fixes the monomial order (graded lex) and hence every
    canonical string this package emits.
    """

    __slots__ = ("names", "a_names", "eps_names", "_index")

    def __init__(self, names: Iterable[str], a_names: Iterable[str] = (), eps_names: Iterable[str] = ()):
        self.names = tuple(names)
        if len(set(self.names)) != len(self.names):
            raise ValueError("variable names must be unique")
        self.a_names = tuple(a_names)
        self.eps_names = tuple(eps_names)
        self._index = {n: i for i, n in enumerate(self.names)}

    @classmethod
    def equivariant(cls, n_a: int) -> "VarSpec":
        """The standard ring Q[a1..a{n_a}, e1, e2]."""
        avs = tuple(f"a{i + 1}" for i in range(n_a))
        return cls(avs + ("e1", "e2"), a_names=avs, eps_names=("e1", "e2"))

    def index(self, name: str) -> int:
        return self._index[name]

    @property
    def arity(self) -> int:
        return len(self.names)

    def __eq__(self, other):
        return isinstance(other, VarSpec) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    def __repr__(self):
        return f"VarSpec({list(self.names)})"


def _grlex_key(exp: tuple[int, ...]) -> tuple:
    return (sum(exp), exp)


class Poly:
    """Sparse multivariate polynomial with Fraction coefficients."""

    __slots__ = ("spec", "terms")

    def __init__(self, spec: VarSpec, terms: Mapping[tuple[int, ...], Fraction]):
        self.spec = spec
        self.terms = {e: c for e, c in terms.items() if c}

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, spec: VarSpec) -> "Poly":
        return cls(spec, {})

    @classmethod
    def const(cls, spec: VarSpec, c) -> "Poly":
        c = Fraction(c)
        if not c:
            return cls.zero(spec)
        return cls(spec, {(0,) * spec.arity: c})

    @classmethod
    def var(cls, spec: VarSpec, name: str) -> "Poly":
        e = [0] * spec.arity
        e[spec.index(name)] = 1
        return cls(spec, {tuple(e): Fraction(1)})

    # -- predicates --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self.terms)

    def constant_value(self) -> Fraction:
        if self.is_zero():
            return Fraction(0)
        if not self.is_constant():
            raise ValueError("not a constant polynomial")
        return next(iter(self.terms.values()))

    def total_degree(self) -> int:
        if self.is_zero():
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, var_idx: int) -> int:
        if self.is_zero():
            return -1
        return max(e[var_idx] for e in self.terms)

    def leading(self) -> tuple[tuple[int, ...], Fraction]:
        """Leading (exponent, coefficient) under graded lex order."""
        e = max(self.terms, key=_grlex_key)
        return e, self.terms[e]

    # -- arithmetic --------------------------------------------------------

    def _check(self, other: "Poly"):
        if self.spec != other.spec:
            raise ValueError("mixed variable specs")

    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            s = t.get(e, 0) + c
            if s:
                t[e] = s
            else:
                t.pop(e, None)
        return Poly(self.spec, t)

    def __neg__(self) -> "Poly":
        return Poly(self.spec, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        self._check(other)
        t: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                s = t.get(e, 0) + c1 * c2
                if s:
                    t[e] = s
                else:
                    t.pop(e, None)
        return Poly(self.spec, t)

    def scale(self, c) -> "Poly":
        c = Fraction(c)
        if not c:
            return Poly.zero(self.spec)
        return Poly(self.spec, {e: k * c for e, k in self.terms.items()})

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        r = Poly.const(self.spec, 1)
        b = self
        while n:
            if n & 1:
                r = r * b
            b = b * b
            n >>= 1
        return r

    def __eq__(self, other):
        return isinstance(other, Poly) and self.spec == other.spec and self.terms == other.terms

    def __hash__(self):
        return hash((self.spec, tuple(sorted(self.terms.items()))))

    # -- content / primitive form ------------------------------------------

    def int_primitive(self) -> tuple[Fraction, "Poly"]:
        """Write self = c * P with P integer-coefficient, content 1, positive lead.

        Returns (c, P); for the zero polynomial returns (0, 0).
        """
        if self.is_zero():
            return Fraction(0), self
        den_lcm = 1
        for c in self.terms.values():
            den_lcm = den_lcm * c.denominator // int_gcd(den_lcm, c.denominator)
        num_gcd = 0
        for c in self.terms.values():
            num_gcd = int_gcd(num_gcd, c.numerator * (den_lcm // c.denominator))
        scale = Fraction(num_gcd, den_lcm)
        prim = self.scale(1 / scale)
        _, lead = prim.leading()
        if lead < 0:
            prim = -prim
            scale = -scale
        return scale, prim

    # -- substitution -------------------------------------------------------

    def specialize(self, assignment: Mapping[str, Fraction]) -> "Poly":
        """Substitute rational values for some variables; others untouched."""
        idx_val = {self.spec.index(n): Fraction(v) for n, v in assignment.items()}
        if not idx_val:
            return self
        t: dict[tuple[int, ...], Fraction] = {}
        for e, c in self.terms.items():
            coeff = c
            new_e = list(e)
            for i, v in idx_val.items():
                coeff *= v ** e[i]
                new_e[i] = 0
            key = tuple(new_e)
            s = t.get(key, 0) + coeff
            if s:
                t[key] = s
            else:
                t.pop(key, None)
        return Poly(self.spec, t)

    def map_vars(self, target: VarSpec, images: Mapping[str, "Poly"]) -> "Poly":
        """Ring map sending each variable to a polynomial over `target`."""
        out = Poly.zero(target)
        for e, c in self.terms.items():
            term = Poly.const(target, c)
            for i, k in enumerate(e):
                if k:
                    term = term * (images[self.spec.names[i]] ** k)
            out = out + term
        return out

    # -- division -----------------------------------------------------------

    def div_exact(self, g: "Poly") -> "Poly":
        """Exact division; raises ValueError if g does not divide self."""
        self._check(g)
        if g.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        if g.is_constant():
            return self.scale(1 / g.constant_value())
        q = Poly.zero(self.spec)
        r = self
        ge, gc = g.leading()
        while not r.is_zero():
            re_, rc = r.leading()
            qe = tuple(x - y for x, y in zip(re_, ge))
            if any(x < 0 for x in qe):
                raise ValueError("inexact polynomial division")
            qt = Poly(self.spec, {qe: rc / gc})
            q = q + qt
            r = r - qt * g
        return q

    # -- printing -----------------------------------------------------------

    def _term_str(self, e: tuple[int, ...], c: Fraction) -> str:
        parts = []
        for name, k in zip(self.spec.names, e):
            if k == 1:
                parts.append(name)
            elif k > 1:
                parts.append(f"{name}^{k}")
        if not parts:
            return str(c)
        body = "*".join(parts)
        if c == 1:
            return body
        if c == -1:
            return f"-{body}"
        return f"{c}*{body}"

    def __str__(self):
        if self.is_zero():
            return "0"
        items = sorted(self.terms.items(), key=lambda kv: _grlex_key(kv[0]), reverse=True)
        out = self._term_str(*items[0])
        for e, c in items[1:]:
            s = self._term_str(e, c)
            if s.startswith("-"):
                out += " - " + s[1:]
            else:
                out += " + " + s
        return out

    __repr__ = __str__


# -- multivariate gcd (subresultant PRS with content/primitive split) --------


def _main_var(f: Poly, g: Poly) -> int | None:
    for i in reversed(range(f.spec.arity)):
        if f.degree_in(i) > 0 or g.degree_in(i) > 0:
            return i
    return None


def _coeffs_in(f: Poly, x: int) -> dict[int, Poly]:
    """View f in (coefficients)[x]: degree-in-x -> coefficient Poly."""
    out: dict[int, dict] = {}
    for e, c in f.terms.items():
        k = e[x]
        e0 = list(e)
        e0[x] = 0
        out.setdefault(k, {})[tuple(e0)] = c
    return {k: Poly(f.spec, t) for k, t in out.items()}


def _from_coeffs(spec: VarSpec, x: int, coeffs: Mapping[int, Poly]) -> Poly:
    t: dict[tuple[int, ...], Fraction] = {}
    for k, p in coeffs.items():
        for e, c in p.terms.items():
            e2 = list(e)
            e2[x] = k
            t[tuple(e2)] = t.get(tuple(e2), Fraction(0)) + c
    return Poly(spec, t)


def _content_wrt(f: Poly, x: int) -> Poly:
    cs = list(_coeffs_in(f, x).values())
    g = cs[0]
    for c in cs[1:]:
        g = poly_gcd(g, c)
        if g.is_constant():
            break
    return g


def _pseudo_rem(f: Poly, g: Poly, x: int) -> Poly:
    """Pseudo-remainder lc(g)^(df-dg+1) * f mod g with respect to variable x."""
    df, dg = f.degree_in(x), g.degree_in(x)
    lg = _coeffs_in(g, x)[dg]
    n = df - dg + 1
    r = f
    xv = Poly.var(f.spec, f.spec.names[x])
    while not r.is_zero() and r.degree_in(x) >= dg:
        dr = r.degree_in(x)
        lr = _coeffs_in(r, x)[dr]
        r = r * lg - g * lr * xv ** (dr - dg)
        n -= 1
    for _ in range(n):
        r = r * lg
    return r


def _monomial_gcd(mono: Poly, other: Poly) -> Poly:
    """Gcd when `mono` has a single term: the common monomial factor."""
    (e,) = mono.terms
    mins = list(e)
    for e2 in other.terms:
        mins = [min(a, b) for a, b in zip(mins, e2)]
        if not any(mins):
            break
    return Poly(mono.spec, {tuple(mins): Fraction(1)})


def poly_gcd(f: Poly, g: Poly) -> Poly:
    """Gcd normalized to integer-primitive form with positive leading coefficient.

    Constants are units over Q, so any nonzero constant input gives gcd 1.
    """
    if f.is_zero():
        return g.int_primitive()[1] if not g.is_zero() else g
    if g.is_zero():
        return f.int_primitive()[1]
    if f.is_constant() or g.is_constant():
        return Poly.const(f.spec, 1)
    if len(f.terms) == 1:
        return _monomial_gcd(f, g)
    if len(g.terms) == 1:
        return _monomial_gcd(g, f)
    x = _main_var(f, g)
    if x is None:
        return Poly.const(f.spec, 1)
    if f.degree_in(x) == 0 or g.degree_in(x) == 0:
        # x occurs in only one of them: gcd divides the content side
        fx = f if f.degree_in(x) == 0 else _content_wrt(f, x)
        gx = g if g.degree_in(x) == 0 else _content_wrt(g, x)
        return poly_gcd(fx, gx)
    cf, cg = _content_wrt(f, x), _content_wrt(g, x)
    fp, gp = f.div_exact(cf), g.div_exact(cg)
    if fp.degree_in(x) < gp.degree_in(x):
        fp, gp = gp, fp
    # subresultant polynomial remainder sequence
    hv = Poly.const(f.spec, 1)
    gv = Poly.const(f.spec, 1)
    while True:
        delta = fp.degree_in(x) - gp.degree_in(x)
        rem = _pseudo_rem(fp, gp, x)
        if rem.is_zero():
            break
        if rem.degree_in(x) == 0:
            gp = Poly.const(f.spec, 1)
            break
        divisor = gv * hv ** delta
        fp, gp = gp, rem.div_exact(divisor)
        gv = _coeffs_in(fp, x)[fp.degree_in(x)]
        if delta >= 1:
            hv = (gv ** delta).div_exact(hv ** (delta - 1))
        elif delta == 0:
            pass
    if gp.is_constant():
        res = poly_gcd(cf, cg)
    else:
        res = gp.div_exact(_content_wrt(gp, x)) * poly_gcd(cf, cg)
    return res.int_primitive()[1]


# -- rational functions -------------------------------------------------------


class RationalFunction:
    """Reduced fraction of integer-coefficient polynomials.

    Invariants: gcd(num, den) is a unit, integer contents of num and den are
    coprime, and den's leading coefficient (graded lex) is positive.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly, _reduced: bool = False):
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if not _reduced:
            num, den = _reduce(num, den)
        self.num = num
        self.den = den

    # -- constructors --------------------------------------------------------

    @classmethod
    def from_poly(cls, p: Poly) -> "RationalFunction":
        return cls(p, Poly.const(p.spec, 1))

    @classmethod
    def const(cls, spec: VarSpec, c) -> "RationalFunction":
        return cls.from_poly(Poly.const(spec, c))

    @classmethod
    def zero(cls, spec: VarSpec) -> "RationalFunction":
        return cls.const(spec, 0)

    @classmethod
    def one(cls, spec: VarSpec) -> "RationalFunction":
        return cls.const(spec, 1)

    @classmethod
    def var(cls, spec: VarSpec, name: str) -> "RationalFunction":
        return cls.from_poly(Poly.var(spec, name))

    # -- predicates ------------------------------------------------------------

    @property
    def spec(self) -> VarSpec:
        return self.num.spec

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self):
        return not self.is_zero()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self) -> Fraction:
        return self.num.constant_value() / self.den.constant_value()

    # -- arithmetic --------------------------------------------------------------

    def __add__(self, other: "RationalFunction") -> "RationalFunction":
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    def __sub__(self, other: "RationalFunction") -> "RationalFunction":
        return RationalFunction(self.num * other.den - other.num * self.den, self.den * other.den)

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self.num, self.den, _reduced=True)

    def __mul__(self, other: "RationalFunction") -> "RationalFunction":
        return RationalFunction(self.num * other.num, self.den * other.den)

    def __truediv__(self, other: "RationalFunction") -> "RationalFunction":
        if other.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def inv(self) -> "RationalFunction":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return RationalFunction(self.den, self.num)

    def scale(self, c) -> "RationalFunction":
        # a rational scalar introduces no new polynomial factors, so only
        # the integer contents need rebalancing (no gcd computation)
        c = Fraction(c)
        if not c or self.is_zero():
            return RationalFunction.zero(self.spec)
        cn, pn = self.num.scale(c).int_primitive()
        cd, pd = self.den.int_primitive()
        q = cn / cd
        out = RationalFunction.__new__(RationalFunction)
        out.num = pn.scale(Fraction(q.numerator))
        out.den = pd.scale(Fraction(q.denominator))
        return out

    def __eq__(self, other):
        return (
            isinstance(other, RationalFunction)
            and self.num == other.num
            and self.den == other.den
        )

    def __hash__(self):
        return hash((self.num, self.den))

    # -- substitution ------------------------------------------------------------

    def specialize(self, assignment: Mapping[str, Fraction]) -> "RationalFunction":
        den = self.den.specialize(assignment)
        if den.is_zero():
            raise PoleError(str(self.den))
        return RationalFunction(self.num.specialize(assignment), den)

    def map_vars(self, target: VarSpec, images: Mapping[str, "RationalFunction"]) -> "RationalFunction":
        """Field map sending variables to rational functions over `target`."""
        num_images = {n: v.num for n, v in images.items()}
        den_images = {n: v.den for n, v in images.items()}
        if all(d.is_constant() and d.constant_value() == 1 for d in den_images.values()):
            num = self.num.map_vars(target, num_images)
            den = self.den.map_vars(target, num_images)
        else:
            num = _eval_at_rf(self.num, target, images)
            den = _eval_at_rf(self.den, target, images)
            if den.is_zero():
                raise PoleError(str(self.den))
            return num / den
        if den.is_zero():
            raise PoleError(str(self.den))
        return RationalFunction(num, den)

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def as_fraction(self) -> Fraction:
        return self.constant_value()

    # -- printing -----------------------------------------------------------------

    def __str__(self):
        return f"({self.num})/({self.den})"

    __repr__ = __str__


def _eval_at_rf(p: Poly, target: VarSpec, images: Mapping[str, RationalFunction]) -> RationalFunction:
    out = RationalFunction.zero(target)
    for e, c in p.terms.items():
        term = RationalFunction.const(target, c)
        for i, k in enumerate(e):
            if k:
                img = images[p.spec.names[i]]
                for _ in range(k):
                    term = term * img
        out = out + term
    return out


def _reduce(num: Poly, den: Poly) -> tuple[Poly, Poly]:
    if num.is_zero():
        return num, Poly.const(den.spec, 1)
    if den.is_constant():
        g = None
    else:
        g = poly_gcd(num, den)
    if g is not None and not g.is_constant():
        num = num.div_exact(g)
        den = den.div_exact(g)
    cn, pn = num.int_primitive()
    cd, pd = den.int_primitive()
    c = cn / cd  # pd has positive lead; sign lives in c's numerator
    return pn.scale(Fraction(c.numerator)), pd.scale(Fraction(c.denominator))


# -- arithmetic entry point matching the operation table ------------------------


def rf_arith(op: str, x: RationalFunction, y: RationalFunction) -> RationalFunction:
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    raise ValueError(f"unknown operation {op!r}")


# -- Laurent expansion at infinity ----------------------------------------------


def laurent_at_infinity(x: RationalFunction, var: str, order: int) -> list[tuple[int, RationalFunction]]:
    """Truncated Laurent expansion of x at var = infinity.

    Returns [(k, c_k)] for k = -deg .. order, where x = sum c_k var^(-k)
    + O(var^(-order-1)) and deg is the var-degree of x.  Coefficients are
    rational functions free of var.
    """
    if order < 0:
        raise ValueError("order must be nonnegative")
    spec = x.spec
    xi = spec.index(var)
    ncs = _coeffs_in(x.num, xi)
    dcs = _coeffs_in(x.den, xi)
    if x.is_zero():
        return [(k, RationalFunction.zero(spec)) for k in range(0, order + 1)]
    dn = max(ncs)
    dd = max(dcs)
    deg = dn - dd
    # series in t = 1/var: num_t[j] = coeff of t^j, j = dn - i
    num_t = {dn - i: RationalFunction.from_poly(p) for i, p in ncs.items()}
    den_t = {dd - i: RationalFunction.from_poly(p) for i, p in dcs.items()}
    n_terms = order + deg + 1
    if n_terms <= 0:
        return []
    inv0 = den_t[0].inv()
    series: list[RationalFunction] = []
    for j in range(n_terms):
        acc = num_t.get(j, RationalFunction.zero(spec))
        for i in range(1, j + 1):
            if i in den_t:
                acc = acc - den_t[i] * series[j - i]
        series.append(acc * inv0)
    return [(j - deg, series[j]) for j in range(n_terms)]


# -- parser for the canonical grammar ---------------------------------------------

_TOKEN = re.compile(r"\s*(\d+|[A-Za-z_][A-Za-z_0-9]*|\*\*|[-+*/^()])")


def _tokenize(s: str) -> list[str]:
    out = []
    pos = 0
    while pos < len(s):
        m = _TOKEN.match(s, pos)
        if not m:
            raise ValueError(f"bad character in expression at {s[pos:]!r}")
        out.append(m.group(1))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, tokens: list[str], spec: VarSpec):
        self.toks = tokens
        self.pos = 0
        self.spec = spec

    def peek(self) -> str | None:
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def take(self) -> str:
        t = self.peek()
        if t is None:
            raise ValueError("unexpected end of expression")
        self.pos += 1
        return t

    def expr(self) -> RationalFunction:
        v = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()
            w = self.term()
            v = v + w if op == "+" else v - w
        return v

    def term(self) -> RationalFunction:
        v = self.factor()
        while self.peek() in ("*", "/"):
            op = self.take()
            w = self.factor()
            v = v * w if op == "*" else v / w
        return v

    def factor(self) -> RationalFunction:
        if self.peek() == "-":
            self.take()
            return -self.factor()
        if self.peek() == "+":
            self.take()
            return self.factor()
        return self.power()

    def power(self) -> RationalFunction:
        base = self.atom()
        while self.peek() in ("^", "**"):
            self.take()
            e = self.take()
            if not e.isdigit():
                raise ValueError("exponent must be a nonnegative integer")
            n = int(e)
            r = RationalFunction.one(self.spec)
            for _ in range(n):
                r = r * base
            base = r
        return base

    def atom(self) -> RationalFunction:
        t = self.take()
        if t == "(":
            v = self.expr()
            if self.take() != ")":
                raise ValueError("unbalanced parenthesis")
            return v
        if t.isdigit():
            return RationalFunction.const(self.spec, int(t))
        if t in self.spec.names:
            return RationalFunction.var(self.spec, t)
        raise ValueError(f"unknown token {t!r}")


def parse_rf(s: str, spec: VarSpec) -> RationalFunction:
    """Parse the canonical grammar (ints, variables, + - * / ^, parens)."""
    p = _Parser(_tokenize(s), spec)
    v = p.expr()
    if p.peek() is not None:
        raise ValueError(f"trailing input: {p.toks[p.pos:]}")
    return v
