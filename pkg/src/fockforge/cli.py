"""Command-line driver: every verification is a reproducible, machine-readable run.

JSON reports go to stdout (byte-identical for fixed check, flags, and
seed); human summaries and timings go to stderr.  Exit codes: 0 pass,
1 fail, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from fractions import Fraction

from .exact import Poly, PoleError, RationalFunction, VarSpec, parse_rf
from .fock import BosonLattice, contravariant_form
from .linalg import det, identity, mat_mul
from . import adhm as adhm_mod
from . import characters as chars
from . import rmatrix as rm
from . import wlattice as wl
from .virasoro import (
    LehnSpec,
    fminus_spec,
    lehn_commutator_residual,
    sl2_spec,
    virasoro_apply,
    virasoro_bracket_residual,
    virasoro_mode,
)

__all__ = ["main", "run_check", "run_suite", "REGISTRY"]


def _report(name: str, params: dict, status: str, witnesses: list, seed: int) -> dict:
    return {
        "check": name,
        "parameters": params,
        "status": status,
        "witnesses": witnesses,
        "seed": seed,
    }


# -- individual checks -----------------------------------------------------------


def _mode(L: BosonLattice, i: int, m: int, v):
    return L.create(i, -m, v) if m < 0 else L.annihilate(i, m, v)


def check_heisenberg(max_degree: int = 3, seed: int = 0, **_) -> dict:
    """Commutators [P^i_m, P^j_n] = -m delta (a_i,a_j) scale on small bases."""
    modes = [m for k in range(1, max_degree + 1) for m in (k, -k)]
    witnesses = []
    lattices = [
        ("sl2", BosonLattice.cartan("sl2", VarSpec.equivariant(2))),
        ("sl3", BosonLattice.cartan("sl3", VarSpec.equivariant(3))),
        ("gl3", BosonLattice.gl(3, VarSpec.equivariant(3))),
        ("sl2~", BosonLattice.cartan("sl2", VarSpec.equivariant(2), form="integral")),
    ]
    for label, L in lattices:
        for d in range(0, max_degree + 1):
            for mon in L.degree_basis(d):
                v = L.basis_vector(mon)
                for i in range(L.rank):
                    for j in range(L.rank):
                        for m in modes:
                            for n in modes:
                                got = _mode(L, i, m, _mode(L, j, n, v)) - _mode(
                                    L, j, n, _mode(L, i, m, v)
                                )
                                want = (
                                    v.scale_rf(L.scale.scale(-m * L.gram[i][j]))
                                    if m == -n
                                    else L.zero_vector()
                                )
                                if got != want:
                                    witnesses.append(
                                        {"lattice": label, "i": i, "j": j,
                                         "m": m, "n": n, "monomial": list(mon)}
                                    )
    status = "pass" if not witnesses else "fail"
    return _report("heisenberg", {"max_degree": max_degree}, status, witnesses[:5], seed)


def check_virasoro(max_degree: int = 3, seed: int = 0, **_) -> dict:
    ff = sl2_spec()
    spec = ff.lattice.spec
    witnesses = []
    mmax = min(3, max_degree)
    for m in range(-mmax, mmax + 1):
        for n in range(-mmax, mmax + 1):
            if not virasoro_bracket_residual(m, n, ff, max_degree).is_zero():
                witnesses.append({"pair": [m, n]})
    want = parse_rf("-(((a1-a2)^2)/(e1*e2) - ((e1+e2)^2)/(e1*e2))/4", spec)
    vac = ff.lattice.vacuum()
    if virasoro_apply(0, ff, vac).vacuum_coefficient() != want:
        witnesses.append({"vacuum_eigenvalue": str(virasoro_apply(0, ff, vac).vacuum_coefficient())})
    if any(not virasoro_apply(n, ff, vac).is_zero() for n in range(1, mmax + 1)):
        witnesses.append({"highest_weight": "L_n vac != 0"})
    status = "pass" if not witnesses else "fail"
    return _report("virasoro", {"max_degree": max_degree}, status, witnesses, seed)


def check_integral_virasoro(max_degree: int = 3, seed: int = 0, **_) -> dict:
    ff = sl2_spec("integral")
    witnesses = []
    mmax = min(3, max_degree)
    for m in range(-mmax, mmax + 1):
        for n in range(-mmax, mmax + 1):
            if not virasoro_bracket_residual(m, n, ff, max_degree).is_zero():
                witnesses.append({"pair": [m, n]})
    for vec in (ff.lattice.vacuum(),):
        for n in range(-mmax, mmax + 1):
            w = virasoro_apply(n, ff, vec)
            bad = [str(c) for c in w.terms.values() if not c.is_polynomial()]
            if bad:
                witnesses.append({"mode": n, "non_polynomial": bad})
    status = "pass" if not witnesses else "fail"
    return _report("integral-virasoro", {"max_degree": max_degree}, status, witnesses, seed)


def check_lehn(max_degree: int = 4, seed: int = 0, **_) -> dict:
    witnesses = []
    for n in range(-3, 4):
        if n == 0:
            continue
        if not lehn_commutator_residual(n, max_degree).is_zero():
            witnesses.append({"mode": n})
    spec = LehnSpec.default()
    vac = spec.lattice.vacuum()
    from .virasoro import lehn_apply

    if not lehn_apply(spec, vac).is_zero():
        witnesses.append({"vacuum": "c1 vac != 0"})
    status = "pass" if not witnesses else "fail"
    return _report("lehn", {"max_degree": max_degree}, status, witnesses, seed)


def check_reflection(max_degree: int = 3, seed: int = 0, **_) -> dict:
    ff = fminus_spec()
    spec = ff.lattice.spec
    one = RationalFunction.one(spec)
    witnesses = []
    R = rm.reflection(max_degree, rm.SOURCE_SWAPPED, ff)
    ffs = rm.swap_parameters(ff)
    dmax = min(3, max_degree)
    for n in (-2, -1, 1, 2):
        lhs = R.compose(virasoro_mode(n, ffs, dmax))
        rhs = virasoro_mode(n, ff, dmax).compose(R)
        for d in sorted(lhs.blocks.keys() & rhs.blocks.keys()):
            if lhs.block(d) != rhs.block(d):
                witnesses.append({"intertwining_mode": n, "degree": d})
    Rs = rm.reflection(max_degree, rm.SOURCE_SWAPPED, ffs)
    for d in range(0, max_degree + 1):
        prod = mat_mul(R.block(d), Rs.block(d))
        if prod != identity(len(prod), one):
            witnesses.append({"involution_degree": d})
    ev = rm.reflection(1, rm.SOURCE_SWAPPED, ff).block(1)[0][0]
    if ev != parse_rf("-(u-e1-e2)/(u+e1+e2)", spec):
        witnesses.append({"degree1_eigenvalue": str(ev)})
    rop = rm.classical_r(max_degree, ff)
    for d in range(0, max_degree + 1):
        blk = rop.block(d)
        expect = [[(RationalFunction.const(spec, 2 * d) if i == j else RationalFunction.zero(spec))
                   for j in range(len(blk))] for i in range(len(blk))]
        if blk != expect:
            witnesses.append({"classical_r_degree": d})
    status = "pass" if not witnesses else "fail"
    return _report("reflection", {"max_degree": max_degree}, status, witnesses, seed)


def check_expansion(max_degree: int = 3, seed: int = 0, **_) -> dict:
    reports = [rm.expansion_report(d, 2) for d in range(0, max_degree + 1)]
    ok = all(r.get("ok") for r in reports)
    convs = {(r.get("orientation"), r.get("sign")) for r in reports[1:] if r.get("ok")}
    consistent = len(convs) <= 1
    witnesses = [
        {"degree": r["degree"], "orientation": r.get("orientation"),
         "sign": r.get("sign"), "residual_order": str(r.get("residual_order"))}
        for r in reports
    ]
    status = "measured" if (ok and consistent) else "fail"
    return _report("expansion", {"max_degree": max_degree}, status, witnesses, seed)


def _ybe_seeds(seed: int, count: int):
    rng = random.Random(seed)
    out = []
    tries = 0
    while len(out) < count and tries < 200:
        tries += 1
        a = rng.sample(range(-9, 10), 3)
        e1 = rng.choice([x for x in range(-6, 7) if x])
        e2 = rng.choice([x for x in range(-6, 7) if x])
        params = {"a1": Fraction(a[0]), "a2": Fraction(a[1]), "a3": Fraction(a[2]),
                  "e1": Fraction(e1), "e2": Fraction(e2)}
        out.append(params)
    return out


def check_ybe(max_degree: int = 2, seed: int = 0, trials: int = 5, **_) -> dict:
    witnesses = []
    ok = True
    if max_degree >= 1:
        sym = rm.ybe_residual(1)
        if not sym.is_zero():
            ok = False
            witnesses.append({"symbolic_degree1": "nonzero"})
        else:
            witnesses.append({"symbolic_degree1": "zero"})
    used = 0
    for params in _ybe_seeds(seed, trials * 4):
        if used >= trials:
            break
        try:
            res = rm.ybe_residual(min(max_degree, 2), params)
        except (PoleError, ValueError):
            continue
        used += 1
        entry = {k: str(v) for k, v in params.items()}
        entry["residual"] = "zero" if res.is_zero() else "nonzero"
        if not res.is_zero():
            ok = False
        witnesses.append(entry)
    if used < trials:
        ok = False
        witnesses.append({"error": f"only {used} generic seeds found"})
    status = "pass" if ok else "fail"
    return _report("ybe", {"max_degree": max_degree, "trials": trials}, status, witnesses, seed)


def check_wlattice(max_degree: int = 3, seed: int = 0, **_) -> dict:
    witnesses = []
    ok = True
    integ = wl.integrality_check("sl2", max_degree)
    if not integ["ok"]:
        ok = False
        witnesses.extend(integ["witnesses"])
    integ3 = wl.integrality_check("sl3", min(max_degree, 3))
    if not integ3["ok"]:
        ok = False
        witnesses.extend(integ3["witnesses"])
    spec2 = VarSpec.equivariant(2)
    line = wl.LineSpecialization(seed + 1, spec2)
    vir1 = wl.vir_sublattice(0, 1, "sl2")
    h1 = wl.heis_lattice(vir1.ambient, 1)
    rep = wl.pid_intersection(vir1, h1, line)
    want = line.poly_image(parse_rf("a1-a2-e1-e2", spec2).num).monic().to_string("t")
    if rep["divisors"] != [want]:
        ok = False
    witnesses.append({"sl2_index_divisor": rep["divisors"], "expected": [want]})
    spec3 = VarSpec.equivariant(3)
    line3 = wl.LineSpecialization(seed + 2, spec3)
    for d in range(1, min(max_degree, 2) + 1):
        s1 = wl.vir_sublattice(0, d, "sl3")
        s2 = wl.vir_sublattice(1, d, "sl3")
        r1 = wl.pid_intersection(s1, s2, line3)
        r2 = wl.pid_intersection(s1, s2, line3)
        if r1 != r2:
            ok = False
            witnesses.append({"sl3_nondeterministic_degree": d})
        full = BosonLattice.cartan("sl3", spec3).graded_dimension(d)
        witnesses.append({"sl3_degree": d, "rank": r1["rank"], "ambient_dim": full,
                          "divisors": r1["divisors"]})
    status = "pass" if ok else "fail"
    return _report("wlattice", {"max_degree": max_degree}, status, witnesses, seed)


def check_kernel(max_degree: int = 5, seed: int = 0, **_) -> dict:
    witnesses = []
    ok = True
    for r in (2, 3):
        series = chars.ih_series(r - 1, max_degree)
        dims = []
        for d in range(0, max_degree + 1):
            dims.append(len(wl.annihilator_kernel(r, d)))
        if dims != series.coeffs:
            ok = False
        witnesses.append({"rank": r, "kernel_dims": dims, "ih_series": series.coeffs})
    status = "pass" if ok else "fail"
    return _report("kernel", {"max_degree": max_degree}, status, witnesses, seed)


def check_characters(max_degree: int = 10, seed: int = 0, **_) -> dict:
    witnesses = []
    ok = True
    boson = chars.colored_partition_series(1, max_degree)
    for r in (1, 2, 3):
        lhs = chars.ih_series(r - 1, max_degree) * boson
        if lhs != chars.gieseker_series(r, max_degree):
            ok = False
            witnesses.append({"gieseker_identity_rank": r})
    table = []
    for label in ("A2", "B2", "B3", "C2", "C3", "D4", "E6", "E7", "E8", "F4", "G2"):
        typ = chars.AffineType.parse(label)
        row = [chars.level1_multiplicity(typ, d) for d in range(min(max_degree, 10) + 1)]
        table.append({"type": label, "dual": typ.dual_label, "multiplicities": row})
    g2 = chars.AffineType.parse("G2")
    if [chars.level1_multiplicity(g2, d) for d in range(5)] != [1, 1, 2, 4, 6]:
        ok = False
        witnesses.append({"G2_head": "mismatch"})
    if chars.level1_multiplicity(chars.AffineType.parse("B2"), 2) != 3:
        ok = False
        witnesses.append({"B2_d2": "mismatch"})
    witnesses.extend(table)
    status = "pass" if ok else "fail"
    return _report("characters", {"max_degree": max_degree}, status, witnesses, seed)


def check_frenkel_kac(max_degree: int = 10, rank: int = 3, seed: int = 0, **_) -> dict:
    witnesses = []
    ok = True
    for r in range(1, rank + 1):
        good = chars.frenkel_kac_check(r, max_degree)
        witnesses.append({"rank": r, "ok": good})
        ok = ok and good
    status = "pass" if ok else "fail"
    return _report("frenkel-kac", {"max_degree": max_degree, "rank": rank}, status, witnesses, seed)


def check_adhm(max_degree: int = 6, seed: int = 0, trials: int = 100, **_) -> dict:
    witnesses = []
    ok = True
    for r in (1, 2, 3):
        count_by_d = [0] * (min(max_degree, 6) + 1)
        for total in range(0, min(max_degree, 6) + 1):
            for lams in adhm_mod.partition_tuples(total, r):
                x = adhm_mod.fixed_point_data(lams)
                count_by_d[total] += 1
                if any(c for row in adhm_mod.moment_map(x) for c in row) or not adhm_mod.is_stable(x):
                    ok = False
                    witnesses.append({"bad_fixed_point": [list(l) for l in lams]})
        series = chars.gieseker_series(r, min(max_degree, 6))
        if count_by_d != series.coeffs:
            ok = False
        witnesses.append({"rank": r, "fixed_point_counts": count_by_d, "series": series.coeffs})
    rng = random.Random(seed)
    bad_ba = 0
    for _ in range(trials):
        x = adhm_mod.random_adhm(rng, rng.randint(0, 4), rng.randint(1, 3))
        if any(not p.is_zero() for row in adhm_mod.ba_residual(x) for p in row):
            bad_ba += 1
    if bad_ba:
        ok = False
    witnesses.append({"monad_trials": trials, "failures": bad_ba})
    bad_spec = 0
    for _ in range(trials):
        r = rng.randint(1, 3)
        x = adhm_mod.random_adhm(rng, rng.randint(0, 3), r)
        y = adhm_mod.random_adhm(rng, rng.randint(0, 3), r)
        c = (Fraction(rng.randint(-3, 3)), Fraction(rng.randint(1, 3)))
        sx = adhm_mod.spectrum_projection(x, c)
        sy = adhm_mod.spectrum_projection(y, c)
        sxy = adhm_mod.spectrum_projection(adhm_mod.direct_sum(x, y), c)
        if not sxy.same_multiset(sx.union(sy)):
            bad_spec += 1
    if bad_spec:
        ok = False
    witnesses.append({"spectrum_trials": trials, "failures": bad_spec})
    status = "pass" if ok else "fail"
    return _report("adhm", {"max_degree": max_degree, "trials": trials}, status, witnesses, seed)


REGISTRY = {
    "heisenberg": (check_heisenberg, "commutator relations on rank <= 3 lattices",
                   {"quick": {"max_degree": 2}, "full": {"max_degree": 4}}),
    "virasoro": (check_virasoro, "Virasoro bracket residuals and vacuum eigenvalue",
                 {"quick": {"max_degree": 3}, "full": {"max_degree": 5}}),
    "integral-virasoro": (check_integral_virasoro, "bracket over the polynomial ring",
                          {"quick": {"max_degree": 3}, "full": {"max_degree": 5}}),
    "lehn": (check_lehn, "cubic operator vs its commutator closed form",
             {"quick": {"max_degree": 3}, "full": {"max_degree": 5}}),
    "reflection": (check_reflection, "intertwining, involution, degree-1 eigenvalue",
                   {"quick": {"max_degree": 2}, "full": {"max_degree": 4}}),
    "expansion": (check_expansion, "inverse-weight expansion sign measurement",
                  {"quick": {"max_degree": 2}, "full": {"max_degree": 3}}),
    "ybe": (check_ybe, "Yang-Baxter residuals (symbolic degree 1 + rational seeds)",
            {"quick": {"max_degree": 2, "trials": 2}, "full": {"max_degree": 2, "trials": 5}}),
    "wlattice": (check_wlattice, "integrality and lattice intersections along lines",
                 {"quick": {"max_degree": 3}, "full": {"max_degree": 5}}),
    "kernel": (check_kernel, "diagonal-annihilator kernels vs IH series",
               {"quick": {"max_degree": 3}, "full": {"max_degree": 5}}),
    "characters": (check_characters, "series identities and the nine-type table",
                   {"quick": {"max_degree": 6}, "full": {"max_degree": 10}}),
    "frenkel-kac": (check_frenkel_kac, "vertex-realization sizes for ADE",
                    {"quick": {"max_degree": 6}, "full": {"max_degree": 10}}),
    "adhm": (check_adhm, "fixed points, monad identity, spectra",
             {"quick": {"max_degree": 4, "trials": 20}, "full": {"max_degree": 6, "trials": 100}}),
}


def run_check(name: str, **kwargs) -> dict:
    if name not in REGISTRY:
        raise KeyError(name)
    fn = REGISTRY[name][0]
    return fn(**{k: v for k, v in kwargs.items() if v is not None})


def run_suite(profile: str = "quick", seed: int = 0) -> dict:
    checks = []
    status = "pass"
    for name, (fn, _desc, profiles) in REGISTRY.items():
        kwargs = dict(profiles[profile])
        kwargs["seed"] = seed
        rep = fn(**kwargs)
        checks.append(rep)
        if rep["status"] == "fail":
            status = "fail"
    return {"suite": "fockforge", "profile": profile, "seed": seed,
            "status": status, "checks": checks}


def _emit(obj: dict, json_path: str | None) -> None:
    text = json.dumps(obj, sort_keys=True, indent=2) + "\n"
    sys.stdout.write(text)
    if json_path:
        with open(json_path, "w", encoding="utf-8") as fh:
            fh.write(text)


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="fockforge",
                                     description="exact checks for Fock-space algebra")
    sub = parser.add_subparsers(dest="command")

    p_list = sub.add_parser("list", help="list registered checks")
    p_list.add_argument("--json", default=None)
    p_list.add_argument("--prefix", default=None)

    p_check = sub.add_parser("check", help="run one check")
    p_check.add_argument("name")
    p_check.add_argument("--max-degree", type=int, default=None, dest="max_degree")
    p_check.add_argument("--seed", type=int, default=0)
    p_check.add_argument("--trials", type=int, default=None)
    p_check.add_argument("--type", default=None, dest="typ")
    p_check.add_argument("--rank", type=int, default=None)
    p_check.add_argument("--json", default=None)

    p_char = sub.add_parser("char", help="level-1 multiplicity table")
    p_char.add_argument("--type", required=True, dest="typ")
    p_char.add_argument("--max", type=int, default=10)
    p_char.add_argument("--json", default=None)

    p_suite = sub.add_parser("suite", help="run the whole registry")
    p_suite.add_argument("--profile", choices=("quick", "full"), default="quick")
    p_suite.add_argument("--seed", type=int, default=0)
    p_suite.add_argument("--json", default=None)

    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help(sys.stderr)
        return 2

    if args.command == "list":
        entries = [
            {"check": name, "description": desc,
             "flags": ["--max-degree", "--seed", "--trials"],
             "profiles": profiles}
            for name, (_fn, desc, profiles) in sorted(REGISTRY.items())
            if args.prefix is None or name.startswith(args.prefix)
        ]
        _emit({"checks": entries}, args.json or None)
        print(f"{len(entries)} checks registered", file=sys.stderr)
        return 0

    if args.command == "char":
        try:
            typ = chars.AffineType.parse(args.typ)
        except (ValueError, IndexError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        coeffs = [chars.level1_multiplicity(typ, d) for d in range(args.max + 1)]
        if args.json is not None:
            _emit({"type": args.typ, "dual": typ.dual_label, "coefficients": coeffs},
                  args.json or None)
        else:
            for d, c in enumerate(coeffs):
                sys.stdout.write(f"{args.typ}\t{d}\t{c}\n")
        print(f"{args.typ} = {typ.dual_label}: coefficients up to q^{args.max}",
              file=sys.stderr)
        return 0

    if args.command == "check":
        if args.name not in REGISTRY:
            print(f"error: unknown check {args.name!r}; see `fockforge list`",
                  file=sys.stderr)
            return 2
        t0 = time.time()
        kwargs = {"seed": args.seed}
        if args.max_degree is not None:
            kwargs["max_degree"] = args.max_degree
        if args.trials is not None:
            kwargs["trials"] = args.trials
        if args.rank is not None:
            kwargs["rank"] = args.rank
        rep = run_check(args.name, **kwargs)
        _emit(rep, args.json)
        print(f"[{rep['status'].upper()}] {args.name} ({time.time() - t0:.1f}s)",
              file=sys.stderr)
        return 0 if rep["status"] in ("pass", "measured") else 1

    if args.command == "suite":
        t0 = time.time()
        rep = run_suite(args.profile, args.seed)
        _emit(rep, args.json)
        for c in rep["checks"]:
            print(f"[{c['status'].upper()}] {c['check']}", file=sys.stderr)
        print(f"suite {rep['status']} ({time.time() - t0:.1f}s)", file=sys.stderr)
        return 0 if rep["status"] == "pass" else 1

    return 2


if __name__ == "__main__":
    sys.exit(main())
