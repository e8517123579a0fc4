"""Command-line front end: ``python -m leafclass <subcommand> ...``.

Every run prints (or writes) a JSON report; exit status 0 means every check
passed, 1 means a mathematical check failed, 2 means bad usage or config.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import random
import sys
import time
from fractions import Fraction

from . import __version__
from .errors import LeafClassError
from .report import CheckList, jsonable

SCHEMA_VERSION = "1.0"
PRECISION_ENV = "LEAFCLASS_PRECISION"


class UsageError(Exception):
    pass


def _default_precision() -> int:
    raw = os.environ.get(PRECISION_ENV)
    if raw is None:
        return 256
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{PRECISION_ENV} must be an integer, got {raw!r}") from None


def _bounded(name: str, value: int, lo: int, hi: int) -> int:
    if not lo <= value <= hi:
        raise UsageError(f"--{name} must be in [{lo}, {hi}], got {value}")
    return value


# ---------------------------------------------------------------------------
# subcommands: each returns (config echo, checks, result, csv rows or None)
# ---------------------------------------------------------------------------

def _random_jet(rng: random.Random, order: int, base_zero: bool) -> "Jet":
    from .jets import Jet

    def q():
        return Fraction(rng.randint(-9, 9), rng.randint(1, 6))

    entries = [Fraction(0) if base_zero else q(), Fraction(rng.choice([-1, 1]) * rng.randint(1, 9), rng.randint(1, 6))]
    entries += [q() for _ in range(order - 1)]
    return Jet(entries)


def cmd_jet(args):
    from .jets import (extend_morphism, extension_closed_form, jet_compose, jet_compose_series,
                       jet_invert)

    order = _bounded("order", args.order, 1, 12)
    samples = _bounded("samples", args.samples, 1, 1000)
    rng = random.Random(args.seed)
    checks = CheckList()
    bad = {"faa_di_bruno": None, "associativity": None, "inverse": None}
    for i in range(samples):
        N = rng.randint(1, order)
        g, f = _random_jet(rng, N, False), _random_jet(rng, N, False)
        if bad["faa_di_bruno"] is None and jet_compose(g, f) != jet_compose_series(g, f):
            bad["faa_di_bruno"] = {"sample": i, "order": N}
        a, b, c = (_random_jet(rng, order, True) for _ in range(3))
        if bad["associativity"] is None and jet_compose(jet_compose(a, b), c) != jet_compose(a, jet_compose(b, c)):
            bad["associativity"] = {"sample": i}
        inv = jet_invert(a)
        ident = jet_compose(a, inv)
        if bad["inverse"] is None and not (ident == jet_compose(inv, a) and ident == type(a).identity(order)):
            bad["inverse"] = {"sample": i}
    checks.add("faa_di_bruno_matches_series", bad["faa_di_bruno"] is None, bad["faa_di_bruno"])
    checks.add("associativity", bad["associativity"] is None, bad["associativity"])
    checks.add("two_sided_inverse", bad["inverse"] is None, bad["inverse"])
    ext_order = max(2, min(order, 8))
    gen, closed = extend_morphism(ext_order), extension_closed_form(ext_order)
    mismatch = next((n for n in [0] + list(range(2, ext_order + 1)) if gen[n] != closed[n]), None)
    checks.add("extension_matches_closed_form", mismatch is None,
               None if mismatch is None else {"n": mismatch})
    result = {"extension": {f"beta_{n}": str(gen[n]) for n in [0] + list(range(2, min(ext_order, 4) + 1))}}
    return {"order": order, "samples": samples}, checks, result, None


def cmd_wn(args):
    from .linalg import PRIMES
    from .wn import cohomology_ranks

    n = _bounded("n", args.n, 1, 3)
    weight = _bounded("weight", args.weight, 0, 6)
    top = _bounded("max-degree", args.max_degree, 0, 10)
    table = cohomology_ranks(n, weight, top, relative=args.relative, budget=args.budget)
    checks = CheckList()
    bad = next((r.degree for r in table.rows if any(v != r.rank for v in r.modular_ranks.values())), None)
    checks.add("exact_and_modular_ranks_agree", bad is None, None if bad is None else {"degree": bad})
    checks.add("euler_characteristic", table.euler_consistent,
               None if table.euler_consistent else {"betti": table.euler_betti, "dims": table.euler_dims})
    rows = [["degree", "dim", "rank", "betti"] + [f"rank_mod_{p}" for p in PRIMES]]
    for r in table.rows:
        rows.append([str(r.degree), str(r.dim), str(r.rank), str(r.betti)]
                    + [str(r.modular_ranks[p]) for p in PRIMES])
    result = {
        "betti": [r.betti for r in table.rows],
        "rows": [{"degree": r.degree, "dim": r.dim, "rank": r.rank, "betti": r.betti,
                  "modular_ranks": {str(p): v for p, v in r.modular_ranks.items()}} for r in table.rows],
    }
    cfg = {"n": n, "weight": weight, "max_degree": top, "relative": args.relative, "budget": args.budget}
    return cfg, checks, result, rows


def cmd_gk(args):
    from .gk import (alpha, chain_map_defects, chern_sign_constant, connection_and_curvature,
                     gk_form_components)
    from .wn import chern_cocycle

    order = _bounded("order", args.order, 3, 8)
    which = {"chain-map", "omega", "curvature", "reduce"} if args.check == "all" else {args.check}
    checks, result = CheckList(), {}
    if "omega" in which:
        result["omega"] = [str(w) for w in gk_form_components(order)[:3]]
    if "chain-map" in which:
        from .wn import gen

        defects = {d["generator"]: d for d in chain_map_defects(order, args.max_r)}
        for r in range(args.max_r + 1):
            g = str(gen(1, *([1] * r)))
            checks.add(f"chain_map[{g}]", g not in defects, defects.get(g))
    if "curvature" in which:
        _, R = connection_and_curvature(order)
        psi = alpha(chern_cocycle(1, 1), order)
        checks.add("trR_equals_minus_alpha_Psi1", R == -psi)
        result["curvature"] = {"R": str(R), "alpha_Psi1": str(psi),
                               "trR_equals_alpha_Psi1": R == psi}
    if "reduce" in which:
        try:
            c = chern_sign_constant(order)
            checks.add("reduces_to_multiple_of_dy2_dy0", True, values={"constant": c})
        except (LeafClassError, ValueError) as exc:
            checks.add("reduces_to_multiple_of_dy2_dy0", False, witness=str(exc))
    return {"order": order, "check": args.check, "max_r": args.max_r}, checks, result, None


def cmd_reeb(args):
    from .reeb import check_limit_conditions, check_profile_conditions, resolve_profile

    prec = _bounded("precision", args.precision or _default_precision(), 64, 100_000)
    n_max = _bounded("orders", args.orders, 2, 10)
    k_max = _bounded("grid", args.grid, 1, 8)
    f = resolve_profile(args.profile)
    checks = CheckList()
    for c in check_profile_conditions(f, max_order=max(2, min(n_max, 4)), tail=max(2, k_max), prec=prec):
        checks.checks.append(c)
    report = check_limit_conditions(f, n_max, k_max, prec)
    checks.checks.extend(report.checks.checks)
    cfg = {"profile": args.profile, "orders": n_max, "grid": k_max, "precision": prec}
    return cfg, checks, report.to_dict(), report.csv_rows()


def cmd_cech(args):
    from .atlas import composable_strings
    from .cech import (chern_cochain, random_cochain, total_differential, total_first_nonzero,
                       verify_pullback_identity)
    from .config import load_config, presentation_from_config
    from .reeb import resolve_profile

    data = load_config(args.config)
    settings = dict(data.get("checks", {}))
    for key in ("word_bound", "max_k", "cochains"):
        if getattr(args, key) is not None:
            settings[key] = getattr(args, key)
    bound = _bounded("word-bound", int(settings.get("word_bound", 2)), 1, 3)
    max_k = _bounded("max-k", int(settings.get("max_k", 2)), 0, 2)
    count = _bounded("cochains", int(settings.get("cochains", 12)), 0, 1000)
    profiles = {"phi": resolve_profile(data["profile"])} if "profile" in data else {}
    P = presentation_from_config(data, profiles)
    checks, result = CheckList(), {}
    result["strings"] = {str(k): len(composable_strings(P, k, bound)) for k in range(max_k + 3)}
    result["words"] = [w.label for w in P.words(bound)]

    witness = {"delta": None, "D": None}
    for i in range(count):
        k, l = i % (max_k + 1), (i // (max_k + 1)) % 2
        w = random_cochain(P, k, l, args.seed * 100_003 + i)
        DD = total_differential(total_differential(w, P), P)
        hit = total_first_nonzero(DD, P, bound)
        if hit is not None:
            (kk, ll), s = hit
            entry = {"cochain": i, "k": k, "l": l, "bidegree": [kk, ll], "string": s.label}
            if (kk, ll) == (k + 2, l) and witness["delta"] is None:
                witness["delta"] = entry
            if witness["D"] is None:
                witness["D"] = entry
    checks.add("delta_squared_zero", witness["delta"] is None, witness["delta"], {"cochains": count})
    checks.add("D_squared_zero", witness["D"] is None, witness["D"], {"cochains": count})

    name = settings.get("pullback_identity")
    if name and P.charts and all(c.variable(2) in c.ctx.var_index for c in P.charts):
        hit = total_first_nonzero(total_differential(chern_cochain(P), P), P, bound)
        checks.add("chern_representative_D_closed", hit is None,
                   None if hit is None else {"bidegree": list(hit[0]), "string": hit[1].label})
        ok = verify_pullback_identity(P, 2, name)
        checks.add("pullback_identity", ok, None if ok else {"morphism": name})
        result["pullback_identity_literal_orientation"] = verify_pullback_identity(P, 2, name, "literal")
    cfg = {"config": args.config or "builtin:reeb", "word_bound": bound, "max_k": max_k, "cochains": count}
    return cfg, checks, result, None


def cmd_site(args):
    from .site import mutate_site, reeb_site, verify_site_axioms

    period = _bounded("period", args.period, 1, 12)
    site = reeb_site(period)
    if args.mutate:
        site = mutate_site(site, args.mutate)
    checks = verify_site_axioms(site)
    result = {
        "objects": site.objects,
        "morphisms": [m.name for m in site.morphisms],
        "covers": {o: [sorted(S) for S in v] for o, v in site.covers.items()},
    }
    return {"period": period, "mutate": args.mutate}, checks, result, None


def _parse_lambda(text: str):
    parts = []
    for item in text.split(","):
        if "=" not in item:
            raise UsageError(f"--lambda entries look like var=expr, got {item!r}")
        var, expr = item.split("=", 1)
        parts.append((var.strip(), expr.strip()))
    return tuple(parts)


def cmd_probe(args):
    from .errors import CandidateNotClosed, CandidateNotPeriodic
    from .probe import Candidate, default_candidates, nontriviality_probe
    from .reeb import reeb_presentation, resolve_profile

    prec = _bounded("precision", args.precision or _default_precision(), 64, 100_000)
    order = _bounded("order", args.order, 3, 6)
    k_max = _bounded("grid", args.grid, 2, 6)
    f = resolve_profile(args.profile)
    P = reeb_presentation(f, order)
    pool = {c.name: c for c in default_candidates()}
    chosen = []
    for name in args.candidate or []:
        if name not in pool:
            raise UsageError(f"unknown candidate {name!r}; known: {', '.join(pool)}")
        chosen.append(pool[name])
    if args.potential:
        chosen.append(Candidate("potential", potential=args.potential))
    if args.lam:
        chosen.append(Candidate("lambda", _parse_lambda(args.lam)))
    if not chosen:
        chosen = list(pool.values())
    checks, reports = CheckList(), []
    for cand in chosen:
        try:
            rep = nontriviality_probe(P, cand, f, range(1, k_max + 1), prec)
        except CandidateNotClosed as exc:
            checks.add(f"closed[{cand.name}]", False, witness=str(exc))
            continue
        except CandidateNotPeriodic as exc:
            checks.add(f"periodic[{cand.name}]", False, witness=str(exc))
            continue
        reports.append(rep.to_dict())
        bad = next((t.name for t in rep.terms[1:] if t.verdict != "bounded"), None)
        checks.add(f"contradiction_evidence[{cand.name}]", rep.contradiction,
                   None if rep.contradiction else {"term": bad or rep.terms[0].name})
    cfg = {"profile": args.profile, "order": order, "grid": k_max, "precision": prec,
           "candidates": [c.describe() for c in chosen]}
    return cfg, checks, {"reports": reports}, None


COMMANDS = {
    "jet": cmd_jet, "wn": cmd_wn, "gk": cmd_gk, "reeb": cmd_reeb,
    "cech": cmd_cech, "site": cmd_site, "probe": cmd_probe,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="random seed (recorded in the report)")
    common.add_argument("--output", "-o", help="write the report here instead of stdout")
    common.add_argument("--format", choices=["json", "csv", "text"], default="json")
    common.add_argument("--csv", dest="csv_path", help="also write the CSV table here (wn, reeb)")
    common.add_argument("--timing", action="store_true", help="record wall-clock time in the report")

    parser = argparse.ArgumentParser(prog="leafclass", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("jet", parents=[common], help="jet composition, inversion and extension checks")
    p.add_argument("--order", type=int, default=8)
    p.add_argument("--samples", type=int, default=20)

    p = sub.add_parser("wn", parents=[common], help="weight-graded cohomology of C*(W_n)")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--weight", type=int, default=0)
    p.add_argument("--max-degree", type=int, default=5)
    p.add_argument("--relative", action="store_true", help="use the gl_n-relative subcomplex")
    p.add_argument("--budget", type=int, default=50_000, help="max basis size per degree")

    p = sub.add_parser("gk", parents=[common], help="Gelfand-Kazhdan form and Chern-Weil checks")
    p.add_argument("--order", type=int, default=6)
    p.add_argument("--check", choices=["chain-map", "omega", "curvature", "reduce", "all"], default="all")
    p.add_argument("--max-r", type=int, default=3)

    p = sub.add_parser("reeb", parents=[common], help="profile conditions and boundary limits")
    p.add_argument("--profile", default="default", help="'default' or 'expr:<text in t>'")
    p.add_argument("--orders", type=int, default=5, help="largest n for f^(n)/(f')^n")
    p.add_argument("--grid", type=int, default=4, help="k_max for t_k = 1 - 10^-k")
    p.add_argument("--precision", type=int, default=None, help=f"bits (default ${PRECISION_ENV} or 256)")

    p = sub.add_parser("cech", parents=[common], help="Cech-de Rham checks on a presentation config")
    p.add_argument("--config", help="JSON presentation config (default: bundled Reeb presentation)")
    p.add_argument("--word-bound", type=int, default=None)
    p.add_argument("--max-k", type=int, default=None)
    p.add_argument("--cochains", type=int, default=None)

    p = sub.add_parser("site", parents=[common], help="Grothendieck topology axioms on the Reeb site")
    p.add_argument("--period", type=int, default=3)
    p.add_argument("--mutate", type=int, choices=[0, 1, 2, 3], default=0,
                   help="break axiom 1, 2 or 3 on purpose")

    p = sub.add_parser("probe", parents=[common], help="nontriviality probe for candidate primitives")
    p.add_argument("--profile", default="default")
    p.add_argument("--order", type=int, default=4)
    p.add_argument("--grid", type=int, default=4)
    p.add_argument("--precision", type=int, default=None)
    p.add_argument("--candidate", action="append", help="named candidate (repeatable)")
    p.add_argument("--potential", help="candidate d(<expr>) on the alpha chart")
    p.add_argument("--lambda", dest="lam", help="candidate components, e.g. 'alpha_2=3/2,alpha_0=0'")
    return parser


def _text(report: dict) -> str:
    lines = [f"{report['command']}: {'PASS' if report['passed'] else 'FAIL'}"]
    for c in report["checks"]:
        line = f"  [{c['verdict']}] {c['name']}"
        if "witness" in c:
            line += f"  witness={json.dumps(c['witness'])}"
        lines.append(line)
    return "\n".join(lines) + "\n"


def _csv(rows) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    start = time.perf_counter()
    try:
        cfg, checks, result, rows = COMMANDS[args.command](args)
    except (UsageError, LeafClassError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    elapsed = time.perf_counter() - start
    report = {
        "schema_version": SCHEMA_VERSION,
        "tool_version": __version__,
        "command": args.command,
        "config": jsonable(cfg),
        "seed": args.seed,
        "passed": checks.passed,
        "checks": checks.to_list(),
        "result": jsonable(result),
        "timing": {"seconds": round(elapsed, 3)} if args.timing else None,
    }
    if rows is not None and args.csv_path:
        _emit(_csv(rows), args.csv_path)
    if args.format == "csv":
        if rows is None:
            print(f"error: --format csv is not available for {args.command}", file=sys.stderr)
            return 2
        _emit(_csv(rows), args.output)
    elif args.format == "text":
        _emit(_text(report), args.output)
    else:
        _emit(json.dumps(report, indent=2, ensure_ascii=False) + "\n", args.output)
    return 0 if checks.passed else 1


def main() -> None:
    sys.exit(run())
