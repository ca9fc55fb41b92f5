"""Batch front end: ingest a structure definition, run verification
suites, emit a machine-readable report.

Usage:
    projconf run <config-file> [--out PATH] [--seed INT]
                 [--degree-cap INT] [--suite NAME]...
    projconf validate <config-file>

Config file (TOML): keys n, suites, degree_cap, output_path, seed and a
[gamma] table mapping "a,b,c" index triples (1-based, symmetric in b,c) to
expression strings in the chart grammar (variables x1..xn).

Exit codes: 0 all claims verified, 1 claim failure (report still written),
2 parse/validation error, 3 degree cap exceeded.
"""

from __future__ import annotations

import argparse
import random
import sys
import time

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

from . import __version__
from .projective import ProjectiveStructure
from .construction import chart_context
from .reports import ReportDocument, SuiteReport
from .symfield import DegreeCapExceeded, ExprError, Scalars
from . import suites as suites_mod

KNOWN_SUITES = ("projective", "dim2", "highdim", "normalize", "twistor",
                "einstein2d")
DIM2_ONLY = {"dim2", "einstein2d"}
HIGHDIM_ONLY = {"highdim"}


def load_config(path, overrides=None):
    """Parse + validate a config file; returns (config, diagnostics)."""
    diags = []
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except FileNotFoundError:
        return None, [f"config file not found: {path}"]
    except tomllib.TOMLDecodeError as e:
        return None, [f"config parse error: {e}"]
    cfg = {
        "n": raw.get("n"),
        "gamma": dict(raw.get("gamma", {})),
        "suites": list(raw.get("suites", [])),
        "degree_cap": raw.get("degree_cap", 40),
        "output_path": raw.get("output_path"),
        "seed": raw.get("seed", 0),
    }
    if overrides:
        for key, val in overrides.items():
            if val is not None:
                cfg[key] = val
    n = cfg["n"]
    if not isinstance(n, int) or n < 2:
        diags.append("n must be an integer >= 2")
        return cfg, diags
    for s in cfg["suites"]:
        if s not in KNOWN_SUITES:
            diags.append(f"unknown suite {s!r}")
        elif s in DIM2_ONLY and n != 2:
            diags.append(f"suite {s!r} requires n = 2 (got n = {n})")
        elif s in HIGHDIM_ONLY and n < 3:
            diags.append(f"suite {s!r} requires n >= 3 (got n = {n})")
    xnames = tuple(f"x{i + 1}" for i in range(n))
    xctx = Scalars(xnames, degree_cap=cfg["degree_cap"])
    seen = {}
    for key, text in cfg["gamma"].items():
        try:
            a, b, c = (int(t) for t in key.split(","))
        except ValueError:
            diags.append(f"gamma key {key!r} is not an index triple a,b,c")
            continue
        if not all(1 <= i <= n for i in (a, b, c)):
            diags.append(f"gamma index out of range in {key!r}")
            continue
        try:
            value = xctx.parse(str(text))
        except ExprError as e:
            diags.append(f"gamma[{key}]: {e}")
            continue
        canon = (a, min(b, c), max(b, c))
        if canon in seen and not (seen[canon][1] - value).is_zero():
            diags.append(
                f"gamma asymmetric at indices ({a},{b},{c}): "
                f"{seen[canon][0]!r} vs {text!r}")
        seen[canon] = (text, value)
    cfg["_gamma_texts"] = {k: v[0] for k, v in seen.items()}
    return cfg, diags


def build_structure(cfg):
    n = cfg["n"]
    ctx = chart_context(n, degree_cap=cfg["degree_cap"])
    gamma = {}
    for (a, b, c), text in cfg["_gamma_texts"].items():
        gamma[(a - 1, b - 1, c - 1)] = ctx.parse(str(text))
    ps = ProjectiveStructure(n, gamma, ctx)
    specialized = not ps.is_special()
    if specialized:
        ps = ps.specialize()
    return ps, specialized


def run_suites(cfg, ps):
    reports = []
    rng = random.Random(cfg["seed"])
    for name in cfg["suites"]:
        if name == "projective":
            rep = suites_mod.suite_projective(ps)
            _random_invariance_claim(rep, ps, rng)
        elif name == "dim2":
            rep = suites_mod.suite_dim2(ps)
        elif name == "highdim":
            rep = suites_mod.suite_highdim(ps)
        elif name == "normalize":
            rep, _ = suites_mod.suite_normalize(ps)
        elif name == "twistor":
            rep = suites_mod.suite_twistor(ps, both_spinors=(ps.n == 2))
        elif name == "einstein2d":
            rep = suites_mod.suite_einstein2d()
        else:
            rep = SuiteReport(name)
            rep.add(f"{name}-unknown", False, witness="unknown suite")
        reports.append(rep)
    return reports


def _random_invariance_claim(rep, ps, rng):
    """Seeded spot check: curvature invariants under a projective change."""
    t0 = time.time()
    ctx = ps.ctx
    n = ps.n
    ups = []
    for _ in range(n):
        u = ctx.const(rng.randint(-2, 2))
        v1 = ctx.var(f"x{rng.randint(1, n)}")
        v2 = ctx.var(f"x{rng.randint(1, n)}")
        ups.append(u + rng.randint(-2, 2) * v1 * v2)
    before = ps.curvature()
    after = ps.proj_change(ups).curvature()
    if n == 2:
        ok = all((before.A[a][b][c] - after.A[a][b][c]).is_zero()
                 for a in range(n) for b in range(n) for c in range(n))
        rep.add("proj-cotton-invariance-random-change", ok, started=t0)
    else:
        ok = all((before.C[a][b][c][d] - after.C[a][b][c][d]).is_zero()
                 for a in range(n) for b in range(n)
                 for c in range(n) for d in range(n))
        rep.add("proj-weyl-invariance-random-change", ok, started=t0)


def cmd_validate(args):
    cfg, diags = load_config(args.config)
    if diags:
        for d in diags:
            print(f"diagnostic: {d}")
        return 2
    print("config ok")
    return 0


def cmd_run(args):
    overrides = {"seed": args.seed, "degree_cap": args.degree_cap,
                 "output_path": args.out}
    if args.suite:
        overrides["suites"] = list(args.suite)
    cfg, diags = load_config(args.config, overrides)
    if diags:
        for d in diags:
            print(f"diagnostic: {d}", file=sys.stderr)
        return 2
    try:
        ps, specialized = build_structure(cfg)
        reports = run_suites(cfg, ps)
    except DegreeCapExceeded as e:
        print(f"degree cap exceeded: {e}", file=sys.stderr)
        return 3
    echo = {"n": cfg["n"],
            "gamma": {f"{a},{b},{c}": t
                      for (a, b, c), t in cfg["_gamma_texts"].items()},
            "suites": cfg["suites"],
            "degree_cap": cfg["degree_cap"],
            "specialized_representative": specialized}
    doc = ReportDocument(echo, reports, cfg["seed"], __version__)
    out_path = cfg.get("output_path")
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(doc.to_json())
    for rep in reports:
        for claim in rep.claims:
            print(f"[{rep.id}] {claim.id}: {claim.status}"
                  + (f" ({claim.witness})" if claim.witness else ""))
    ok = doc.all_verified()
    print("result:", "all claims verified" if ok else "claim failures present")
    if out_path:
        print("report written to", out_path)
    return 0 if ok else 1


def main(argv=None):
    parser = argparse.ArgumentParser(prog="projconf", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="run verification suites")
    p_run.add_argument("config")
    p_run.add_argument("--out", default=None)
    p_run.add_argument("--seed", type=int, default=None)
    p_run.add_argument("--degree-cap", type=int, default=None)
    p_run.add_argument("--suite", action="append", default=None)
    p_run.set_defaults(func=cmd_run)
    p_val = sub.add_parser("validate", help="validate a config file")
    p_val.add_argument("config")
    p_val.set_defaults(func=cmd_validate)
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
