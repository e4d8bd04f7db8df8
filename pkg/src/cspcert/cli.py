"""Command-line front-end.

Subcommands: analyze-predicate, run-hybrid, dict-test, round, lab.
Exit codes: 0 success/Accept, 2 Reject, 1 error.  Errors go to stderr as JSON.
All randomized outputs carry the seed and a config hash in their header.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import RunConfig
from .csp import InstanceFormatError, parse_instance
from .embedding import (
    Relation3,
    find_preserving_actions,
    has_z_embedding,
    is_pairwise_connected,
    universal_embedding,
)
from .ge import build_master_groups, build_system, solve_system
from .hybrid import HybridConfig, run_hybrid
from .rounding import Decomposition, RoundingFunction, dict_accept_prob, estimate_round_value, trivial_decomposition
from .sdp import Infeasible


def _emit(obj: dict, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(obj, indent=2, sort_keys=True))
    else:
        _print_table(obj)


def _print_table(obj: dict, indent: int = 0) -> None:
    pad = "  " * indent
    for key in sorted(obj):
        val = obj[key]
        if isinstance(val, dict):
            print(f"{pad}{key}:")
            _print_table(val, indent + 1)
        elif isinstance(val, list) and len(val) > 8:
            print(f"{pad}{key}: [{len(val)} entries]")
        else:
            print(f"{pad}{key}: {val}")


def _fail(message: str, detail: str = "") -> int:
    sys.stderr.write(json.dumps({"error": message, "detail": detail}) + "\n")
    return 1


def _config_from_args(args) -> RunConfig:
    return RunConfig(
        tol=args.tol,
        max_iter=args.max_iter,
        tau_supp=args.tau_supp,
        seed=args.seed,
    )


def cmd_analyze_predicate(args) -> int:
    cfg = _config_from_args(args)
    try:
        rel = Relation3.from_json(json.loads(Path(args.relation).read_text()))
        emb = universal_embedding(rel)
        report = {
            **cfg.header(),
            "relation": rel.to_json(),
            "embedding": emb.to_json(),
            "z_embedding": has_z_embedding(rel),
            "pairwise_connected": is_pairwise_connected(rel),
        }
        if args.actions:
            q = rel.sizes[0]
            actions = find_preserving_actions([rel.tuples], q)
            report["preserving_actions"] = [[x + 1 for x in tau] for tau in actions]
        _emit(report, args.format)
        return 0
    except (OSError, ValueError, KeyError) as e:
        return _fail("analyze-predicate failed", str(e))


def cmd_run_hybrid(args) -> int:
    cfg = _config_from_args(args)
    try:
        inst = parse_instance(Path(args.instance).read_text())
    except (OSError, InstanceFormatError) as e:
        return _fail("could not load instance", str(e))
    try:
        verdict = run_hybrid(
            inst,
            HybridConfig(tol=cfg.tol, max_iter=cfg.max_iter, tau_supp=cfg.tau_supp),
        )
    except (ValueError, RuntimeError) as e:
        return _fail("hybrid run failed", str(e))
    report = {**cfg.header(), **verdict.to_json()}
    if args.out:
        Path(args.out).write_text(json.dumps(report, indent=2, sort_keys=True))
    _emit(report, args.format)
    return 0 if verdict.accepted else 2


def _solution_for_dict_test(inst, cfg: RunConfig):
    from .sdp import build_formulation, preserve_all_integral, solve_value1

    sol = preserve_all_integral(inst, tol=cfg.tol, max_iter=cfg.max_iter, tau_supp=cfg.tau_supp)
    if isinstance(sol, Infeasible):
        sol = solve_value1(
            build_formulation(inst), tol=cfg.tol, max_iter=cfg.max_iter, tau_supp=cfg.tau_supp
        )
    if isinstance(sol, Infeasible):
        raise ValueError(f"no value-1 solution: {sol.reason}")
    return sol


def cmd_dict_test(args) -> int:
    cfg = _config_from_args(args)
    try:
        inst = parse_instance(Path(args.instance).read_text())
        fobj = json.loads(Path(args.function).read_text())
        f = RoundingFunction.from_json(fobj, inst.q)
        sol = _solution_for_dict_test(inst, cfg)
        if args.mode == "exact":
            p = dict_accept_prob(
                inst, sol, f, mode="exact", eps=args.eps,
                budget=cfg.exact_budget, denom_cap=cfg.exact_denom_cap,
            )
            report = {**cfg.header(), "mode": "exact",
                      "accept_probability": f"{p.numerator}/{p.denominator}",
                      "accept_probability_float": float(p)}
        else:
            samples = int(args.mode.split(":", 1)[1]) if ":" in args.mode else 100_000
            est, (lo, hi) = dict_accept_prob(
                inst, sol, f, mode="mc", samples=samples, seed=cfg.seed, eps=args.eps
            )
            report = {**cfg.header(), "mode": f"mc:{samples}",
                      "accept_probability": est, "wilson_95": [lo, hi]}
        _emit(report, args.format)
        return 0
    except (OSError, ValueError, KeyError, InstanceFormatError) as e:
        return _fail("dict-test failed", str(e))


def cmd_round(args) -> int:
    cfg = _config_from_args(args)
    try:
        inst = parse_instance(Path(args.instance).read_text())
        sol = _solution_for_dict_test(inst, cfg)
        data = build_master_groups(inst, sol, cfg.tau_supp)
        space = solve_system(build_system(inst, sol, data))
        if space.empty:
            return _fail("equation system has no solutions; nothing to round")
        if args.decomposition:
            dec = Decomposition.from_json(json.loads(Path(args.decomposition).read_text()), data)
        elif args.function:
            f = RoundingFunction.from_json(json.loads(Path(args.function).read_text()), inst.q)
            dec = trivial_decomposition(inst, sol, data, f, args.degree)
        else:
            return _fail("need --decomposition or --function")
        dec.validate()
        mean, (lo, hi) = estimate_round_value(inst, sol, space, dec, args.trials, seed=cfg.seed)
        report = {**cfg.header(), "trials": args.trials, "value": mean, "ci95": [lo, hi]}
        _emit(report, args.format)
        return 0
    except (OSError, ValueError, KeyError, InstanceFormatError) as e:
        return _fail("round failed", str(e))


def cmd_lab(args) -> int:
    cfg = _config_from_args(args)
    from .experiments import run_sweep

    try:
        rows = run_sweep(args.sweep, seed=cfg.seed)
    except ValueError as e:
        return _fail("lab failed", str(e))
    header = rows[0]
    lines = [",".join(header)] + [",".join(str(x) for x in r) for r in rows[1:]]
    text = "\n".join(lines)
    if args.out:
        Path(args.out).write_text(text + "\n")
    print(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cspcert")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "table"), default="json")
    common.add_argument("--tol", type=float, default=1e-7)
    common.add_argument("--max-iter", dest="max_iter", type=int, default=100_000)
    common.add_argument("--tau-supp", dest="tau_supp", type=float, default=1e-6)
    common.add_argument("--seed", type=int, default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_text: str):
        return sub.add_parser(name, help=help_text, parents=[common])

    p = add("analyze-predicate", "embedding report for a relation file")
    p.add_argument("--relation", required=True)
    p.add_argument("--actions", action="store_true", help="also search for preserving actions")
    p.set_defaults(func=cmd_analyze_predicate)

    p = add("run-hybrid", "certify an instance")
    p.add_argument("--instance", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_run_hybrid)

    p = add("dict-test", "acceptance probability of a rounding function")
    p.add_argument("--instance", required=True)
    p.add_argument("--function", required=True)
    p.add_argument("--mode", default="exact", help="exact or mc:N")
    p.add_argument("--eps", type=float, default=0.0,
                   help="per-coordinate uniform resampling rate (imperfect-completeness variant)")
    p.set_defaults(func=cmd_dict_test)

    p = add("round", "Monte-Carlo value of the rounding scheme")
    p.add_argument("--instance", required=True)
    p.add_argument("--decomposition", default=None)
    p.add_argument("--function", default=None, help="build the trivial decomposition from a table")
    p.add_argument("--degree", type=int, default=2)
    p.add_argument("--trials", type=int, default=100)
    p.set_defaults(func=cmd_round)

    p = add("lab", "trend experiments, CSV output")
    p.add_argument("--sweep", required=True,
                   choices=("lowdeg-ratio", "mixing-vs-rank", "coupling-sd-vs-rank"))
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_lab)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
