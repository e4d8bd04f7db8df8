"""Acceptance probabilities of dictators vs random table functions on a
certified instance.

Usage: python3 scripts/dictator_vs_random.py [--instance fixtures/threelin_f2_single.json]
       [--R 4] [--n-random 20] [--seed 0]
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from cspcert.csp import opt_bruteforce, parse_instance
from cspcert.rounding import RoundingFunction, dict_accept_prob
from cspcert.sdp import SdpSolution, preserve_all_integral

ROOT = Path(__file__).resolve().parents[1]


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--instance", default=str(ROOT / "fixtures" / "threelin_f2_single.json"))
    ap.add_argument("--R", type=int, default=4)
    ap.add_argument("--n-random", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    inst = parse_instance(Path(args.instance).read_text())
    sol = preserve_all_integral(inst)
    if not isinstance(sol, SdpSolution):
        print(f"no value-1 relaxation solution: {sol.reason}")
        return
    opt, _ = opt_bruteforce(inst)
    print(f"instance: {args.instance}  OPT = {float(opt):.3f}  relaxation value = {sol.value:.6f}")
    for i in range(args.R):
        p = dict_accept_prob(inst, sol, RoundingFunction.dictator(inst.q, args.R, i), mode="exact")
        print(f"dictator coordinate {i}: accept = {p}")
    rng = np.random.default_rng(args.seed)
    probs = []
    for _ in range(args.n_random):
        table = rng.integers(0, inst.q, inst.q**args.R)
        p = dict_accept_prob(inst, sol, RoundingFunction(inst.q, args.R, table), mode="exact")
        probs.append(float(p))
    print(
        f"{args.n_random} random tables: min {min(probs):.4f}  "
        f"mean {sum(probs)/len(probs):.4f}  max {max(probs):.4f}"
    )


if __name__ == "__main__":
    main()
