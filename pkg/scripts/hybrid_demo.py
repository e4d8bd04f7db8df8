"""Certify every bundled fixture instance and print a verdict table.

Usage: python3 scripts/hybrid_demo.py [--fixtures fixtures]
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from cspcert.csp import opt_bruteforce, parse_instance
from cspcert.hybrid import HybridConfig, run_hybrid


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--fixtures", default=str(Path(__file__).resolve().parents[1] / "fixtures"))
    args = ap.parse_args()
    files = sorted(Path(args.fixtures).glob("*.json"))
    files = [f for f in files if ".relation." not in f.name and ".function." not in f.name]
    print(f"{'instance':34} {'opt':>6} {'verdict':28} {'iters':>5} {'time':>7}")
    for f in files:
        inst = parse_instance(f.read_text())
        opt, _ = opt_bruteforce(inst)
        t0 = time.time()
        v = run_hybrid(inst, HybridConfig(max_iter=20_000))
        dt = time.time() - t0
        verdict = "Accept" if v.accepted else f"Reject({v.reason.value})"
        print(f"{f.stem:34} {float(opt):6.3f} {verdict:28} {v.iterations:5d} {dt:6.2f}s")


if __name__ == "__main__":
    main()
