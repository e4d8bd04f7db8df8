"""Run the noise-operator trend sweeps and write CSVs.

Usage: python3 scripts/run_trends.py [--out-dir results] [--seed 0]
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from cspcert.experiments import run_sweep


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--out-dir", default="results")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    out = Path(args.out_dir)
    out.mkdir(exist_ok=True)
    for name in ("lowdeg-ratio", "mixing-vs-rank", "coupling-sd-vs-rank"):
        rows = run_sweep(name, seed=args.seed)
        path = out / f"{name.replace('-', '_')}.csv"
        path.write_text("\n".join(",".join(str(x) for x in r) for r in rows) + "\n")
        print(f"{name}:")
        for r in rows:
            print("  " + ", ".join(str(x) for x in r))
        print(f"  -> {path}")


if __name__ == "__main__":
    main()
