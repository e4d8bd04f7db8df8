"""Run configuration shared by the CLI and the experiment scripts."""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass


@dataclass(frozen=True)
class RunConfig:
    tol: float = 1e-7
    max_iter: int = 100_000
    tau_supp: float = 1e-6
    enum_budget: int = 10_000_000
    exact_budget: int = 100_000_000
    exact_denom_cap: int = 4096
    seed: int = 0

    def __post_init__(self) -> None:
        if min(self.tol, self.tau_supp) <= 0 or min(self.max_iter, self.enum_budget) <= 0:
            raise ValueError("config values must be positive")

    def to_json(self) -> dict:
        return asdict(self)

    def digest(self) -> str:
        blob = json.dumps(self.to_json(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]

    def header(self) -> dict:
        return {"config": self.to_json(), "config_sha256": self.digest(), "seed": self.seed}
