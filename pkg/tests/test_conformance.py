"""Randomized end-to-end sweeps: many small instances through the full
pipeline, checked against brute force and global invariants.  Seeded, so
failures reproduce."""

import json
from itertools import product

import numpy as np
import pytest

from cspcert.csp import (
    Predicate3,
    enumerate_satisfying,
    uniform_instance,
)
from cspcert.hybrid import HybridConfig, RejectReason, run_hybrid
from cspcert.sdp import (
    Infeasible,
    SdpSolution,
    build_formulation,
    solve_value1,
)


def random_instances(seed: int, count: int, max_q: int = 3, max_n: int = 5):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        q = int(rng.integers(2, max_q + 1))
        n = int(rng.integers(3, max_n + 1))
        n_cons = int(rng.integers(1, 4))
        all_t = list(product(range(q), repeat=3))
        cons = []
        for _ in range(n_cons):
            k = int(rng.integers(1, len(all_t) + 1))
            sat = frozenset(all_t[i] for i in rng.choice(len(all_t), size=k, replace=False))
            vs = tuple(int(x) for x in rng.choice(n, size=3, replace=False))
            cons.append((vs, Predicate3(q, sat)))
        if {v for c, _ in cons for v in c} != set(range(n)):
            continue
        out.append(uniform_instance(q, n, cons))
    return out


def test_satisfiable_instances_always_sdp_feasible():
    # every satisfiable instance admits a value-1 solve of the default masks
    checked = 0
    for inst in random_instances(seed=501, count=60):
        sats = enumerate_satisfying(inst)
        if not sats:
            continue
        res = solve_value1(build_formulation(inst), max_iter=30_000)
        assert isinstance(res, SdpSolution), "satisfiable instance declared infeasible"
        assert res.value >= 1 - 1e-6 and res.residual <= 1e-7
        checked += 1
    assert checked >= 15


def test_hybrid_sweep_invariants():
    """On every random instance the verdict must satisfy:
    - satisfiable instances are never rejected for relaxation value
      (preserve_sat: each satisfying view survives as a feasible pin);
    - satisfiable runs keep every satisfying assignment inside the masks and
      the equation solution set (asserted internally via check_safety);
    - Accept verdicts carry an all-equal consistency report."""
    cfg = HybridConfig(max_iter=30_000, check_safety=True)
    accepts = rejects = 0
    for inst in random_instances(seed=777, count=40):
        sats = enumerate_satisfying(inst)
        verdict = run_hybrid(inst, cfg)
        if verdict.accepted:
            accepts += 1
            assert all(r.equal for r in verdict.report)
            assert verdict.solution.residual <= 1e-7
        else:
            rejects += 1
            if sats:
                assert verdict.reason != RejectReason.SDP_VALUE_BELOW_ONE, (
                    "satisfiable instance rejected at the relaxation stage"
                )
    assert accepts >= 3 and rejects >= 3  # the sweep exercises both outcomes


def test_hybrid_deterministic():
    for inst in random_instances(seed=12, count=6):
        v1 = run_hybrid(inst, HybridConfig(max_iter=30_000))
        v2 = run_hybrid(inst, HybridConfig(max_iter=30_000))
        assert json.dumps(v1.to_json(), sort_keys=True) == json.dumps(
            v2.to_json(), sort_keys=True
        )


def test_masked_feasibility_matches_integral_witnesses():
    # if some satisfying assignment fits the mask, the masked program is
    # feasible; the solver may never contradict an integral witness
    rng = np.random.default_rng(321)
    checked = 0
    for inst in random_instances(seed=88, count=40):
        sats = enumerate_satisfying(inst)
        if not sats:
            continue
        masks = []
        for k, c in enumerate(inst.constraints):
            sat = sorted(c.predicate.satisfying)
            keep = max(1, len(sat) - int(rng.integers(0, 2)))
            masks.append(frozenset(sat[i] for i in rng.choice(len(sat), size=keep, replace=False)))
        witnesses = [
            a
            for a in sats
            if all(
                (a[c.vars[0]], a[c.vars[1]], a[c.vars[2]]) in masks[k]
                for k, c in enumerate(inst.constraints)
            )
        ]
        if not witnesses:
            continue
        res = solve_value1(build_formulation(inst, masks), max_iter=30_000)
        assert isinstance(res, SdpSolution), "witness inside masks but solve failed"
        checked += 1
    assert checked >= 10
