"""The certification loop: iterate the SDP solve and the group-equation system
against each other until the per-constraint supports and the equation
solutions agree, then accept or reject with certificates.

Per iteration: solve the masked program while preserving every locally
satisfiable view (pin sweep; falls back to the bare solve when no pin
survives), reject if the value drops below 1; reject if some support is
pairwise disconnected or admits an integer embedding; build and solve the
equation system (replaying logged modifications); reject if it has no
solutions.  Then either shrink masks (some supported tuple's group image is
outside the projected solution set) or append annihilator equations (the
projected solution set is strictly larger than the span of the supported
images).  Masks shrink weakly and the equation set grows weakly, so the loop
terminates; on a fixpoint the consistency condition span(supp mu_C) = T|_C is
verified exactly and the verdict is Accept iff it holds for every constraint.

Rejections carry diagnostics (offending constraint, integer-embedding witness,
or the per-constraint consistency report).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

from .csp import Instance, Triple, enumerate_satisfying
from .embedding import is_pairwise_connected
from .ge import (
    GeSystem,
    MasterGroupData,
    ModLogEntry,
    SolutionSpace,
    ZEmbeddingError,
    build_master_groups,
    build_system,
    r_image,
    restrict,
    solve_system,
    span_support,
    support_relation,
    triple_to_product_element,
    _apply_mod_entry,
)
from .sdp import (
    DEFAULT_MAX_ITER,
    DEFAULT_TAU_SUPP,
    DEFAULT_TOL,
    Infeasible,
    SdpSolution,
    build_formulation,
    preserve_all_integral,
    solve_value1,
)


class RejectReason(enum.Enum):
    SDP_VALUE_BELOW_ONE = "SdpValueBelowOne"
    SUPPORT_NOT_PAIRWISE_CONNECTED = "SupportNotPairwiseConnected"
    SUPPORT_HAS_Z_EMBEDDING = "SupportHasZEmbedding"
    GE_SYSTEM_INCONSISTENT = "GeSystemInconsistent"


@dataclass
class ConsistencyRecord:
    constraint: int
    span_order: int
    restriction_size: int
    equal: bool
    witness: Optional[tuple] = None  # coords of an element in the symmetric difference

    def to_json(self) -> dict:
        return {
            "constraint": self.constraint,
            "span_order": self.span_order,
            "restriction_size": self.restriction_size,
            "equal": self.equal,
            "witness": self.witness,
        }


@dataclass
class Verdict:
    accepted: bool
    reason: Optional[RejectReason] = None
    constraint: Optional[int] = None
    diagnostics: dict = field(default_factory=dict)
    solution: Optional[SdpSolution] = None
    system: Optional[GeSystem] = None
    space: Optional[SolutionSpace] = None
    report: list[ConsistencyRecord] = field(default_factory=list)
    iterations: int = 0
    masks: Optional[tuple[frozenset[Triple], ...]] = None

    def to_json(self) -> dict:
        out: dict = {
            "verdict": "Accept" if self.accepted else "Reject",
            "iterations": self.iterations,
        }
        if not self.accepted:
            out["reason"] = self.reason.value if self.reason else None
            if self.constraint is not None:
                out["constraint"] = self.constraint
            out["diagnostics"] = self.diagnostics
        if self.solution is not None:
            out["sdp_solution"] = self.solution.to_json()
        if self.system is not None:
            out["ge_system"] = self.system.to_json()
        if self.space is not None and not self.space.empty:
            out["ge_solutions"] = self.space.to_json()
        if self.report:
            out["consistency"] = [r.to_json() for r in self.report]
        if self.masks is not None:
            out["masks"] = [sorted([list(x) for x in m]) for m in self.masks]
        return out


def consistency_report(
    data: MasterGroupData, sdp: SdpSolution, space: SolutionSpace, tau_supp: float = DEFAULT_TAU_SUPP
) -> list[ConsistencyRecord]:
    """Exact per-constraint set comparison of span(supp mu_C) with T|_C."""
    out = []
    for k in range(len(data.instance.constraints)):
        span = span_support(data, k, sdp.support(k, tau_supp))
        span_set = span.element_set()
        restr = {triple_to_product_element(data, k, t) for t in restrict(space, k)}
        equal = span_set == restr
        witness = None
        if not equal:
            diff = sorted(span_set ^ restr, key=lambda e: e.coords)
            witness = diff[0].coords
        out.append(ConsistencyRecord(k, len(span_set), len(restr), equal, witness))
    return out


def modify_sdp(
    masks: tuple[frozenset[Triple], ...],
    data: MasterGroupData,
    space: SolutionSpace,
) -> tuple[tuple[frozenset[Triple], ...], bool]:
    """Drop every masked tuple whose group image is outside T|_C."""
    new_masks = []
    changed = False
    for k in range(len(data.instance.constraints)):
        allowed = restrict(space, k)
        keep = set()
        for t in masks[k]:
            if r_image(data, k, t) in allowed:
                keep.add(t)
            else:
                changed = True
        new_masks.append(frozenset(keep))
    return tuple(new_masks), changed


def modify_ge(
    system: GeSystem,
    sdp: SdpSolution,
    space: SolutionSpace,
    tau_supp: float = DEFAULT_TAU_SUPP,
) -> bool:
    """For every constraint whose span is strictly inside T|_C, append the
    annihilator character triples of the span.  Returns whether anything was
    appended."""
    data = system.data
    changed = False
    for k in range(len(data.instance.constraints)):
        supp = sdp.support(k, tau_supp)
        span = span_support(data, k, supp).element_set()
        restr = {triple_to_product_element(data, k, t) for t in restrict(space, k)}
        if span < restr:
            entry = ModLogEntry(k, tuple(sorted(supp)))
            if _apply_mod_entry(system, entry) > 0:
                system.mod_log.append(entry)
                changed = True
    return changed


@dataclass(frozen=True)
class HybridConfig:
    tol: float = DEFAULT_TOL
    max_iter: int = DEFAULT_MAX_ITER
    tau_supp: float = DEFAULT_TAU_SUPP
    check_safety: bool = False  # brute-force invariant checks per iteration
    safety_budget: int = 10**6


def run_hybrid(inst: Instance, config: HybridConfig = HybridConfig()) -> Verdict:
    masks = tuple(frozenset(c.predicate.satisfying) for c in inst.constraints)
    mod_log: list[ModLogEntry] = []
    sat_assignments = None
    if config.check_safety:
        sat_assignments = enumerate_satisfying(inst, config.safety_budget)

    hard_bound = sum(len(c.predicate.satisfying) for c in inst.constraints) + 2
    iteration = 0
    while True:
        iteration += 1
        if iteration > hard_bound:
            raise RuntimeError("iteration bound exceeded; termination argument violated")

        sol = preserve_all_integral(
            inst, masks, tol=config.tol, max_iter=config.max_iter, tau_supp=config.tau_supp
        )
        if isinstance(sol, Infeasible):
            # No pinned program survived; an unsatisfiable instance can still
            # have a feasible bare program, which is what the equation stage
            # must then refute.
            bare = solve_value1(
                build_formulation(inst, masks),
                tol=config.tol,
                max_iter=config.max_iter,
                tau_supp=config.tau_supp,
            )
            if isinstance(bare, Infeasible):
                return Verdict(
                    False,
                    RejectReason.SDP_VALUE_BELOW_ONE,
                    diagnostics={"detail": bare.reason, "residual": bare.residual},
                    iterations=iteration,
                    masks=masks,
                )
            sol = bare
        if sol.value < 1.0 - 10 * config.tol or sol.residual > config.tol:
            return Verdict(
                False,
                RejectReason.SDP_VALUE_BELOW_ONE,
                diagnostics={"value": sol.value, "residual": sol.residual},
                iterations=iteration,
                masks=masks,
            )

        if config.check_safety and sat_assignments is not None:
            for a in sat_assignments:
                for k, c in enumerate(inst.constraints):
                    view = (a[c.vars[0]], a[c.vars[1]], a[c.vars[2]])
                    assert view in masks[k], "satisfying view left a mask"

        for k in range(len(inst.constraints)):
            supp = sol.support(k, config.tau_supp)
            rel = support_relation(inst.q, supp)
            if not is_pairwise_connected(rel):
                return Verdict(
                    False,
                    RejectReason.SUPPORT_NOT_PAIRWISE_CONNECTED,
                    constraint=k,
                    diagnostics={"support": sorted([list(t) for t in supp])},
                    iterations=iteration,
                    masks=masks,
                )
        try:
            data = build_master_groups(inst, sol, config.tau_supp)
        except ZEmbeddingError as e:
            return Verdict(
                False,
                RejectReason.SUPPORT_HAS_Z_EMBEDDING,
                constraint=e.constraint,
                diagnostics={"witness_maps": e.witness[0], "witness_g": e.witness[1]},
                iterations=iteration,
                masks=masks,
            )

        hard_bound = max(
            hard_bound,
            sum(len(c.predicate.satisfying) for c in inst.constraints)
            + sum(
                data.master[c.vars[0]].order * data.master[c.vars[1]].order * data.master[c.vars[2]].order
                for c in inst.constraints
            )
            + 2,
        )

        system = build_system(inst, sol, data, mod_log, config.tau_supp)
        space = solve_system(system)
        if space.empty:
            return Verdict(
                False,
                RejectReason.GE_SYSTEM_INCONSISTENT,
                diagnostics={"detail": "equation system has no solutions"},
                system=system,
                iterations=iteration,
                masks=masks,
            )

        if config.check_safety and sat_assignments is not None:
            for a in sat_assignments:
                point = tuple(data.r[v][a[v]] for v in range(inst.num_vars))
                assert point in space, "satisfying assignment image left the solution set"

        outside = False
        for k in range(len(inst.constraints)):
            allowed = restrict(space, k)
            for t in sol.support(k, config.tau_supp):
                if r_image(data, k, t) not in allowed:
                    outside = True
                    break
            if outside:
                break

        if outside:
            masks, changed = modify_sdp(masks, data, space)
            if any(not m for m in masks):
                return Verdict(
                    False,
                    RejectReason.GE_SYSTEM_INCONSISTENT,
                    diagnostics={"detail": "mask emptied while pruning unattainable tuples"},
                    iterations=iteration,
                    masks=masks,
                )
        else:
            changed = modify_ge(system, sol, space, config.tau_supp)
            mod_log = list(system.mod_log)
            if changed:
                space = solve_system(system)
                if space.empty:
                    return Verdict(
                        False,
                        RejectReason.GE_SYSTEM_INCONSISTENT,
                        diagnostics={"detail": "equation system emptied by appended equations"},
                        system=system,
                        iterations=iteration,
                        masks=masks,
                    )

        if not changed:
            report = consistency_report(data, sol, space, config.tau_supp)
            if all(r.equal for r in report):
                return Verdict(
                    True,
                    solution=sol,
                    system=system,
                    space=space,
                    report=report,
                    iterations=iteration,
                    masks=masks,
                )
            return Verdict(
                False,
                RejectReason.GE_SYSTEM_INCONSISTENT,
                diagnostics={
                    "detail": "fixpoint reached without span/solution-set equality",
                    "report": [r.to_json() for r in report],
                },
                solution=sol,
                system=system,
                space=space,
                report=report,
                iterations=iteration,
                masks=masks,
            )
