"""Vector relaxation of weighted 3-ary CSPs at desk scale.

The program over an instance with variables V and alphabet Sigma has one unit
vector b_0, one vector b_{i,a} per (variable, symbol), and one local
distribution mu_C per constraint, tied together by

    (1) <b_{i,a}, b_{j,b}> = Pr_{mu_C}[x_i = a, x_j = b]   for i, j in C,
    (2) <b_{i,a}, b_0>     = ||b_{i,a}||^2,
    (3) ||b_0||^2 = 1,
    (4) mu_C a distribution supported inside the constraint's mask.

The Gram matrix (indexed by {0} u (V x Sigma)) is the source of truth; vectors
are derived views.  Masks restrict each mu_C to a subset of the predicate's
satisfying tuples; a pin forces mu_C to a point mass.  With masks inside the
satisfying sets, feasibility is equivalent to objective value 1, so the solver
is a feasibility solver.

Solving: a presolve pass propagates masks and pins (a constraint whose mask is
constant in some coordinate fixes that variable's vector block exactly; an
emptied mask certifies infeasibility), then the remaining free problem is
solved by cyclic Dykstra-corrected projections between the PSD cone
(eigenvalue clipping), the affine constraint subspace, and the nonnegativity
cone of the local distributions, from a fixed deterministic start (uniform
local distributions, Gram seeded from their pairwise marginals, never
co-occurring entries from products of diagonals).  A returned solution's
residual always comes from the independent checker below, which recomputes
every constraint violation from scratch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Mapping, Optional, Sequence

import numpy as np

from .csp import Assignment, Instance, Triple, value as csp_value

DEFAULT_TOL = 1e-7
DEFAULT_MAX_ITER = 100_000
DEFAULT_TAU_SUPP = 1e-6


# ---------------------------------------------------------------------------
# Formulation and solution containers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SdpFormulation:
    instance: Instance
    masks: tuple[frozenset[Triple], ...]
    pins: tuple[Optional[Triple], ...]
    infeasible_constraint: Optional[int] = None

    def gram_dim(self) -> int:
        return 1 + self.instance.num_vars * self.instance.q


def build_formulation(
    inst: Instance,
    masks: Optional[Sequence[frozenset[Triple]]] = None,
    pins: Optional[Mapping[int, Triple]] = None,
) -> SdpFormulation:
    """Default masks are the full satisfying sets.  An empty mask (or a pin
    outside its mask) marks the formulation infeasible instead of raising."""
    if masks is None:
        masks = [frozenset(c.predicate.satisfying) for c in inst.constraints]
    masks = [frozenset(m) for m in masks]
    for k, c in enumerate(inst.constraints):
        if not masks[k] <= c.predicate.satisfying:
            raise ValueError(f"mask of constraint {k} not inside its satisfying set")
    pin_list: list[Optional[Triple]] = [None] * len(inst.constraints)
    bad = next((k for k, m in enumerate(masks) if not m), None)
    if pins:
        for k, d in pins.items():
            pin_list[k] = d
            if d not in masks[k]:
                bad = k if bad is None else bad
    return SdpFormulation(inst, tuple(masks), tuple(pin_list), bad)


@dataclass
class SdpSolution:
    """Gram matrix + local distributions.  `weight` counts how many base
    solutions were averaged in (combine adds weights) so folds of combine are
    exactly associative."""

    gram: np.ndarray
    local_dists: tuple[dict[Triple, float], ...]
    value: float
    residual: float
    weight: int = 1
    iterations: int = 0

    def support(self, k: int, tau: float = DEFAULT_TAU_SUPP) -> frozenset[Triple]:
        return frozenset(t for t, w in self.local_dists[k].items() if w > tau)

    def marginal(self, inst: Instance, v: int) -> np.ndarray:
        q = inst.q
        return np.array([float(self.gram[gram_index(inst, v, a), gram_index(inst, v, a)]) for a in range(q)])

    def to_json(self) -> dict:
        return {
            "gram": [[float(x) for x in row] for row in np.asarray(self.gram, dtype=float)],
            "local_dists": [
                {",".join(str(s + 1) for s in t): float(w) for t, w in sorted(d.items())}
                for d in self.local_dists
            ],
            "value": float(self.value),
            "residual": float(self.residual),
        }


@dataclass(frozen=True)
class Infeasible:
    reason: str
    residual: Optional[float] = None
    iterations: int = 0


def gram_index(inst: Instance, i: int, a: int) -> int:
    return 1 + i * inst.q + a


# ---------------------------------------------------------------------------
# Independent residual checker
# ---------------------------------------------------------------------------


def residual_parts(form: SdpFormulation, sol: SdpSolution) -> dict[str, float]:
    """Recompute every constraint violation from scratch."""
    inst = form.instance
    q = inst.q
    g = np.asarray(sol.gram, dtype=float)
    parts = {
        "b0_norm": abs(g[0, 0] - 1.0),
        "symmetry": float(np.abs(g - g.T).max()),
        "psd": max(0.0, -float(np.linalg.eigvalsh((g + g.T) / 2.0).min())),
    }
    pair = 0.0
    diag = 0.0
    for k, c in enumerate(inst.constraints):
        mu = sol.local_dists[k]
        for p in range(3):
            for r in range(3):
                i, j = c.vars[p], c.vars[r]
                for a in range(q):
                    for b in range(q):
                        target = sum(w for t, w in mu.items() if t[p] == a and t[r] == b)
                        got = g[gram_index(inst, i, a), gram_index(inst, j, b)]
                        err = abs(got - target)
                        if p == r:
                            diag = max(diag, err)
                        else:
                            pair = max(pair, err)
    parts["pair_marginals"] = pair
    parts["diag_marginals"] = diag
    b0row = 0.0
    for i in range(inst.num_vars):
        for a in range(q):
            ia = gram_index(inst, i, a)
            b0row = max(b0row, abs(g[0, ia] - g[ia, ia]))
    parts["b0_row"] = b0row
    simplex = 0.0
    outside = 0.0
    pins_err = 0.0
    for k, c in enumerate(inst.constraints):
        mu = sol.local_dists[k]
        simplex = max(simplex, abs(sum(mu.values()) - 1.0))
        if mu:
            simplex = max(simplex, max(0.0, -min(mu.values())))
        outside = max(
            outside, sum(abs(w) for t, w in mu.items() if t not in form.masks[k])
        )
        if form.pins[k] is not None:
            pins_err = max(pins_err, abs(mu.get(form.pins[k], 0.0) - 1.0))
    parts["simplex"] = simplex
    parts["outside_mask"] = outside
    parts["pins"] = pins_err
    return parts


def solution_residual(form: SdpFormulation, sol: SdpSolution) -> float:
    return max(residual_parts(form, sol).values())


def solution_value(form: SdpFormulation, sol: SdpSolution) -> float:
    inst = form.instance
    total = 0.0
    for k, c in enumerate(inst.constraints):
        sat = c.predicate.satisfying
        total += float(c.weight) * sum(w for t, w in sol.local_dists[k].items() if t in sat)
    return total


def exact_affine_residual(form: SdpFormulation, sol: SdpSolution) -> Fraction:
    """All affine identities evaluated in exact rationals (float entries convert
    exactly).  PSD is not covered here; see residual_parts."""
    inst = form.instance
    q = inst.q
    g = [[Fraction(float(x)) for x in row] for row in np.asarray(sol.gram, dtype=float)]
    mus = [{t: Fraction(w) if isinstance(w, (int, Fraction)) else Fraction(float(w)) for t, w in d.items()}
           for d in sol.local_dists]
    worst = Fraction(0)

    def bump(x: Fraction) -> None:
        nonlocal worst
        worst = max(worst, abs(x))

    bump(g[0][0] - 1)
    for k, c in enumerate(inst.constraints):
        mu = mus[k]
        bump(sum(mu.values(), Fraction(0)) - 1)
        for p in range(3):
            for r in range(3):
                i, j = c.vars[p], c.vars[r]
                for a in range(q):
                    for b in range(q):
                        target = sum((w for t, w in mu.items() if t[p] == a and t[r] == b), Fraction(0))
                        bump(g[gram_index(inst, i, a)][gram_index(inst, j, b)] - target)
    for i in range(inst.num_vars):
        for a in range(q):
            ia = gram_index(inst, i, a)
            bump(g[0][ia] - g[ia][ia])
    return worst


# ---------------------------------------------------------------------------
# Presolve: propagate masks and pins
# ---------------------------------------------------------------------------


@dataclass
class _Presolved:
    fixed: dict[int, int]
    masks: list[set[Triple]]
    infeasible: bool


def _presolve(form: SdpFormulation) -> _Presolved:
    inst = form.instance
    masks = [set(m) for m in form.masks]
    for k, pin in enumerate(form.pins):
        if pin is not None:
            masks[k] = {pin} if pin in masks[k] else set()
    fixed: dict[int, int] = {}
    changed = True
    while changed:
        changed = False
        for k, c in enumerate(inst.constraints):
            kept = {
                t
                for t in masks[k]
                if all(c.vars[p] not in fixed or t[p] == fixed[c.vars[p]] for p in range(3))
            }
            if kept != masks[k]:
                masks[k] = kept
                changed = True
            if not kept:
                return _Presolved(fixed, masks, True)
            for p in range(3):
                v = c.vars[p]
                if v in fixed:
                    continue
                vals = {t[p] for t in kept}
                if len(vals) == 1:
                    fixed[v] = vals.pop()
                    changed = True
    return _Presolved(fixed, masks, False)


# ---------------------------------------------------------------------------
# The Dykstra core on the reduced problem
# ---------------------------------------------------------------------------


@dataclass
class _Reduced:
    free_vars: list[int]
    gram_dim: int
    mu_slices: list[tuple[int, list[Triple]]]  # (constraint index, mask order)
    dim: int
    a_mat: np.ndarray
    b_vec: np.ndarray
    a_pinv: np.ndarray
    start: np.ndarray

    def gram_part(self, z: np.ndarray) -> np.ndarray:
        return z[: self.gram_dim**2].reshape(self.gram_dim, self.gram_dim)


def _build_reduced(form: SdpFormulation, pre: _Presolved) -> _Reduced:
    inst = form.instance
    q = inst.q
    free_vars = [v for v in range(inst.num_vars) if v not in pre.fixed]
    pos_of = {v: idx for idx, v in enumerate(free_vars)}
    m = 1 + len(free_vars) * q

    def gi(v: int, a: int) -> int:
        return 1 + pos_of[v] * q + a

    mu_slices: list[tuple[int, list[Triple]]] = []
    mu_offset: dict[int, int] = {}
    off = m * m
    for k, c in enumerate(inst.constraints):
        if any(v not in pre.fixed for v in c.vars):
            order = sorted(pre.masks[k])
            mu_offset[k] = off
            mu_slices.append((k, order))
            off += len(order)
    dim = off

    rows: list[np.ndarray] = []
    rhs: list[float] = []

    def new_row() -> np.ndarray:
        return np.zeros(dim)

    def add_gram_entry(row: np.ndarray, i: int, j: int, coef: float) -> None:
        row[i * m + j] += coef / 2.0
        row[j * m + i] += coef / 2.0

    r = new_row()
    add_gram_entry(r, 0, 0, 1.0)
    rows.append(r)
    rhs.append(1.0)

    for i in range(m):
        for j in range(i + 1, m):
            r = new_row()
            r[i * m + j] += 1.0
            r[j * m + i] -= 1.0
            rows.append(r)
            rhs.append(0.0)

    for k, order in mu_slices:
        c = inst.constraints[k]
        base = mu_offset[k]
        r = new_row()
        r[base : base + len(order)] = 1.0
        rows.append(r)
        rhs.append(1.0)
        free_pos = [p for p in range(3) if c.vars[p] not in pre.fixed]
        for pi in range(len(free_pos)):
            for pj in range(pi, len(free_pos)):
                p, r2 = free_pos[pi], free_pos[pj]
                i, j = c.vars[p], c.vars[r2]
                for a in range(q):
                    for b in range(q):
                        if p == r2 and b < a:
                            continue
                        row = new_row()
                        add_gram_entry(row, gi(i, a), gi(j, b), 1.0)
                        for t_idx, t in enumerate(order):
                            if t[p] == a and t[r2] == b:
                                row[base + t_idx] -= 1.0
                        rows.append(row)
                        rhs.append(0.0)

    for v in free_vars:
        for a in range(q):
            row = new_row()
            add_gram_entry(row, 0, gi(v, a), 1.0)
            add_gram_entry(row, gi(v, a), gi(v, a), -1.0)
            rows.append(row)
            rhs.append(0.0)

    a_mat = np.array(rows)
    b_vec = np.array(rhs)
    a_pinv = np.linalg.pinv(a_mat, rcond=1e-12)

    # deterministic start: uniform local distributions; Gram from their
    # pairwise marginals, independent products where pairs never co-occur
    start = np.zeros(dim)
    marg = {v: np.zeros(q) for v in free_vars}
    count = {v: 0 for v in free_vars}
    pair_acc: dict[tuple[int, int], np.ndarray] = {}
    pair_cnt: dict[tuple[int, int], int] = {}
    for k, order in mu_slices:
        c = inst.constraints[k]
        base = mu_offset[k]
        u = 1.0 / len(order)
        start[base : base + len(order)] = u
        free_pos = [p for p in range(3) if c.vars[p] not in pre.fixed]
        for p in free_pos:
            v = c.vars[p]
            for t in order:
                marg[v][t[p]] += u
            count[v] += 1
        for pi in range(len(free_pos)):
            for pj in range(pi + 1, len(free_pos)):
                p, r2 = free_pos[pi], free_pos[pj]
                vi, vj = c.vars[p], c.vars[r2]
                key = (vi, vj) if vi < vj else (vj, vi)
                acc = pair_acc.setdefault(key, np.zeros((q, q)))
                for t in order:
                    if vi < vj:
                        acc[t[p], t[r2]] += u
                    else:
                        acc[t[r2], t[p]] += u
                pair_cnt[key] = pair_cnt.get(key, 0) + 1
    for v in free_vars:
        if count[v]:
            marg[v] /= count[v]
    g0 = np.zeros((m, m))
    g0[0, 0] = 1.0
    for v in free_vars:
        for a in range(q):
            g0[0, gi(v, a)] = g0[gi(v, a), 0] = marg[v][a]
            g0[gi(v, a), gi(v, a)] = marg[v][a]
    for ii, vi in enumerate(free_vars):
        for vj in free_vars[ii + 1 :]:
            key = (vi, vj)
            if key in pair_acc:
                block = pair_acc[key] / pair_cnt[key]
            else:
                block = np.outer(marg[vi], marg[vj])
            for a in range(q):
                for b in range(q):
                    g0[gi(vi, a), gi(vj, b)] = g0[gi(vj, b), gi(vi, a)] = block[a, b]
    start[: m * m] = g0.reshape(-1)

    return _Reduced(free_vars, m, mu_slices, dim, a_mat, b_vec, a_pinv, start)


def _project_psd(red: _Reduced, z: np.ndarray) -> np.ndarray:
    out = z.copy()
    g = red.gram_part(z)
    g = (g + g.T) / 2.0
    vals, vecs = np.linalg.eigh(g)
    vals = np.maximum(vals, 0.0)
    out[: red.gram_dim**2] = ((vecs * vals) @ vecs.T).reshape(-1)
    return out


def _project_affine(red: _Reduced, z: np.ndarray) -> np.ndarray:
    return z - red.a_pinv @ (red.a_mat @ z - red.b_vec)


def _project_nonneg(red: _Reduced, z: np.ndarray) -> np.ndarray:
    out = z.copy()
    out[red.gram_dim**2 :] = np.maximum(out[red.gram_dim**2 :], 0.0)
    return out


def _reconstruct(
    form: SdpFormulation, pre: _Presolved, red: _Reduced, z: np.ndarray
) -> SdpSolution:
    inst = form.instance
    q = inst.q
    n_full = form.gram_dim()
    pos_of = {v: idx for idx, v in enumerate(red.free_vars)}
    g_red = red.gram_part(z)

    def red_idx(v: int, a: int) -> Optional[int]:
        if v in pre.fixed:
            return 0 if a == pre.fixed[v] else None  # b_{v, fixed} = b_0, others = 0
        return 1 + pos_of[v] * q + a

    g = np.zeros((n_full, n_full))
    red_of = [0] + [None] * (n_full - 1)
    for v in range(inst.num_vars):
        for a in range(q):
            red_of[gram_index(inst, v, a)] = red_idx(v, a)
    for i in range(n_full):
        ri = red_of[i]
        if ri is None:
            continue
        for j in range(n_full):
            rj = red_of[j]
            if rj is None:
                continue
            g[i, j] = g_red[ri, rj]

    mus: list[dict[Triple, float]] = []
    red_k = {k: order for k, order in red.mu_slices}
    off = red.gram_dim**2
    offsets = {}
    for k, order in red.mu_slices:
        offsets[k] = off
        off += len(order)
    for k, c in enumerate(inst.constraints):
        if k in red_k:
            order = red_k[k]
            base = offsets[k]
            mus.append({t: float(z[base + i]) for i, t in enumerate(order)})
        else:
            (t,) = tuple(pre.masks[k]) if len(pre.masks[k]) == 1 else (None,)
            mus.append({t: 1.0})
    sol = SdpSolution(gram=g, local_dists=tuple(mus), value=0.0, residual=0.0)
    sol.value = solution_value(form, sol)
    sol.residual = solution_residual(form, sol)
    return sol


def _cleanup(form: SdpFormulation, sol: SdpSolution, tau_supp: float) -> SdpSolution:
    """Zero sub-threshold local masses, renormalize, re-verify."""
    mus = []
    for d in sol.local_dists:
        kept = {t: w for t, w in d.items() if w > tau_supp}
        total = sum(kept.values())
        if kept and total > 0:
            kept = {t: w / total for t, w in kept.items()}
        mus.append(kept)
    out = replace(sol, local_dists=tuple(mus))
    out.value = solution_value(form, out)
    out.residual = solution_residual(form, out)
    return out


def _project_cone_product(red: _Reduced, z: np.ndarray) -> np.ndarray:
    return _project_nonneg(red, _project_psd(red, z))


def solve_value1(
    form: SdpFormulation,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    check_every: int = 25,
    tau_supp: float = DEFAULT_TAU_SUPP,
) -> SdpSolution | Infeasible:
    """Feasibility solve of the masked/pinned program.

    Returns a solution with value 1 and checker residual <= tol, or Infeasible
    carrying the last residual and iteration count (non-convergence is
    reported, not proved).

    Two phases: Dykstra-corrected cyclic projections (PSD cone / affine /
    nonnegativity), then, if the residual stalls -- which happens when the
    affine set meets the PSD cone tangentially, where plain alternating
    projections degrade to sublinear creep -- an averaged alternating-
    reflection phase between the product cone and the affine subspace, which
    handles that geometry.  Both phases are deterministic; whatever phase
    finishes, the returned residual comes from the independent checker.
    """
    if form.infeasible_constraint is not None:
        return Infeasible(f"constraint {form.infeasible_constraint} has an empty mask")
    pre = _presolve(form)
    if pre.infeasible:
        return Infeasible("mask propagation emptied a local distribution")
    red = _build_reduced(form, pre)

    def finish(z: np.ndarray, it: int) -> SdpSolution | None:
        sol = _reconstruct(form, pre, red, z)
        if sol.residual <= tol:
            sol = _cleanup(form, sol, tau_supp)
            sol.iterations = it
            if sol.residual <= tol:
                return sol
        return None

    z = red.start.copy()
    inc_psd = np.zeros_like(z)
    inc_aff = np.zeros_like(z)
    inc_pos = np.zeros_like(z)
    best_res = math.inf
    last_improve = 0
    it = 0
    dykstra_window = 300
    while it < max_iter:
        for proj, inc in (
            (_project_psd, inc_psd),
            (_project_affine, inc_aff),
            (_project_nonneg, inc_pos),
        ):
            y = z + inc
            nz = proj(red, y)
            inc[:] = y - nz
            z = nz
        it += 1
        if it % check_every == 0 or it == max_iter:
            done = finish(z, it)
            if done is not None:
                return done
            res = _reconstruct(form, pre, red, z).residual
            if res < 0.7 * best_res:
                best_res = res
                last_improve = it
            elif it - last_improve > dykstra_window:
                break  # stalled; switch to the reflection phase

    while it < max_iter:
        a = _project_cone_product(red, z)
        b = _project_affine(red, 2 * a - z)
        z = z + b - a
        it += 1
        if it % check_every == 0 or it == max_iter:
            cand = _project_cone_product(red, z)
            done = finish(cand, it)
            if done is not None:
                return done
            res = _reconstruct(form, pre, red, cand).residual
            if res < 0.7 * best_res:
                best_res = res
                last_improve = it
            elif it - last_improve > 3000:
                return Infeasible("residual stalled above tolerance", best_res, it)
    return Infeasible("iteration budget exhausted above tolerance", best_res, it)


# ---------------------------------------------------------------------------
# Integral solutions, combining, pin sweep
# ---------------------------------------------------------------------------


def integral_solution(inst: Instance, a: Assignment) -> SdpSolution:
    """Rank-1 Gram of a satisfying assignment; 0/1 entries, residual exactly 0."""
    if csp_value(inst, a) != 1:
        raise ValueError("assignment does not satisfy the instance")
    n_full = 1 + inst.num_vars * inst.q
    v = np.zeros(n_full)
    v[0] = 1.0
    for i in range(inst.num_vars):
        v[gram_index(inst, i, a[i])] = 1.0
    g = np.outer(v, v)
    mus = tuple(
        {(a[c.vars[0]], a[c.vars[1]], a[c.vars[2]]): 1.0} for c in inst.constraints
    )
    return SdpSolution(gram=g, local_dists=mus, value=1.0, residual=0.0)


def combine(s1: SdpSolution, s2: SdpSolution) -> SdpSolution:
    """Weighted average (plain halving when both weights are 1); the support of
    each combined local distribution is the union of the inputs' supports."""
    w1, w2 = s1.weight, s2.weight
    total = w1 + w2
    g = (w1 * np.asarray(s1.gram, dtype=float) + w2 * np.asarray(s2.gram, dtype=float)) / total
    mus = []
    for d1, d2 in zip(s1.local_dists, s2.local_dists):
        keys = set(d1) | set(d2)
        mus.append({t: (w1 * d1.get(t, 0.0) + w2 * d2.get(t, 0.0)) / total for t in keys})
    return SdpSolution(
        gram=g,
        local_dists=tuple(mus),
        value=(w1 * s1.value + w2 * s2.value) / total,
        residual=max(s1.residual, s2.residual),
        weight=total,
    )


def preserve_all_integral(
    inst: Instance,
    masks: Optional[Sequence[frozenset[Triple]]] = None,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    tau_supp: float = DEFAULT_TAU_SUPP,
) -> SdpSolution | Infeasible:
    """Solve one pinned program per (constraint, in-mask tuple) and average the
    feasible ones, so every locally-satisfiable view keeps mass >= 1/#survivors.
    Infeasible iff no pinned program is feasible."""
    base = build_formulation(inst, masks)
    if base.infeasible_constraint is not None:
        return Infeasible(f"constraint {base.infeasible_constraint} has an empty mask")
    survivors: list[SdpSolution] = []
    for k in range(len(inst.constraints)):
        for d in sorted(base.masks[k]):
            pinned = build_formulation(inst, base.masks, pins={k: d})
            res = solve_value1(pinned, tol=tol, max_iter=max_iter, tau_supp=tau_supp)
            if isinstance(res, SdpSolution) and res.value >= 1.0 - 10 * tol:
                survivors.append(res)
    if not survivors:
        return Infeasible("every pinned solve was infeasible")
    combined = survivors[0]
    for s in survivors[1:]:
        combined = combine(combined, s)
    combined = _cleanup(base, combined, tau_supp)
    return combined


def dimension_reduce(sol: SdpSolution, dim_cap: int, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Explicit vectors (rows) whose Gram reproduces sol.gram within 10*tol.
    Negative eigenvalues are clipped at 0."""
    g = np.asarray(sol.gram, dtype=float)
    g = (g + g.T) / 2.0
    vals, vecs = np.linalg.eigh(g)
    vals = np.maximum(vals, 0.0)
    order = np.argsort(vals)[::-1][:dim_cap]
    vectors = vecs[:, order] * np.sqrt(vals[order])
    err = float(np.abs(vectors @ vectors.T - g).max())
    if err > 10 * tol:
        raise ValueError(f"reconstruction error {err} exceeds 10*tol")
    return vectors
