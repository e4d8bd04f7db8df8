from fractions import Fraction
from itertools import product

import numpy as np
import pytest

from cspcert.csp import (
    Predicate3,
    all_distinct_predicate,
    enumerate_satisfying,
    parity_predicate,
    uniform_instance,
)
from cspcert.sdp import (
    Infeasible,
    SdpSolution,
    build_formulation,
    combine,
    dimension_reduce,
    exact_affine_residual,
    gram_index,
    integral_solution,
    preserve_all_integral,
    residual_parts,
    solution_residual,
    solve_value1,
)

TOL = 1e-7


def test_build_formulation_defaults(threelin_single):
    form = build_formulation(threelin_single)
    assert form.masks[0] == threelin_single.constraints[0].predicate.satisfying
    assert form.infeasible_constraint is None


def test_build_formulation_empty_mask_marker(threelin_single):
    form = build_formulation(threelin_single, masks=[frozenset()])
    assert form.infeasible_constraint == 0
    assert isinstance(solve_value1(form), Infeasible)


def test_build_formulation_mask_must_be_satisfying(threelin_single):
    with pytest.raises(ValueError):
        build_formulation(threelin_single, masks=[frozenset({(1, 0, 0)})])


def test_integral_solution_exact(threelin_single):
    for a in enumerate_satisfying(threelin_single):
        sol = integral_solution(threelin_single, a)
        form = build_formulation(threelin_single)
        assert exact_affine_residual(form, sol) == 0
        # rank-1 structure: gram is exactly the outer product of its first row
        v = sol.gram[0]
        assert np.array_equal(sol.gram, np.outer(v, v))
        parts = residual_parts(form, sol)
        assert parts["psd"] <= 1e-12
        assert max(v for k, v in parts.items() if k != "psd") == 0.0
    with pytest.raises(ValueError):
        integral_solution(threelin_single, (1, 0, 0))


def test_solve_satisfiable_has_value_one(threelin_single, threelin_chain, strong_coloring):
    for inst in (threelin_single, threelin_chain, strong_coloring):
        res = solve_value1(build_formulation(inst))
        assert isinstance(res, SdpSolution)
        assert res.value >= 1 - 10 * TOL
        assert res.residual <= TOL


def test_solver_iterates_on_inconsistent_start():
    # asymmetric masks make the uniform start infeasible, forcing projections
    p0 = parity_predicate(2, 0)
    inst = uniform_instance(2, 5, [((0, 1, 2), p0), ((2, 3, 4), p0)])
    masks = [frozenset({(0, 0, 0), (0, 1, 1), (1, 0, 1)}), p0.satisfying]
    res = solve_value1(build_formulation(inst, masks))
    assert isinstance(res, SdpSolution)
    assert res.iterations > 25
    assert res.residual <= TOL


def test_bare_sdp_accepts_contradictory_pair(contradictory_pair):
    res = solve_value1(build_formulation(contradictory_pair))
    assert isinstance(res, SdpSolution)
    assert res.value >= 1 - 10 * TOL and res.residual <= TOL
    # hand construction: uniform local distributions + independent-uniform Gram
    inst = contradictory_pair
    n_full = 1 + inst.num_vars * inst.q
    g = np.full((n_full, n_full), 0.25)
    g[0, 0] = 1.0
    for i in range(inst.num_vars):
        for a in range(2):
            ia = gram_index(inst, i, a)
            g[0, ia] = g[ia, 0] = 0.5
            g[ia, ia] = 0.5
            for b in range(2):
                if b != a:
                    g[ia, gram_index(inst, i, b)] = 0.0
    mus = tuple(
        {t: 0.25 for t in c.predicate.satisfying} for c in inst.constraints
    )
    manual = SdpSolution(gram=g, local_dists=mus, value=1.0, residual=0.0)
    assert solution_residual(build_formulation(inst), manual) <= 1e-12


def test_pinned_unsatisfiable_tuple_infeasible(contradictory_pair):
    # no distribution on the second constraint's satisfying set can match the
    # pinned point-mass pairwise marginals (brute-force check below)
    form = build_formulation(contradictory_pair, pins={0: (0, 0, 0)})
    assert isinstance(solve_value1(form), Infeasible)
    sat2 = sorted(contradictory_pair.constraints[1].predicate.satisfying)
    ok = False
    for w in product(np.linspace(0, 1, 6), repeat=len(sat2)):
        if abs(sum(w) - 1) > 1e-9:
            continue
        marg = {}
        for t, wt in zip(sat2, w):
            for p, r in ((0, 1), (0, 2), (1, 2)):
                marg[(p, r, t[p], t[r])] = marg.get((p, r, t[p], t[r]), 0.0) + wt
        if all(abs(marg.get((p, r, 0, 0), 0.0) - 1.0) < 1e-9 for p, r in ((0, 1), (0, 2), (1, 2))):
            ok = True
    assert not ok


def test_solver_reports_nonconvergence(sdp_infeasible_triangle):
    res = solve_value1(build_formulation(sdp_infeasible_triangle), max_iter=3000)
    assert isinstance(res, Infeasible)
    assert res.residual is not None and res.residual > TOL
    assert res.iterations > 0


def test_mask_restriction_excludes_tuple(threelin_single):
    keep = frozenset({(0, 0, 0), (0, 1, 1), (1, 0, 1)})
    res = solve_value1(build_formulation(threelin_single, masks=[keep]))
    assert isinstance(res, SdpSolution)
    assert (1, 1, 0) not in res.support(0)


def test_combine():
    p0 = parity_predicate(2, 0)
    inst = uniform_instance(2, 3, [((0, 1, 2), p0)])
    sats = enumerate_satisfying(inst)
    s1, s2 = integral_solution(inst, sats[0]), integral_solution(inst, sats[1])
    both = combine(s1, s2)
    assert set(both.local_dists[0].values()) == {0.5}
    assert set(both.local_dists[0]) == set(s1.local_dists[0]) | set(s2.local_dists[0])
    # combine(s, s) = s
    same = combine(s1, s1)
    assert np.array_equal(same.gram, s1.gram)
    assert same.local_dists == s1.local_dists
    # PSD of averages
    rng = np.random.default_rng(0)
    for _ in range(5):
        a, b = rng.choice(len(sats), size=2, replace=False)
        avg = combine(integral_solution(inst, sats[a]), integral_solution(inst, sats[b]))
        assert np.linalg.eigvalsh(avg.gram).min() >= -1e-12


def test_combine_equals_tensor_construction():
    # averaging Gram matrices is exactly the inner-product content of the
    # dimension-doubling construction b'' = (e1 (x) b + e2 (x) b') / sqrt(2)
    p0 = parity_predicate(2, 0)
    inst = uniform_instance(2, 3, [((0, 1, 2), p0)])
    sats = enumerate_satisfying(inst)
    s1, s2 = integral_solution(inst, sats[0]), integral_solution(inst, sats[3])
    v1 = dimension_reduce(s1, dim_cap=7)
    v2 = dimension_reduce(s2, dim_cap=7)
    d = max(v1.shape[1], v2.shape[1])

    def pad(v):
        out = np.zeros((v.shape[0], d))
        out[:, : v.shape[1]] = v
        return out

    tensored = np.hstack([pad(v1), pad(v2)]) / np.sqrt(2)
    assert np.abs(tensored @ tensored.T - combine(s1, s2).gram).max() < 1e-12


def test_combine_fold_associative():
    p0 = parity_predicate(2, 0)
    inst = uniform_instance(2, 3, [((0, 1, 2), p0)])
    sats = enumerate_satisfying(inst)
    sols = [integral_solution(inst, a) for a in sats[:3]]
    left = combine(combine(sols[0], sols[1]), sols[2])
    right = combine(sols[0], combine(sols[1], sols[2]))
    assert np.allclose(left.gram, right.gram, atol=1e-15)
    for d1, d2 in zip(left.local_dists, right.local_dists):
        assert set(d1) == set(d2)
        assert all(abs(d1[t] - d2[t]) < 1e-15 for t in d1)


def test_preserve_all_integral_keeps_all_views(strong_coloring, threelin_chain):
    for inst in (strong_coloring, threelin_chain):
        sol = preserve_all_integral(inst)
        assert isinstance(sol, SdpSolution)
        assert sol.residual <= TOL and sol.value >= 1 - 10 * TOL
        k_sols = len(enumerate_satisfying(inst, budget=10**6))
        assert k_sols > 0
        for a in enumerate_satisfying(inst, budget=10**6):
            for k, c in enumerate(inst.constraints):
                view = (a[c.vars[0]], a[c.vars[1]], a[c.vars[2]])
                assert sol.local_dists[k].get(view, 0.0) > 1e-6


def test_preserve_all_unique_satisfying():
    only = Predicate3(2, frozenset({(0, 1, 1)}))
    inst = uniform_instance(2, 3, [((0, 1, 2), only)])
    sol = preserve_all_integral(inst)
    assert isinstance(sol, SdpSolution)
    assert sol.support(0) == frozenset({(0, 1, 1)})


def test_preserve_all_infeasible(contradictory_pair):
    res = preserve_all_integral(contradictory_pair)
    assert isinstance(res, Infeasible)


def test_preserve_all_mass_lower_bound(threelin_chain):
    sol = preserve_all_integral(threelin_chain)
    survivors = sol.weight
    for k in range(len(threelin_chain.constraints)):
        for t, w in sol.local_dists[k].items():
            if w > 0:
                assert w >= 2.0 ** (-survivors) - TOL


def test_independent_checker_on_returned_solutions(threelin_chain):
    form = build_formulation(threelin_chain)
    sol = solve_value1(form)
    parts = residual_parts(form, sol)
    assert max(parts.values()) <= TOL
    assert set(parts) >= {"psd", "pair_marginals", "diag_marginals", "b0_row", "simplex"}


def test_dimension_reduce(threelin_single):
    sats = enumerate_satisfying(threelin_single)
    sol = integral_solution(threelin_single, sats[0])
    vecs = dimension_reduce(sol, dim_cap=7)
    effective = int((np.abs(vecs) > 1e-9).any(axis=0).sum())
    assert effective == 1
    assert abs(np.linalg.norm(vecs[0]) - 1) <= TOL
    # random PSD fixture
    rng = np.random.default_rng(4)
    m = rng.standard_normal((7, 7))
    g = m @ m.T
    g /= g[0, 0]
    fake = SdpSolution(gram=g, local_dists=({},), value=1.0, residual=0.0)
    v = dimension_reduce(fake, dim_cap=7)
    assert np.abs(v @ v.T - g).max() <= 10 * TOL


def test_feasibility_matches_bruteforce_on_small_instances():
    rng = np.random.default_rng(12)
    tested = 0
    while tested < 8:
        q, n = 2, int(rng.integers(3, 5))
        all_t = list(product(range(q), repeat=3))
        cons = []
        for _ in range(int(rng.integers(1, 3))):
            k = int(rng.integers(1, len(all_t) + 1))
            sat = frozenset(all_t[i] for i in rng.choice(len(all_t), size=k, replace=False))
            vs = tuple(int(x) for x in rng.choice(n, size=3, replace=False))
            cons.append((vs, Predicate3(q, sat)))
        if {v for c, _ in cons for v in c} != set(range(n)):
            continue
        inst = uniform_instance(q, n, cons)
        if not enumerate_satisfying(inst):
            continue
        tested += 1
        res = solve_value1(build_formulation(inst))
        assert isinstance(res, SdpSolution), "satisfiable instance must be SDP-feasible"
        assert res.value >= 1 - 10 * TOL
