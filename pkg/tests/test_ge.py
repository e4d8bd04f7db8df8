from itertools import product

import numpy as np
import pytest

from cspcert.csp import (
    enumerate_satisfying,
    parity_predicate,
    uniform_instance,
)
from cspcert.ge import (
    CharacterEquation,
    GeSystem,
    ModLogEntry,
    SolutionSpace,
    ZEmbeddingError,
    _apply_mod_entry,
    build_master_groups,
    build_system,
    materialize_mv,
    r_image,
    restrict,
    sample_solution,
    solve_system,
    span_support,
    triple_to_product_element,
)
from cspcert.groups import FiniteAbelianGroup, char_eval
from cspcert.sdp import build_formulation, preserve_all_integral, solve_value1


@pytest.fixture(scope="module")
def lin_state(threelin_single):
    sol = preserve_all_integral(threelin_single)
    data = build_master_groups(threelin_single, sol)
    return threelin_single, sol, data


@pytest.fixture(scope="module")
def pair_state(contradictory_pair):
    sol = solve_value1(build_formulation(contradictory_pair))
    data = build_master_groups(contradictory_pair, sol)
    return contradictory_pair, sol, data


def test_master_groups_threelin(lin_state):
    inst, sol, data = lin_state
    for v in range(3):
        assert data.master[v].invariant_factors() == (2,)
        assert data.r[v][0].is_identity
        assert not data.r[v][1].is_identity
        assert data.h_star[v].order == 2


def test_master_groups_product(pair_state):
    _, _, data = pair_state
    # one Z2 block per constraint the variable participates in
    for v in range(3):
        assert data.master[v].cyclic_orders == (2, 2)
        assert data.h_star[v].order == 2  # generated by (1, 1)


def test_master_groups_trivial_blocks(strong_coloring):
    sol = preserve_all_integral(strong_coloring)
    data = build_master_groups(strong_coloring, sol)
    for v in range(4):
        assert data.master[v].is_trivial
        assert data.h_star[v].order == 1


def test_master_groups_z_embedding_error(strong_coloring):
    sol = preserve_all_integral(strong_coloring)
    # keep only two local views sharing a pair: the support gains an integer
    # embedding and building must fail with the offending constraint named
    from cspcert.sdp import SdpSolution

    broken = SdpSolution(
        gram=sol.gram,
        local_dists=({(0, 1, 2): 0.5, (0, 1, 3): 0.5},) + sol.local_dists[1:],
        value=1.0,
        residual=0.0,
    )
    with pytest.raises(ZEmbeddingError) as exc:
        build_master_groups(strong_coloring, broken)
    assert exc.value.constraint == 0


def test_materialize_mv(pair_state):
    _, _, data = pair_state
    rows, cols = materialize_mv(data, 0)
    assert [r.coords for r in rows[:2]] == [(0, 0), (1, 1)]  # r images first
    assert np.allclose(cols[0], 1.0)  # trivial character first
    assert all(abs(c[0] - 1) < 1e-12 for c in cols)  # w* row is all ones

    def key(c):
        return tuple(np.round(c.real, 9)) + tuple(np.round(c.imag, 9))

    keys = {key(c) for c in cols}
    # closure under pointwise product
    for c1 in cols:
        for c2 in cols:
            assert key(c1 * c2) in keys
    # equals all characters of the master group restricted to the rows
    expected = set()
    for chi in data.master[0].characters():
        vec = np.array([char_eval(chi, e).to_complex() for e in rows])
        expected.add(key(vec))
    assert keys == expected


def test_build_and_solve_threelin(lin_state):
    inst, sol, data = lin_state
    system = build_system(inst, sol, data)
    assert len(system.group_equations) == 1
    space = solve_system(system)
    assert not space.empty
    assert space.size() == 4
    proj = {tuple(e.coords[0] for e in t) for t in restrict(space, 0)}
    assert proj == {(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0)}


def test_solve_contradictory_empty(pair_state):
    inst, sol, data = pair_state
    system = build_system(inst, sol, data)
    assert len(system.group_equations) == 2
    space = solve_system(system)
    assert space.empty


def test_empty_system_full_product():
    z2 = FiniteAbelianGroup((2,))
    from cspcert.csp import Predicate3, uniform_instance

    full = Predicate3(2, frozenset(product(range(2), repeat=3)))
    inst = uniform_instance(2, 3, [((0, 1, 2), full)])
    sol = preserve_all_integral(inst)
    data = build_master_groups(inst, sol)
    system = build_system(inst, sol, data)
    assert system.group_equations == []
    space = solve_system(system)
    assert space.size() == 1  # trivial groups: the empty product


def test_empty_equation_list_gives_full_product(lin_state):
    # no equations but nontrivial generated subgroups: the solution set is the
    # whole product (here Z2 x Z2 x Z2, size 8; projection = full cube)
    inst, sol, data = lin_state
    system = GeSystem(data, group_equations=[])
    space = solve_system(system)
    assert space.size() == 8
    assert len(restrict(space, 0)) == 8


def test_sample_solution_deterministic_under_fixed_seed(lin_state):
    inst, sol, data = lin_state
    space = solve_system(build_system(inst, sol, data))
    rng1, rng2 = np.random.default_rng(42), np.random.default_rng(42)
    seq1 = [sample_solution(space, rng1) for _ in range(8)]
    seq2 = [sample_solution(space, rng2) for _ in range(8)]
    assert seq1 == seq2


def test_satisfying_assignments_solve_system(lin_state, threelin_chain):
    inst, sol, data = lin_state
    system = build_system(inst, sol, data)
    space = solve_system(system)
    for a in enumerate_satisfying(inst):
        point = tuple(data.r[v][a[v]] for v in range(inst.num_vars))
        assert point in space

    sol2 = preserve_all_integral(threelin_chain)
    data2 = build_master_groups(threelin_chain, sol2)
    space2 = solve_system(build_system(threelin_chain, sol2, data2))
    for a in enumerate_satisfying(threelin_chain):
        point = tuple(data2.r[v][a[v]] for v in range(threelin_chain.num_vars))
        assert point in space2


def test_restrict_consistency_with_full_enumeration(threelin_chain):
    sol = preserve_all_integral(threelin_chain)
    data = build_master_groups(threelin_chain, sol)
    space = solve_system(build_system(threelin_chain, sol, data))
    full = space.enumerate()
    for k, c in enumerate(threelin_chain.constraints):
        direct = {(t[c.vars[0]], t[c.vars[1]], t[c.vars[2]]) for t in full}
        assert direct == restrict(space, k)


def test_span_support(lin_state):
    inst, sol, data = lin_state
    span = span_support(data, 0)
    assert span.order == 4
    coords = {e.coords for e in span.elements}
    assert coords == {(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0)}
    # single-atom support: cyclic image
    single = span_support(data, 0, frozenset({(1, 1, 0)}))
    assert single.order == 2
    # all-identity support: trivial
    zero = span_support(data, 0, frozenset({(0, 0, 0)}))
    assert zero.order == 1
    with pytest.raises(ValueError):
        span_support(data, 0, frozenset())


def test_sample_solution_uniform(lin_state):
    inst, sol, data = lin_state
    space = solve_system(build_system(inst, sol, data))
    rng = np.random.default_rng(123)
    n = 100_000
    counts: dict[tuple, int] = {}
    for _ in range(n):
        t = sample_solution(space, rng)
        key = tuple(e.coords for e in t)
        counts[key] = counts.get(key, 0) + 1
    assert len(counts) == 4
    expected = n / 4
    chi2 = sum((c - expected) ** 2 / expected for c in counts.values())
    assert chi2 < 25.0  # df=3; deterministic given the seed
    # singleton space: always the same point
    singleton = SolutionSpace(data, False, space.particular, ())
    assert all(
        sample_solution(singleton, rng) == space.particular for _ in range(10)
    )
    with pytest.raises(ValueError):
        sample_solution(SolutionSpace(data, True), rng)


def test_modification_log_replay(lin_state):
    inst, sol, data = lin_state
    entry = ModLogEntry(0, ((0, 0, 0), (1, 1, 0)))
    sys1 = build_system(inst, sol, data, mod_log=[entry])
    sys2 = build_system(inst, sol, data, mod_log=[entry])
    assert sys1.to_json() == sys2.to_json()
    assert len(sys1.char_equations) > 0
    # appended equations shrink the solution set to the span of the named tuples
    space = solve_system(sys1)
    span = span_support(data, 0, frozenset(entry.tuples)).element_set()
    restr = {triple_to_product_element(data, 0, t) for t in restrict(space, 0)}
    assert restr <= span


# ---------------------------------------------------------------------------
# Equivalence audit: the single group-valued unknown per variable has the same
# solution set as the one-variable-per-character formulation
# ---------------------------------------------------------------------------


def literal_character_system_solutions(system: GeSystem):
    """Enumerate the per-character formulation directly.

    Triviality and multiplicativity force each variable's character tuple
    (y_v^chi)_chi to be the evaluation tuple of some element of the master
    group (finite double dual), so candidates are enumerated as master-group
    elements; the constant-column equations (chi constant on H*_v => y_v^chi
    equals that constant) and every per-character constraint equation are then
    checked by exact root-of-unity arithmetic.
    """
    data = system.data
    inst = data.instance
    from cspcert.groups import annihilator

    ann = [annihilator(data.h_star[v]) for v in range(inst.num_vars)]
    sols = []
    for cand in product(*(list(g.elements()) for g in data.master)):
        ok = True
        for v in range(inst.num_vars):
            # constant columns: chi restricted to H*_v constant c forces
            # y_v^chi = c; columns of annihilator characters are constant 1
            for chi in ann[v]:
                if not char_eval(chi, cand[v]).is_one:
                    ok = False
                    break
            if not ok:
                break
        if not ok:
            continue
        for eq in system.group_equations:
            emb = data.embeddings[eq.constraint]
            s1, s2, s3 = eq.vars
            blocks = [data.block_of(s, eq.constraint) for s in eq.vars]
            for chi in emb.torsion_group.characters():
                lifted = []
                for s, blk in zip(eq.vars, blocks):
                    exps = [0] * len(data.master[s].cyclic_orders)
                    exps[blk.start : blk.start + blk.length] = list(chi.exponents)
                    lifted.append(data.master[s].character(exps))
                val = (
                    char_eval(lifted[0], cand[s1])
                    * char_eval(lifted[1], cand[s2])
                    * char_eval(lifted[2], cand[s3])
                )
                if val != char_eval(chi, emb.g):
                    ok = False
                    break
            if not ok:
                break
        if not ok:
            continue
        for eq in system.char_equations:
            s1, s2, s3 = eq.vars
            val = (
                char_eval(eq.chars[0], cand[s1])
                * char_eval(eq.chars[1], cand[s2])
                * char_eval(eq.chars[2], cand[s3])
            )
            if val != eq.target:
                ok = False
                break
        if ok:
            sols.append(tuple(e.coords for e in cand))
    return set(sols)


def solver_solution_set(space: SolutionSpace):
    return {tuple(e.coords for e in t) for t in space.enumerate()}


def test_equivalence_audit_threelin(lin_state):
    inst, sol, data = lin_state
    system = build_system(inst, sol, data)
    space = solve_system(system)
    assert solver_solution_set(space) == literal_character_system_solutions(system)


def test_equivalence_audit_contradictory(pair_state):
    inst, sol, data = pair_state
    system = build_system(inst, sol, data)
    space = solve_system(system)
    assert space.empty
    assert literal_character_system_solutions(system) == set()


def test_equivalence_audit_with_modifications(lin_state):
    inst, sol, data = lin_state
    system = build_system(inst, sol, data, mod_log=[ModLogEntry(0, ((0, 0, 0), (1, 1, 0)))])
    space = solve_system(system)
    assert solver_solution_set(space) == literal_character_system_solutions(system)


def test_equivalence_audit_f3():
    p0 = parity_predicate(3, 0)
    inst = uniform_instance(3, 3, [((0, 1, 2), p0)])
    sol = preserve_all_integral(inst)
    data = build_master_groups(inst, sol)
    assert data.master[0].invariant_factors() == (3,)
    system = build_system(inst, sol, data)
    space = solve_system(system)
    assert space.size() == 9
    assert solver_solution_set(space) == literal_character_system_solutions(system)
