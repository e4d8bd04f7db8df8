"""Shared fixture builders and independent oracles."""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, product

import numpy as np
import pytest

from cspcert.csp import (
    Instance,
    Predicate3,
    all_distinct_predicate,
    parity_predicate,
    uniform_instance,
)


# ---------------------------------------------------------------------------
# Instances used across modules
# ---------------------------------------------------------------------------


@pytest.fixture(scope="session")
def threelin_single() -> Instance:
    return uniform_instance(2, 3, [((0, 1, 2), parity_predicate(2, 0))])


@pytest.fixture(scope="session")
def threelin_chain() -> Instance:
    p0 = parity_predicate(2, 0)
    return uniform_instance(2, 5, [((0, 1, 2), p0), ((2, 3, 4), p0)])


@pytest.fixture(scope="session")
def contradictory_pair() -> Instance:
    return uniform_instance(
        2, 3, [((0, 1, 2), parity_predicate(2, 0)), ((0, 1, 2), parity_predicate(2, 1))]
    )


@pytest.fixture(scope="session")
def strong_coloring() -> Instance:
    dis = all_distinct_predicate(5)
    return uniform_instance(5, 4, [((0, 1, 2), dis), ((1, 2, 3), dis)])


@pytest.fixture(scope="session")
def parity_one_single() -> Instance:
    return uniform_instance(2, 3, [((0, 1, 2), parity_predicate(2, 1))])


@pytest.fixture(scope="session")
def sdp_infeasible_triangle() -> Instance:
    """x+y=0, y+z=0, x+z=1 with a shared dummy third slot; unsatisfiable and
    pairwise-marginal infeasible (the +-1 correlation matrix is indefinite)."""
    eq0 = Predicate3(2, frozenset({(0, 0, 0), (0, 0, 1), (1, 1, 0), (1, 1, 1)}))
    eq1 = Predicate3(2, frozenset({(0, 1, 0), (0, 1, 1), (1, 0, 0), (1, 0, 1)}))
    return uniform_instance(2, 4, [((0, 1, 3), eq0), ((1, 2, 3), eq0), ((0, 2, 3), eq1)])


# ---------------------------------------------------------------------------
# Oracles
# ---------------------------------------------------------------------------


def minor_gcd_invariant_factors(a: list[list[int]]) -> list[int]:
    """Invariant factors via d_k = gcd(k x k minors) / gcd((k-1) x (k-1) minors)."""
    from math import gcd

    m, n = len(a), len(a[0]) if a else 0

    def det(rows, cols) -> int:
        k = len(rows)
        if k == 0:
            return 1
        sub = [[Fraction(a[i][j]) for j in cols] for i in rows]
        # fraction-free expansion is overkill at k <= 6; use Fraction elimination
        d = Fraction(1)
        mat = [row[:] for row in sub]
        for c in range(k):
            piv = next((r for r in range(c, k) if mat[r][c] != 0), None)
            if piv is None:
                return 0
            if piv != c:
                mat[c], mat[piv] = mat[piv], mat[c]
                d = -d
            d *= mat[c][c]
            inv = 1 / mat[c][c]
            for r in range(c + 1, k):
                coef = mat[r][c] * inv
                for c2 in range(c, k):
                    mat[r][c2] -= coef * mat[c][c2]
        assert d.denominator == 1
        return int(d)

    out = []
    prev = 1
    for k in range(1, min(m, n) + 1):
        g = 0
        for rows in combinations(range(m), k):
            for cols in combinations(range(n), k):
                g = gcd(g, abs(det(rows, cols)))
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return out


def rational_rank(rows: list[list[int]]) -> int:
    """Rank over the rationals by exact elimination."""
    mat = [[Fraction(x) for x in row] for row in rows]
    rank = 0
    ncols = len(mat[0]) if mat else 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(mat)) if mat[r][c] != 0), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        inv = 1 / mat[rank][c]
        for r in range(len(mat)):
            if r != rank and mat[r][c] != 0:
                coef = mat[r][c] * inv
                for c2 in range(c, ncols):
                    mat[r][c2] -= coef * mat[rank][c2]
        rank += 1
    return rank


def random_relation(rng: np.random.Generator, qs=(2, 3)) -> frozenset[tuple[int, int, int]]:
    q1, q2, q3 = (int(rng.choice(qs)) for _ in range(3))
    all_t = list(product(range(q1), range(q2), range(q3)))
    k = int(rng.integers(1, len(all_t) + 1))
    idx = rng.choice(len(all_t), size=k, replace=False)
    return q1, q2, q3, frozenset(all_t[i] for i in idx)
