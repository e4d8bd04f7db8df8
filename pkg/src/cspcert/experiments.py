"""Parameter sweeps for the trend properties of the noise-operator laboratory.

Each sweep returns CSV-ready rows (header row first).  Fixtures are fixed and
seeded so the sweeps are reproducible.
"""

from __future__ import annotations

import numpy as np

from .analysis import (
    DiscreteFunction,
    conditional_noise,
    coupling_distance_estimate,
    degree_truncation,
    noise_standard,
    random_function,
)
from .groups import FiniteAbelianGroup, RootOfUnity
from .prodfn import ProductFunction


def parity_product_function(n: int, active: int) -> ProductFunction:
    """Order-2 character on the first `active` coordinates of {0,1}^n; the
    collection {P} has rank exactly `active`."""
    g = FiniteAbelianGroup((2,))
    sigma = (g.identity(), g.element([1]))
    chi1 = g.character([1])
    triv = g.character([0])
    chars = tuple(chi1 if i < active else triv for i in range(n))
    return ProductFunction(RootOfUnity.one(), chars, sigma)


def lowdeg_ratio_sweep(
    eps_grid=(0.2, 0.1, 0.05, 0.02), q: int = 2, n: int = 6, degree: int = 2, seed: int = 0
) -> list[tuple]:
    """||(I - T_{P,1-eps}) L||^2 / ||L||^2 for a random degree-<=d function."""
    rng = np.random.default_rng(seed)
    nu = np.full(q, 1.0 / q)
    f = random_function(q, n, nu, rng)
    low = degree_truncation(f, degree)
    prods = [parity_product_function(n, n)]
    rows: list[tuple] = [("eps", "ratio")]
    denom = low.norm2() ** 2
    for eps in eps_grid:
        tf = conditional_noise(low, prods, eps)
        diff = low.copy_with(low.table - tf.table)
        rows.append((eps, diff.norm2() ** 2 / denom))
    return rows


def mixing_vs_rank_sweep(
    ranks=(1, 2, 3, 4, 5, 6), n: int = 8, kappa: float = 0.5
) -> list[tuple]:
    """||T_{1-kappa} 1_S - nu^n(S)||_2 where S is a level set of a product
    function of the given rank."""
    q = 2
    nu = np.full(q, 0.5)
    rows: list[tuple] = [("rank", "mixing_norm")]
    for m in ranks:
        p = parity_product_function(n, m)
        table = np.array(
            [1.0 if p.eval_phase(x).is_one else 0.0
             for x in np.ndindex(*(q,) * n)]
        )
        f = DiscreteFunction(q, n, nu, table)
        mass = float(np.real(f.expectation()))
        tf = noise_standard(f, 1.0 - kappa)
        centered = f.copy_with(tf.table - mass)
        rows.append((m, centered.norm2()))
    return rows


def coupling_sd_vs_rank_sweep(
    ranks=(1, 2, 3, 4, 5, 6), n: int = 8, kappa: float = 0.5
) -> list[tuple]:
    """Exact statistical distance of the (conditioned resample, noisy copy)
    pair from the product of two fresh samples, per rank."""
    q = 2
    nu = np.full(q, 0.5)
    rows: list[tuple] = [("rank", "statistical_distance")]
    for m in ranks:
        p = parity_product_function(n, m)
        rows.append((m, coupling_distance_estimate(q, n, nu, [p], kappa)))
    return rows


def run_sweep(name: str, seed: int = 0) -> list[tuple]:
    if name == "lowdeg-ratio":
        return lowdeg_ratio_sweep(seed=seed)
    if name == "mixing-vs-rank":
        return mixing_vs_rank_sweep()
    if name == "coupling-sd-vs-rank":
        return coupling_sd_vs_rank_sweep()
    raise ValueError(f"unknown sweep {name!r}")
