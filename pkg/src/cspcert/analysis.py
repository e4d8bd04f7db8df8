"""Exact small-n function analysis on product spaces (Sigma^n, nu^n).

Everything here enumerates: operators are computed as exact averages over the
whole domain (budget-guarded), so identities like stationarity or operator
self-adjointness can be checked to float round-off rather than Monte-Carlo
noise.  Samplers for larger n take an explicit seeded RNG.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product as iproduct

import numpy as np

from .prodfn import ProductFunction, symbolic_gap

ENUM_BUDGET = 10**5


def _check_budget(q: int, n: int, budget: int = ENUM_BUDGET) -> None:
    if q**n > budget:
        raise ValueError(f"domain size {q}^{n} exceeds enumeration budget {budget}")


@dataclass
class DiscreteFunction:
    """Dense table of a complex function on (Sigma^n, nu^n)."""

    q: int
    n: int
    nu: np.ndarray  # (q,), full support
    table: np.ndarray  # flat, length q^n, complex128

    def __post_init__(self) -> None:
        _check_budget(self.q, self.n)
        self.nu = np.asarray(self.nu, dtype=float)
        if self.nu.shape != (self.q,) or np.any(self.nu <= 0):
            raise ValueError("nu must be a full-support distribution on Sigma")
        if abs(self.nu.sum() - 1.0) > 1e-12:
            raise ValueError("nu must sum to 1")
        self.table = np.asarray(self.table, dtype=complex).reshape(self.q**self.n)

    @property
    def alpha(self) -> float:
        return float(self.nu.min())

    def tensor(self) -> np.ndarray:
        return self.table.reshape((self.q,) * self.n)

    def point_weights(self) -> np.ndarray:
        w = np.ones(1)
        for _ in range(self.n):
            w = np.kron(w, self.nu)
        return w

    def expectation(self) -> complex:
        return complex(self.point_weights() @ self.table)

    def inner(self, other: "DiscreteFunction") -> complex:
        return complex(self.point_weights() @ (self.table * np.conj(other.table)))

    def norm2(self) -> float:
        return math.sqrt(max(float(self.point_weights() @ (np.abs(self.table) ** 2)), 0.0))

    def copy_with(self, table: np.ndarray) -> "DiscreteFunction":
        return DiscreteFunction(self.q, self.n, self.nu, table)


def random_function(q: int, n: int, nu, rng: np.random.Generator, bounded: bool = False) -> DiscreteFunction:
    re = rng.standard_normal(q**n)
    im = rng.standard_normal(q**n)
    tab = re + 1j * im
    if bounded:
        mags = np.abs(tab)
        tab = np.where(mags > 1, tab / mags, tab)
    return DiscreteFunction(q, n, np.asarray(nu, dtype=float), tab)


# ---------------------------------------------------------------------------
# Decompositions and influences
# ---------------------------------------------------------------------------


def _average_axis(tensor: np.ndarray, axis: int, nu: np.ndarray) -> np.ndarray:
    """Replace axis by its nu-average, broadcast back to full shape."""
    avg = np.tensordot(tensor, nu, axes=([axis], [0]))
    return np.broadcast_to(np.expand_dims(avg, axis), tensor.shape).copy()


def conditional_on(f: DiscreteFunction, keep: frozenset[int]) -> np.ndarray:
    """Conditional expectation onto keep-juntas, as a full tensor."""
    t = f.tensor()
    for ax in range(f.n):
        if ax not in keep:
            t = _average_axis(t, ax, f.nu)
    return t


def efron_stein(f: DiscreteFunction) -> dict[frozenset[int], DiscreteFunction]:
    """f = sum_S f^{=S}; each f^{=S} is the Moebius alternation of the
    conditional expectations over subsets of S."""
    subsets = [frozenset(s) for k in range(f.n + 1) for s in _subsets(range(f.n), k)]
    cond = {s: conditional_on(f, s) for s in subsets}
    out = {}
    for s in subsets:
        acc = np.zeros_like(f.tensor())
        for t in _all_subsets_of(s):
            acc = acc + ((-1) ** (len(s) - len(t))) * cond[t]
        out[s] = f.copy_with(acc.reshape(-1))
    return out


def _subsets(items, k):
    from itertools import combinations

    return combinations(items, k)


def _all_subsets_of(s: frozenset[int]):
    items = sorted(s)
    for k in range(len(items) + 1):
        for c in _subsets(items, k):
            yield frozenset(c)


def degree_truncation(f: DiscreteFunction, d: int) -> DiscreteFunction:
    parts = efron_stein(f)
    acc = np.zeros_like(f.table)
    for s, g in parts.items():
        if len(s) <= d:
            acc = acc + g.table
    return f.copy_with(acc)


def influence(f: DiscreteFunction, i: int) -> float:
    """E over a fresh resample of coordinate i of |f - f'|^2.

    Equals 2 * sum_{S contains i} ||f^{=S}||^2 (two independent draws of the
    coordinate: 2 E|f|^2 - 2 |E f|^2 fiberwise).
    """
    t = f.tensor()
    nu = f.nu
    e_f = np.tensordot(t, nu, axes=([i], [0]))
    e_f2 = np.tensordot(np.abs(t) ** 2, nu, axes=([i], [0]))
    fiber = 2.0 * (e_f2 - np.abs(e_f) ** 2)
    w = np.ones(1)
    for ax in range(f.n):
        if ax != i:
            w = np.kron(w, nu)
    return float(np.real(w @ fiber.reshape(-1)))


# ---------------------------------------------------------------------------
# Noise operators
# ---------------------------------------------------------------------------


def noise_standard(f: DiscreteFunction, rho: float) -> DiscreteFunction:
    """Per coordinate independently: keep with prob rho, else resample from nu.
    Multiplies f^{=S} by rho^{|S|}."""
    t = f.tensor()
    for ax in range(f.n):
        t = rho * t + (1.0 - rho) * _average_axis(t, ax, f.nu)
    return f.copy_with(t.reshape(-1))


def noise_subset(f: DiscreteFunction, subset: frozenset[int]) -> DiscreteFunction:
    """Resample exactly the coordinates in `subset` from nu."""
    t = f.tensor()
    for ax in subset:
        t = _average_axis(t, ax, f.nu)
    return f.copy_with(t.reshape(-1))


def _signatures(q: int, n: int, prods: list[ProductFunction]) -> np.ndarray:
    """Integer signature id per point: exact joint value id of all product
    functions (phases compared exactly)."""
    npoints = q**n
    if not prods:
        return np.zeros(npoints, dtype=np.int64)
    sig_ids: dict[tuple, int] = {}
    out = np.empty(npoints, dtype=np.int64)
    for flat, x in enumerate(iproduct(range(q), repeat=n)):
        key = tuple(p.eval_phase(x) for p in prods)
        out[flat] = sig_ids.setdefault(key, len(sig_ids))
    return out


def _class_keys(q: int, n: int, subset: frozenset[int], sigs: np.ndarray) -> np.ndarray:
    """Composite class id per point: (coords outside subset, signature)."""
    npoints = q**n
    outside = np.zeros(npoints, dtype=np.int64)
    for flat, x in enumerate(iproduct(range(q), repeat=n)):
        key = 0
        for ax in range(n):
            if ax not in subset:
                key = key * q + x[ax]
        outside[flat] = key
    return outside * (sigs.max() + 1) + sigs


def conditional_noise_subset(
    f: DiscreteFunction, prods: list[ProductFunction], subset: frozenset[int]
) -> DiscreteFunction:
    """Resample coordinates in `subset` from nu, conditioned on keeping the
    exact values of every product function.  The conditioning event always
    contains the point itself."""
    sigs = _signatures(f.q, f.n, prods)
    keys = _class_keys(f.q, f.n, subset, sigs)
    w = f.point_weights()
    order = np.argsort(keys, kind="stable")
    out = np.empty_like(f.table)
    sorted_keys = keys[order]
    boundaries = np.flatnonzero(np.diff(sorted_keys)) + 1
    for grp in np.split(order, boundaries):
        mass = w[grp].sum()
        mean = (w[grp] @ f.table[grp]) / mass
        out[grp] = mean
    return f.copy_with(out)


def conditional_noise_sample(
    q: int,
    n: int,
    nu,
    prods: list[ProductFunction],
    eps: float,
    x: tuple[int, ...],
    rng: np.random.Generator,
    max_tries: int = 100_000,
) -> tuple[int, ...]:
    """One draw from the eps-subset value-conditioned resample of x, for n too
    large to enumerate: rejection-sample the resampled coordinates until every
    product-function value is preserved (x itself is always in the event, so
    the acceptance probability is positive)."""
    nu = np.asarray(nu, dtype=float)
    subset = [i for i in range(n) if rng.random() < eps]
    if not subset:
        return x
    target = tuple(p.eval_phase(x) for p in prods)
    y = list(x)
    for _ in range(max_tries):
        for i in subset:
            y[i] = int(rng.choice(q, p=nu))
        cand = tuple(y)
        if tuple(p.eval_phase(cand) for p in prods) == target:
            return cand
    raise RuntimeError("rejection sampler exceeded max_tries")


def conditional_noise(
    f: DiscreteFunction, prods: list[ProductFunction], eps: float
) -> DiscreteFunction:
    """sum over I of eps^{|I|} (1-eps)^{n-|I|} applied to the I-conditional
    resampling operator; eps = 0 is the identity, empty `prods` reduces to the
    standard noise operator at rate 1-eps."""
    acc = np.zeros_like(f.table)
    for subset in _all_subsets_of(frozenset(range(f.n))):
        wgt = (eps ** len(subset)) * ((1.0 - eps) ** (f.n - len(subset)))
        if wgt == 0.0:
            continue
        acc = acc + wgt * conditional_noise_subset(f, prods, subset).table
    return f.copy_with(acc)


def a_value(
    prods: list[ProductFunction],
    subset: frozenset[int],
    x: tuple[int, ...],
    q: int,
    nu,
) -> float:
    """Probability that resampling the `subset` coordinates of x from nu keeps
    every product-function value."""
    nu = np.asarray(nu, dtype=float)
    n = len(x)
    target = tuple(p.eval_phase(x) for p in prods)
    total = 0.0
    axes = sorted(subset)
    for vals in iproduct(range(q), repeat=len(axes)):
        y = list(x)
        pr = 1.0
        for ax, v in zip(axes, vals):
            y[ax] = v
            pr *= nu[v]
        if tuple(p.eval_phase(tuple(y)) for p in prods) == target:
            total += pr
    return total


# ---------------------------------------------------------------------------
# Coupling between the fully conditional resample and standard noise
# ---------------------------------------------------------------------------


def _full_resample_kernel(q: int, n: int, nu: np.ndarray, prods: list[ProductFunction]) -> np.ndarray:
    """Markov kernel of the signature-conditioned full resample: row x is nu^n
    conditioned on the signature class of x."""
    npoints = q**n
    w = np.ones(1)
    for _ in range(n):
        w = np.kron(w, nu)
    sigs = _signatures(q, n, prods)
    kernel = np.zeros((npoints, npoints))
    for s in np.unique(sigs):
        members = np.flatnonzero(sigs == s)
        mass = w[members].sum()
        kernel[np.ix_(members, members)] = np.broadcast_to(w[members] / mass, (len(members), len(members)))
    return kernel


def _standard_noise_kernel(q: int, n: int, nu: np.ndarray, rho: float) -> np.ndarray:
    single = rho * np.eye(q) + (1.0 - rho) * np.outer(np.ones(q), nu)
    kernel = np.ones((1, 1))
    for _ in range(n):
        kernel = np.kron(kernel, single)
    return kernel


def coupling_joint_law(
    q: int, n: int, nu, prods: list[ProductFunction], kappa: float
) -> np.ndarray:
    """Exact joint law of (x, x') where X ~ nu^n, x is a signature-conditioned
    full resample of X and x' is a (1-kappa)-noisy copy of X."""
    nu = np.asarray(nu, dtype=float)
    if q ** (2 * n) > ENUM_BUDGET * 10:
        raise ValueError("pair-domain too large for exact enumeration")
    a = _full_resample_kernel(q, n, nu, prods)
    b = _standard_noise_kernel(q, n, nu, 1.0 - kappa)
    w = np.ones(1)
    for _ in range(n):
        w = np.kron(w, nu)
    return a.T @ (w[:, None] * b)


def coupling_distance_estimate(
    q: int, n: int, nu, prods: list[ProductFunction], kappa: float
) -> float:
    """Exact statistical distance between law(x, x') and nu^n x nu^n."""
    nu = np.asarray(nu, dtype=float)
    law = coupling_joint_law(q, n, nu, prods, kappa)
    w = np.ones(1)
    for _ in range(n):
        w = np.kron(w, nu)
    return 0.5 * float(np.abs(law - np.outer(w, w)).sum())


def coupling_sample(
    q: int, n: int, nu, prods: list[ProductFunction], kappa: float, rng: np.random.Generator
) -> tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]:
    """One draw of (X, x, x') from the coupled distribution."""
    nu = np.asarray(nu, dtype=float)
    w = np.ones(1)
    for _ in range(n):
        w = np.kron(w, nu)
    sigs = _signatures(q, n, prods)
    x_flat = int(rng.choice(len(w), p=w))
    members = np.flatnonzero(sigs == sigs[x_flat])
    cond = w[members] / w[members].sum()
    y_flat = int(members[rng.choice(len(members), p=cond)])

    def decode(flat: int) -> tuple[int, ...]:
        out = []
        for _ in range(n):
            out.append(flat % q)
            flat //= q
        return tuple(reversed(out))

    big_x = decode(x_flat)
    xp = list(big_x)
    for i in range(n):
        if rng.random() < kappa:
            xp[i] = int(rng.choice(q, p=nu))
    return big_x, decode(y_flat), tuple(xp)


def conditional_kernel(
    q: int, n: int, nu, prods: list[ProductFunction], subset: frozenset[int]
) -> np.ndarray:
    """Markov kernel of the subset-conditional resample: row x is nu^n
    conditioned on agreeing with x outside `subset` and on the exact values of
    every product function."""
    nu = np.asarray(nu, dtype=float)
    npoints = q**n
    w = np.ones(1)
    for _ in range(n):
        w = np.kron(w, nu)
    sigs = _signatures(q, n, prods)
    keys = _class_keys(q, n, subset, sigs)
    kernel = np.zeros((npoints, npoints))
    order = np.argsort(keys, kind="stable")
    sorted_keys = keys[order]
    boundaries = np.flatnonzero(np.diff(sorted_keys)) + 1
    for grp in np.split(order, boundaries):
        mass = w[grp].sum()
        kernel[np.ix_(grp, grp)] = np.broadcast_to(w[grp] / mass, (len(grp), len(grp)))
    return kernel


def extension_coupling_disagreement(
    q: int,
    n: int,
    nu,
    prods: list[ProductFunction],
    p_new: ProductFunction,
    eps: float,
) -> tuple[float, int]:
    """Exact disagreement probability of the coupling between the conditional
    noise operators for `prods` and for `prods + [p_new]`, plus the symbolic
    gap k.  The coupling reuses one resample whenever the nearest span member
    agrees with p_new on all resampled coordinates (the two kernels coincide
    there), and draws independently otherwise; its disagreement is <= k*eps.
    """
    from .prodfn import span_products

    nu = np.asarray(nu, dtype=float)
    best_k = None
    best_k_set: frozenset[int] = frozenset()
    one_candidates = span_products(prods)
    for p in one_candidates:
        diff = frozenset(
            i
            for i in range(n)
            if not all(
                (p.coordinate_table(i)[a] * p_new.coordinate_table(i)[a].inverse())
                == (p.coordinate_table(i)[0] * p_new.coordinate_table(i)[0].inverse())
                for a in range(q)
            )
        )
        if best_k is None or len(diff) < best_k:
            best_k = len(diff)
            best_k_set = diff
    assert best_k == symbolic_gap(prods, p_new)
    w = np.ones(1)
    for _ in range(n):
        w = np.kron(w, nu)
    total = 0.0
    for subset in _all_subsets_of(frozenset(range(n))):
        wgt = (eps ** len(subset)) * ((1.0 - eps) ** (n - len(subset)))
        if wgt == 0.0 or not (best_k_set & subset):
            continue
        k1 = conditional_kernel(q, n, nu, prods, subset)
        k2 = conditional_kernel(q, n, nu, prods + [p_new], subset)
        agree = ((k1 * k2).sum(axis=1) * w).sum()
        total += wgt * (1.0 - float(agree))
    return total, int(best_k)


# ---------------------------------------------------------------------------
# Triple distributions and the correlation seminorm estimator
# ---------------------------------------------------------------------------


@dataclass
class Mu3:
    """Distribution on Sigma_1 x Sigma_2 x Sigma_3 with recorded support."""

    sizes: tuple[int, int, int]
    table: np.ndarray  # shape sizes

    def __post_init__(self) -> None:
        self.table = np.asarray(self.table, dtype=float)
        if self.table.shape != self.sizes:
            raise ValueError("table shape mismatch")
        if abs(self.table.sum() - 1.0) > 1e-12 or np.any(self.table < 0):
            raise ValueError("table must be a distribution")
        if not self.table.any():
            raise ValueError("empty support")

    @property
    def alpha(self) -> float:
        pos = self.table[self.table > 0]
        return float(pos.min())

    def marginal(self, axis: int) -> np.ndarray:
        axes = tuple(a for a in range(3) if a != axis)
        return self.table.sum(axis=axes)

    def support(self) -> list[tuple[int, int, int]]:
        return [tuple(map(int, t)) for t in np.argwhere(self.table > 0)]


def mu_seminorm_estimate(
    f: DiscreteFunction, mu: Mu3, iters: int, rng: np.random.Generator
) -> float:
    """Alternating-ascent lower bound for sup over 1-bounded g, h of
    |E f(x) g(y) h(z)| under mu^n.

    Given f and one of g, h fixed, the optimal other factor is the unit-modulus
    phase alignment of its linear coefficient, computed pointwise in closed
    form; iterating is monotone nondecreasing.  This is a documented lower
    bound, not the supremum.
    """
    n = f.n
    q1, q2, q3 = mu.sizes
    supp = mu.support()
    if len(supp) ** n > ENUM_BUDGET:
        raise ValueError("mu^n support too large")
    probs = np.array([mu.table[t] for t in supp])
    tuples = list(iproduct(range(len(supp)), repeat=n))
    weights = np.array([math.prod(probs[list(t)]) for t in tuples])

    def flat(idx_list, base):
        out = 0
        for i in idx_list:
            out = out * base + i
        return out

    xs = np.array([flat([supp[i][0] for i in t], q1) for t in tuples])
    ys = np.array([flat([supp[i][1] for i in t], q2) for t in tuples])
    zs = np.array([flat([supp[i][2] for i in t], q3) for t in tuples])

    fx = f.table[xs]
    g = np.exp(2j * math.pi * rng.random(q2**n))
    h = np.exp(2j * math.pi * rng.random(q3**n))
    best = 0.0
    for _ in range(iters):
        # optimal g given h: align the phase of its coefficient, coordinatewise
        coef_g = np.zeros(q2**n, dtype=complex)
        np.add.at(coef_g, ys, weights * fx * h[zs])
        mags = np.abs(coef_g)
        g = np.where(mags > 1e-300, np.conj(coef_g) / np.maximum(mags, 1e-300), 1.0)
        coef_h = np.zeros(q3**n, dtype=complex)
        np.add.at(coef_h, zs, weights * fx * g[ys])
        mags = np.abs(coef_h)
        h = np.where(mags > 1e-300, np.conj(coef_h) / np.maximum(mags, 1e-300), 1.0)
        best = max(best, abs(complex(weights @ (fx * g[ys] * h[zs]))))
    return best
