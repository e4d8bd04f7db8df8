"""Dictatorship-test simulator and the randomized rounding scheme.

The test draws R-coordinate query triples from a constraint's local
distribution and checks the predicate on the three function values; dictator
coordinates pass with probability exactly 1 whenever every local distribution
is supported on satisfying tuples.  Exact mode returns a rational probability
(local distributions are first snapped to nearby exact rationals, see
`_rationalize_mu`); Monte-Carlo mode returns an estimate with a Wilson 95%
interval.

The rounding scheme evaluates caller-supplied decompositions
F_dec(a, g) = sum_P chi_P(a) L_P(g) at group inputs drawn uniformly from the
equation system's solution set and Gaussian inputs built from the solution
vectors, takes real parts, truncates to [0,1], scales onto the simplex (the
all-zero vector falls back to the first basis vector) and samples an output
symbol per variable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iproduct
from typing import Callable, Optional, Sequence

import numpy as np

from .csp import Instance, Triple, value as csp_value
from .ge import MasterGroupData, SolutionSpace, sample_solution
from .groups import Character, GroupElement, RootOfUnity, char_eval
from .sdp import DEFAULT_TAU_SUPP, SdpSolution, dimension_reduce, gram_index


# ---------------------------------------------------------------------------
# Rounding functions (tables)
# ---------------------------------------------------------------------------


@dataclass
class RoundingFunction:
    """F: Sigma^R -> Sigma as a dense table (row-major, first coordinate most
    significant) or a callback."""

    q: int
    R: int
    table: Optional[np.ndarray] = None
    fn: Optional[Callable[[tuple[int, ...]], int]] = None

    def __post_init__(self) -> None:
        if self.table is not None:
            self.table = np.asarray(self.table, dtype=np.int64).reshape(self.q**self.R)
            if np.any(self.table < 0) or np.any(self.table >= self.q):
                raise ValueError("table values outside the alphabet")
        elif self.fn is None:
            raise ValueError("need a table or a callback")

    def dense(self) -> np.ndarray:
        if self.table is not None:
            return self.table
        vals = [self.fn(z) for z in iproduct(range(self.q), repeat=self.R)]
        return np.asarray(vals, dtype=np.int64)

    @staticmethod
    def dictator(q: int, R: int, i: int) -> "RoundingFunction":
        tab = np.empty(q**R, dtype=np.int64)
        for flat, z in enumerate(iproduct(range(q), repeat=R)):
            tab[flat] = z[i]
        return RoundingFunction(q, R, tab)

    @staticmethod
    def from_json(obj: dict, q: int) -> "RoundingFunction":
        r = int(obj["R"])
        tab = np.asarray(obj["table"], dtype=np.int64) - 1  # 1-based symbols on disk
        return RoundingFunction(q, r, tab)

    def to_json(self) -> dict:
        return {"R": self.R, "table": [int(x) + 1 for x in self.dense()]}


# ---------------------------------------------------------------------------
# Acceptance probability
# ---------------------------------------------------------------------------


def _rationalize_mu(
    mu: dict[Triple, float], denom_cap: int
) -> tuple[list[Triple], list[int], int]:
    """Snap to an exact rational distribution: per-atom best approximation with
    denominator <= denom_cap, renormalized exactly.  Returns (support,
    integer numerators, common denominator)."""
    supp = sorted(t for t, w in mu.items() if w > 0)
    fracs = []
    for t in supp:
        w = mu[t]
        f = w if isinstance(w, Fraction) else Fraction(float(w)).limit_denominator(denom_cap)
        fracs.append(f)
    total = sum(fracs, Fraction(0))
    if total == 0:
        raise ValueError("local distribution vanished under rationalization")
    fracs = [f / total for f in fracs]
    den = math.lcm(*(f.denominator for f in fracs))
    nums = [int(f * den) for f in fracs]
    keep = [(t, n) for t, n in zip(supp, nums) if n > 0]
    return [t for t, _ in keep], [n for _, n in keep], den


def _mix_uniform(
    supp: list[Triple], nums: list[int], den: int, q: int, eps: Fraction
) -> tuple[list[Triple], list[int], int]:
    """(1-eps) mu + eps * uniform(Sigma^3), exactly."""
    if eps == 0:
        return supp, nums, den
    weights: dict[Triple, Fraction] = {}
    for t, n in zip(supp, nums):
        weights[t] = (1 - eps) * Fraction(n, den)
    u = eps / (q**3)
    for t in iproduct(range(q), repeat=3):
        weights[t] = weights.get(t, Fraction(0)) + u
    supp2 = sorted(weights)
    den2 = math.lcm(*(weights[t].denominator for t in supp2))
    nums2 = [int(weights[t] * den2) for t in supp2]
    return supp2, nums2, den2


def _exact_constraint_prob(
    supp: list[Triple],
    nums: list[int],
    den: int,
    ftab: np.ndarray,
    pred: np.ndarray,
    q: int,
    R: int,
    budget: int,
) -> Fraction:
    """Exact acceptance probability for one constraint: sum over supp^R of the
    product weight times the predicate check, in integer arithmetic.  The last
    two coordinates are vectorized; the rest are an outer loop."""
    m = len(supp)
    if m**R > budget:
        raise ValueError(f"enumeration size {m}^{R} exceeds budget {budget}")
    syms = np.asarray(supp, dtype=np.int64)  # (m, 3)
    n_arr = np.asarray(nums, dtype=np.int64)
    if R == 1:
        f_vals = [ftab[syms[:, p]] for p in range(3)]
        ok = pred[f_vals[0], f_vals[1], f_vals[2]]
        total = int((n_arr * ok).sum())
        return Fraction(total, den)
    # inner grid over the last two coordinate draws
    ii, jj = np.meshgrid(np.arange(m), np.arange(m), indexing="ij")
    ii, jj = ii.reshape(-1), jj.reshape(-1)
    inner_idx = [syms[ii, p] * q + syms[jj, p] for p in range(3)]
    inner_n = n_arr[ii] * n_arr[jj]
    total = 0
    qq = q * q
    for outer in iproduct(range(m), repeat=R - 2):
        outer_n = 1
        outer_idx = [0, 0, 0]
        for o in outer:
            outer_n *= nums[o]
            for p in range(3):
                outer_idx[p] = outer_idx[p] * q + int(syms[o, p])
        f_vals = [ftab[outer_idx[p] * qq + inner_idx[p]] for p in range(3)]
        ok = pred[f_vals[0], f_vals[1], f_vals[2]]
        total += outer_n * int((inner_n * ok).sum())
    return Fraction(total, den**R)


def dict_accept_prob(
    inst: Instance,
    sdp: SdpSolution,
    f: RoundingFunction,
    mode: str = "exact",
    samples: int = 100_000,
    seed: int = 0,
    eps: float = 0.0,
    budget: int = 10**8,
    denom_cap: int = 4096,
    tau_supp: float = DEFAULT_TAU_SUPP,
):
    """Probability that F passes the test.  exact -> Fraction; mc ->
    (estimate, (lo, hi)) with a Wilson 95% interval.

    eps > 0 turns on the imperfect-completeness variant that resamples each
    query coordinate uniformly with probability eps.
    """
    if f.q != inst.q or f.R < 1:
        raise ValueError("rounding function incompatible with the instance")
    q, r = inst.q, f.R
    ftab = f.dense()
    if mode == "exact":
        total = Fraction(0)
        eps_frac = Fraction(eps).limit_denominator(10**6)
        for k, c in enumerate(inst.constraints):
            mu = {t: w for t, w in sdp.local_dists[k].items() if w > tau_supp}
            supp, nums, den = _rationalize_mu(mu, denom_cap)
            supp, nums, den = _mix_uniform(supp, nums, den, q, eps_frac)
            pred = np.zeros((q, q, q), dtype=np.int64)
            for t in c.predicate.satisfying:
                pred[t] = 1
            total += c.weight * _exact_constraint_prob(supp, nums, den, ftab, pred, q, r, budget)
        return total
    if mode != "mc":
        raise ValueError(f"unknown mode {mode!r}")
    rng = np.random.default_rng(seed)
    weights = np.array([float(c.weight) for c in inst.constraints])
    supports = []
    for k in range(len(inst.constraints)):
        mu = {t: w for t, w in sdp.local_dists[k].items() if w > tau_supp}
        supp = sorted(mu)
        p = np.array([mu[t] for t in supp])
        supports.append((np.asarray(supp, dtype=np.int64), p / p.sum()))
    hits = 0
    for _ in range(samples):
        k = int(rng.choice(len(weights), p=weights / weights.sum()))
        syms, p = supports[k]
        draws = rng.choice(len(p), size=r, p=p)
        trip = syms[draws]  # (R, 3)
        if eps > 0:
            mask = rng.random(r) < eps
            trip = trip.copy()
            trip[mask] = rng.integers(0, q, size=(int(mask.sum()), 3))
        zs = [0, 0, 0]
        for i in range(r):
            for p3 in range(3):
                zs[p3] = zs[p3] * q + int(trip[i, p3])
        vals = (int(ftab[zs[0]]), int(ftab[zs[1]]), int(ftab[zs[2]]))
        if inst.constraints[k].predicate.holds(*vals):
            hits += 1
    return hits / samples, wilson_interval(hits, samples)


def wilson_interval(successes: int, n: int, z: float = 1.959964) -> tuple[float, float]:
    if n == 0:
        return 0.0, 1.0
    phat = successes / n
    denom = 1 + z * z / n
    center = (phat + z * z / (2 * n)) / denom
    half = z * math.sqrt(phat * (1 - phat) / n + z * z / (4 * n * n)) / denom
    return max(0.0, center - half), min(1.0, center + half)


# ---------------------------------------------------------------------------
# Orthonormal ensembles and multilinear expansions
# ---------------------------------------------------------------------------


@dataclass
class OrthonormalEnsemble:
    """Basis {l_0 = 1, l_1, ...} of L2(occurring symbols, mu), built by exact
    Gram-Schmidt on indicator deviations in canonical symbol order.

    `exact` holds the unnormalized rational vectors with their squared norms;
    orthogonality and unit norms are exact statements about those (inner
    products of normalized vectors are rational_inner / sqrt(n_a * n_b)).
    """

    q: int
    mu: np.ndarray
    basis: np.ndarray  # (k, q) float, rows are the normalized functions
    exact: list[tuple[tuple[Fraction, ...], Fraction]]

    @property
    def size(self) -> int:
        return self.basis.shape[0]


def orthonormal_ensemble(mu, q: int, on_occurring: bool = False) -> OrthonormalEnsemble:
    mu = np.asarray(mu, dtype=float)
    if mu.shape != (q,):
        raise ValueError("marginal shape mismatch")
    if not on_occurring and np.any(mu <= 0):
        raise ValueError("zero-mass atom; restrict to occurring symbols first")
    mu_frac = [Fraction(float(x)) for x in mu]

    def inner(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
        return sum((m * a * b for m, a, b in zip(mu_frac, u, v)), Fraction(0))

    vecs: list[tuple[Fraction, ...]] = [tuple(Fraction(1) for _ in range(q))]
    norms = [inner(vecs[0], vecs[0])]  # == 1
    for a in range(q):
        if mu[a] <= 0:
            continue
        w = [Fraction(1) if s == a else Fraction(0) for s in range(q)]
        for u, nrm in zip(vecs, norms):
            coef = inner(w, u) / nrm
            w = [x - coef * y for x, y in zip(w, u)]
        nrm = inner(w, w)
        if nrm > 0:
            vecs.append(tuple(w))
            norms.append(nrm)
    basis = np.array(
        [[float(x) / math.sqrt(float(n)) for x in v] for v, n in zip(vecs, norms)]
    )
    return OrthonormalEnsemble(q, mu, basis, list(zip(vecs, norms)))


def multilinear_expansion(
    table: np.ndarray, ens: OrthonormalEnsemble, r: int
) -> np.ndarray:
    """Coefficient tensor (k,)*R of values = sum_sigma coef[sigma] l_sigma;
    coef[sigma] = <F, l_sigma> under mu^R."""
    k = ens.size
    t = np.asarray(table, dtype=complex).reshape((ens.q,) * r)
    b = ens.mu[:, None] * ens.basis.T  # (q, k): column c is mu * l_c
    for _ in range(r):
        t = np.tensordot(t, b, axes=([0], [0]))
    return t.reshape((k,) * r)


def evaluate_multilinear(coef: np.ndarray, values: np.ndarray) -> complex:
    """values: (R, k) with column 0 = 1; contract per coordinate."""
    t = np.asarray(coef, dtype=complex)
    r = t.ndim
    for i in range(r):
        t = np.tensordot(t, values[i], axes=([0], [0]))
    return complex(t)


def expansion_to_table(coef: np.ndarray, ens: OrthonormalEnsemble, r: int) -> np.ndarray:
    """Evaluate the formal polynomial back on Sigma^R."""
    t = np.asarray(coef, dtype=complex)
    for _ in range(r):
        t = np.tensordot(t, ens.basis, axes=([0], [0]))
    return t.reshape(-1)


def truncate_coefficients(coef: np.ndarray, degree: int) -> np.ndarray:
    out = np.array(coef, dtype=complex)
    r = out.ndim
    for idx in np.ndindex(out.shape):
        if sum(1 for x in idx if x != 0) > degree:
            out[idx] = 0
    return out


def coefficient_degree(coef: np.ndarray) -> int:
    deg = 0
    for idx in np.ndindex(coef.shape):
        if coef[idx] != 0:
            deg = max(deg, sum(1 for x in idx if x != 0))
    return deg


def coefficient_influence(coef: np.ndarray, i: int) -> float:
    total = 0.0
    for idx in np.ndindex(coef.shape):
        if idx[i] != 0:
            total += abs(coef[idx]) ** 2
    return total


# ---------------------------------------------------------------------------
# Gaussian ensembles from solution vectors
# ---------------------------------------------------------------------------


def gaussian_ensemble(
    inst: Instance,
    sdp: SdpSolution,
    r: int,
    rng: np.random.Generator,
    vectors: Optional[np.ndarray] = None,
    ensembles: Optional[dict[int, OrthonormalEnsemble]] = None,
) -> dict[int, np.ndarray]:
    """R i.i.d. ensemble draws per variable: g_{s,c}^{(j)} =
    sum_w l_{s,c}(w) <b_{s,w}, zeta_j>.  Returns var -> (R, k_s) with column 0
    identically 1; deterministic for a fixed generator state."""
    if vectors is None:
        vectors = dimension_reduce(sdp, 1 + inst.num_vars * inst.q)
    if ensembles is None:
        ensembles = {
            v: orthonormal_ensemble(sdp.marginal(inst, v), inst.q, on_occurring=True)
            for v in range(inst.num_vars)
        }
    dim = vectors.shape[1]
    zetas = rng.standard_normal((r, dim))
    out: dict[int, np.ndarray] = {}
    for v, ens in ensembles.items():
        b = np.array([vectors[gram_index(inst, v, a)] for a in range(inst.q)])  # (q, dim)
        proj = zetas @ b.T  # (R, q): <b_{v,a}, zeta_j>
        vals = proj @ ens.basis.T  # (R, k)
        vals[:, 0] = 1.0
        out[v] = vals
    return out


# ---------------------------------------------------------------------------
# Decompositions and the rounding scheme
# ---------------------------------------------------------------------------


@dataclass
class SpanTerm:
    """One product-function summand: chi_1 .. chi_R over the variable's master
    group plus a phase, with one multilinear polynomial per output symbol."""

    theta: RootOfUnity
    chars: tuple[Character, ...]
    polys: dict[int, np.ndarray]

    def char_value(self, a_seq: Sequence[GroupElement]) -> complex:
        phase = self.theta
        for chi, a in zip(self.chars, a_seq):
            phase = phase * char_eval(chi, a)
        return phase.to_complex()


@dataclass
class Decomposition:
    r: int
    degree_bound: int
    norm_bound: float
    per_var: dict[int, list[SpanTerm]]
    influence_bound: Optional[float] = None

    def validate(self) -> None:
        for v, terms in self.per_var.items():
            for term in terms:
                if len(term.chars) != self.r:
                    raise ValueError(f"variable {v}: character tuple length != R")
                for j, coef in term.polys.items():
                    if coefficient_degree(coef) > self.degree_bound:
                        raise ValueError(f"variable {v} output {j}: degree bound violated")
                    nrm = math.sqrt(float(np.sum(np.abs(coef) ** 2)))
                    if nrm > self.norm_bound + 1e-9:
                        raise ValueError(f"variable {v} output {j}: norm bound violated")
                    if self.influence_bound is not None:
                        for i in range(self.r):
                            if coefficient_influence(coef, i) > self.influence_bound + 1e-9:
                                raise ValueError(
                                    f"variable {v} output {j}: influence bound violated at {i}"
                                )

    def shifted_influences(self) -> dict[int, float]:
        out = {}
        for v, terms in self.per_var.items():
            worst = 0.0
            for term in terms:
                for coef in term.polys.values():
                    for i in range(self.r):
                        worst = max(worst, coefficient_influence(coef, i))
            out[v] = worst
        return out

    def to_json(self) -> dict:
        return {
            "R": self.r,
            "degree_bound": self.degree_bound,
            "norm_bound": self.norm_bound,
            "per_var": {
                str(v): [
                    {
                        "theta": [t.theta.num, t.theta.den],
                        "chars": [list(c.exponents) for c in t.chars],
                        "polys": {
                            str(j): [
                                [list(idx), float(np.real(c[idx])), float(np.imag(c[idx]))]
                                for idx in np.ndindex(c.shape)
                                if c[idx] != 0
                            ]
                            for j, c in t.polys.items()
                        },
                        "poly_shape": list(next(iter(t.polys.values())).shape) if t.polys else [],
                    }
                    for t in terms
                ]
                for v, terms in self.per_var.items()
            },
        }

    @staticmethod
    def from_json(obj: dict, data: MasterGroupData) -> "Decomposition":
        r = int(obj["R"])
        per_var: dict[int, list[SpanTerm]] = {}
        for vs, terms in obj["per_var"].items():
            v = int(vs)
            grp = data.master[v]
            lst = []
            for t in terms:
                theta = RootOfUnity.make(int(t["theta"][0]), int(t["theta"][1]))
                chars = tuple(grp.character(e) for e in t["chars"])
                shape = tuple(t["poly_shape"])
                polys = {}
                for js, entries in t["polys"].items():
                    coef = np.zeros(shape, dtype=complex)
                    for idx, re, im in entries:
                        coef[tuple(idx)] = re + 1j * im
                    polys[int(js)] = coef
                lst.append(SpanTerm(theta, chars, polys))
            per_var[v] = lst
        return Decomposition(
            r, int(obj["degree_bound"]), float(obj["norm_bound"]), per_var
        )


def trivial_decomposition(
    inst: Instance,
    sdp: SdpSolution,
    data: MasterGroupData,
    f: RoundingFunction,
    degree: int,
) -> Decomposition:
    """Span = {1}; the polynomial for output j is the degree-truncated
    multilinear expansion of the indicator of F = j."""
    ftab = f.dense()
    per_var: dict[int, list[SpanTerm]] = {}
    norm_bound = 0.0
    for v in range(inst.num_vars):
        ens = orthonormal_ensemble(sdp.marginal(inst, v), inst.q, on_occurring=True)
        grp = data.master[v]
        triv = grp.character([0] * len(grp.cyclic_orders))
        polys = {}
        for j in range(inst.q):
            indicator = (ftab == j).astype(float)
            coef = truncate_coefficients(multilinear_expansion(indicator, ens, f.R), degree)
            polys[j] = coef
            norm_bound = max(norm_bound, math.sqrt(float(np.sum(np.abs(coef) ** 2))))
        per_var[v] = [SpanTerm(RootOfUnity.one(), (triv,) * f.R, polys)]
    return Decomposition(f.R, degree, max(norm_bound, float(degree)), per_var)


def constant_decomposition(
    inst: Instance, data: MasterGroupData, r: int, target: Sequence[int]
) -> Decomposition:
    """Constant polynomials pinning each variable to target[v]; used as the
    determinized end-to-end fixture."""
    per_var: dict[int, list[SpanTerm]] = {}
    for v in range(inst.num_vars):
        grp = data.master[v]
        triv = grp.character([0] * len(grp.cyclic_orders))
        polys = {}
        for j in range(inst.q):
            coef = np.zeros((1,) * r, dtype=complex)
            if j == target[v]:
                coef[(0,) * r] = 1.0
            polys[j] = coef
        per_var[v] = [SpanTerm(RootOfUnity.one(), (triv,) * r, polys)]
    return Decomposition(r, 0, 1.0, per_var)


def trunc01(x: float) -> float:
    return 0.0 if x < 0.0 else (1.0 if x > 1.0 else x)


def scale_to_simplex(p: np.ndarray) -> np.ndarray:
    total = float(p.sum())
    if total == 0.0:
        out = np.zeros_like(p)
        out[0] = 1.0
        return out
    return p / total


def round_once(
    inst: Instance,
    sdp: SdpSolution,
    space: SolutionSpace,
    dec: Decomposition,
    rng: np.random.Generator,
) -> tuple[int, ...]:
    """One rounding pass: sample R equation-system solutions and R Gaussian
    draws, evaluate each variable's decoupled polynomial, truncate/scale, and
    sample the output symbols."""
    if space.empty:
        raise ValueError("solution space is empty")
    for v in range(inst.num_vars):
        if v not in dec.per_var:
            raise ValueError(f"decomposition missing variable {v}")
    r = dec.r
    alphas = [sample_solution(space, rng) for _ in range(r)]
    gvals = gaussian_ensemble(inst, sdp, r, rng)
    out = []
    for v in range(inst.num_vars):
        a_seq = [alphas[j][v] for j in range(r)]
        p = np.zeros(inst.q, dtype=complex)
        for term in dec.per_var[v]:
            chi_val = term.char_value(a_seq)
            k = next(iter(term.polys.values())).shape[0] if term.polys else 1
            vals = gvals[v][:, :k] if gvals[v].shape[1] >= k else _pad_columns(gvals[v], k)
            for j, coef in term.polys.items():
                p[j] += chi_val * evaluate_multilinear(coef, vals)
        tilde = np.array([trunc01(float(np.real(x))) for x in p])
        star = scale_to_simplex(tilde)
        star = np.maximum(star, 0.0)
        star = star / star.sum()
        out.append(int(rng.choice(inst.q, p=star)))
    return tuple(out)


def _pad_columns(vals: np.ndarray, k: int) -> np.ndarray:
    # ensemble directions beyond the occurring symbols contribute nothing
    out = np.zeros((vals.shape[0], k))
    out[:, : vals.shape[1]] = vals
    return out


def estimate_round_value(
    inst: Instance,
    sdp: SdpSolution,
    space: SolutionSpace,
    dec: Decomposition,
    trials: int,
    seed: int = 0,
) -> tuple[float, tuple[float, float]]:
    """Monte-Carlo mean of value(round_once(...)), with one seeded stream per
    trial index merged in order."""
    vals = []
    for t in range(trials):
        rng = np.random.default_rng([seed, t])
        a = round_once(inst, sdp, space, dec, rng)
        vals.append(float(csp_value(inst, a)))
    arr = np.array(vals)
    mean = float(arr.mean())
    half = 1.959964 * float(arr.std(ddof=1)) / math.sqrt(trials) if trials > 1 else 1.0
    return mean, (mean - half, mean + half)
