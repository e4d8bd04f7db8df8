"""Product functions theta * prod_i u_i(sigma(x_i)) and their symbolic metric.

All values are exact roots of unity; equality and proportionality of
coordinate functions are decided exactly, never by float comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product as iproduct

from .groups import Character, FiniteAbelianGroup, GroupElement, RootOfUnity, char_eval


@dataclass(frozen=True)
class ProductFunction:
    """P(x) = theta * prod_i u_i(sigma(x_i)) on Sigma^n; |P(x)| = 1 everywhere."""

    theta: RootOfUnity
    chars: tuple[Character, ...]
    sigma: tuple[GroupElement, ...]  # symbol -> group element

    @property
    def n(self) -> int:
        return len(self.chars)

    @property
    def q(self) -> int:
        return len(self.sigma)

    @property
    def group(self) -> FiniteAbelianGroup:
        return self.sigma[0].group

    def coordinate_table(self, i: int) -> tuple[RootOfUnity, ...]:
        """(u_i(sigma(a)))_a, exact."""
        return tuple(char_eval(self.chars[i], g) for g in self.sigma)

    def eval_phase(self, x: tuple[int, ...]) -> RootOfUnity:
        out = self.theta
        for i, xi in enumerate(x):
            out = out * char_eval(self.chars[i], self.sigma[xi])
        return out

    def __call__(self, x: tuple[int, ...]) -> complex:
        return self.eval_phase(x).to_complex()

    def pointwise_mul(self, other: "ProductFunction") -> "ProductFunction":
        if self.sigma != other.sigma or self.n != other.n:
            raise ValueError("product functions over different setups")
        return ProductFunction(
            theta=self.theta * other.theta,
            chars=tuple(a * b for a, b in zip(self.chars, other.chars)),
            sigma=self.sigma,
        )

    def power(self, k: int) -> "ProductFunction":
        out = trivial_product_function(self.group, self.sigma, self.n)
        base = self
        for _ in range(k):
            out = out.pointwise_mul(base)
        return out

    def signature(self) -> tuple:
        """Exact function-identity key: value at the base point plus each
        single-coordinate deviation (determines P on all of Sigma^n)."""
        base = self.eval_phase((0,) * self.n)
        devs = []
        for i in range(self.n):
            tab = self.coordinate_table(i)
            devs.append(tuple(t * tab[0].inverse() for t in tab))
        return (base, tuple(devs))


def trivial_product_function(
    group: FiniteAbelianGroup, sigma: tuple[GroupElement, ...], n: int
) -> ProductFunction:
    triv = group.character([0] * len(group.cyclic_orders))
    return ProductFunction(RootOfUnity.one(), (triv,) * n, sigma)


def _coordinate_constant(table: tuple[RootOfUnity, ...]) -> bool:
    return all(t == table[0] for t in table)


def _proportional(ta: tuple[RootOfUnity, ...], tb: tuple[RootOfUnity, ...]) -> bool:
    """u o sigma == c * v o sigma for some unimodular c (the ratio is constant)."""
    ratios = {a * b.inverse() for a, b in zip(ta, tb)}
    return len(ratios) == 1


def symbolic_distance(p: ProductFunction, p2: ProductFunction) -> int:
    """Minimum number of coordinates on which any two representations of p and
    p2 must differ.  Phases are free, so coordinate i can be matched exactly
    when the coordinate functions agree up to a global scalar (the scalar gets
    absorbed into theta); the distance is the count of non-proportional
    coordinate functions."""
    if p.n != p2.n or p.sigma != p2.sigma:
        raise ValueError("product functions over different setups")
    return sum(
        0 if _proportional(p.coordinate_table(i), p2.coordinate_table(i)) else 1
        for i in range(p.n)
    )


def span_products(collection: list[ProductFunction]) -> list[ProductFunction]:
    """All products prod_i P_i^{a_i} with 0 <= a_i <= |G|, deduplicated by exact
    function identity.  Always contains the constant-1 function."""
    if not collection:
        raise ValueError("empty collection")
    group = collection[0].group
    sigma = collection[0].sigma
    n = collection[0].n
    cap = group.order
    seen: dict[tuple, ProductFunction] = {}
    for exps in iproduct(range(cap + 1), repeat=len(collection)):
        cur = trivial_product_function(group, sigma, n)
        for p, a in zip(collection, exps):
            if a:
                cur = cur.pointwise_mul(p.power(a))
        key = cur.signature()
        if key not in seen:
            seen[key] = cur
    return list(seen.values())


def rank(collection: list[ProductFunction]) -> float:
    """min over non-constant span members of their symbolic distance to 1.

    Members that are constant functions act like 1 and are excluded; if the
    span contains nothing else the rank is +inf.
    """
    best = math.inf
    for p in span_products(collection):
        if all(_coordinate_constant(p.coordinate_table(i)) for i in range(p.n)):
            continue
        one = trivial_product_function(p.group, p.sigma, p.n)
        best = min(best, symbolic_distance(p, one))
    return best


def symbolic_gap(collection: list[ProductFunction], p_new: ProductFunction) -> int:
    """min over P in span(collection) of the symbolic distance to p_new."""
    return min(symbolic_distance(p, p_new) for p in span_products(collection))
