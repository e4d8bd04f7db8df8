"""Exact arithmetic for finite Abelian groups given as products of cyclic factors.

Groups are products prod_j Z_{n_j}; elements are residue tuples, characters are
exponent tuples, and character values are exact roots of unity (k, N) meaning
e^{2*pi*i*k/N}.  Nothing in this module touches floating point except the
explicit `to_complex` conversions, so identities such as chi(g+h) = chi(g)chi(h)
can be asserted with `==`.

Cyclic factors are kept as given (not normalized to invariant factors) so that
product groups built by concatenating blocks keep their block structure;
`FiniteAbelianGroup.invariant_factors` provides the canonical form for equality
testing.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from itertools import product as iproduct
from math import gcd, lcm
from typing import Iterator, Sequence

Matrix = list[list[int]]


@dataclass(frozen=True)
class RootOfUnity:
    """e^{2*pi*i*num/den} with 0 <= num < den and gcd(num, den) = 1."""

    num: int
    den: int

    @staticmethod
    def make(num: int, den: int) -> "RootOfUnity":
        if den <= 0:
            raise ValueError("denominator must be positive")
        num %= den
        g = gcd(num, den)
        return RootOfUnity(num // g, den // g)

    @staticmethod
    def one() -> "RootOfUnity":
        return RootOfUnity(0, 1)

    @property
    def is_one(self) -> bool:
        return self.num == 0

    def __mul__(self, other: "RootOfUnity") -> "RootOfUnity":
        d = lcm(self.den, other.den)
        return RootOfUnity.make(self.num * (d // self.den) + other.num * (d // other.den), d)

    def inverse(self) -> "RootOfUnity":
        return RootOfUnity.make(-self.num, self.den)

    def __pow__(self, k: int) -> "RootOfUnity":
        return RootOfUnity.make(self.num * k, self.den)

    def to_complex(self) -> complex:
        return cmath.exp(2j * math.pi * self.num / self.den)

    def __repr__(self) -> str:
        return f"RootOfUnity({self.num}/{self.den})"


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """prod_j Z_{n_j} for the given cyclic orders (each n_j >= 1)."""

    cyclic_orders: tuple[int, ...]

    def __post_init__(self) -> None:
        if any(n < 1 for n in self.cyclic_orders):
            raise ValueError("cyclic orders must be >= 1")

    @property
    def order(self) -> int:
        return math.prod(self.cyclic_orders)

    @property
    def exponent(self) -> int:
        return lcm(*self.cyclic_orders) if self.cyclic_orders else 1

    @property
    def is_trivial(self) -> bool:
        return self.order == 1

    def identity(self) -> "GroupElement":
        return GroupElement(self, (0,) * len(self.cyclic_orders))

    def element(self, coords: Sequence[int]) -> "GroupElement":
        if len(coords) != len(self.cyclic_orders):
            raise ValueError("coordinate length mismatch")
        return GroupElement(self, tuple(c % n for c, n in zip(coords, self.cyclic_orders)))

    def elements(self) -> Iterator["GroupElement"]:
        for coords in iproduct(*(range(n) for n in self.cyclic_orders)):
            yield GroupElement(self, coords)

    def character(self, exponents: Sequence[int]) -> "Character":
        if len(exponents) != len(self.cyclic_orders):
            raise ValueError("exponent length mismatch")
        return Character(self, tuple(e % n for e, n in zip(exponents, self.cyclic_orders)))

    def characters(self) -> Iterator["Character"]:
        """All characters, trivial first, lexicographic in the exponent tuple."""
        for exps in iproduct(*(range(n) for n in self.cyclic_orders)):
            yield Character(self, exps)

    def invariant_factors(self) -> tuple[int, ...]:
        """Divisibility-chain form d_1 | d_2 | ... (for isomorphism testing)."""
        nontrivial = [n for n in self.cyclic_orders if n > 1]
        if not nontrivial:
            return ()
        diag = [[nontrivial[i] if i == j else 0 for j in range(len(nontrivial))]
                for i in range(len(nontrivial))]
        _, d, _ = smith_normal_form(diag)
        facs = [d[i][i] for i in range(len(nontrivial))]
        return tuple(f for f in facs if f > 1)

    def to_json(self) -> dict:
        return {"cyclic_orders": list(self.cyclic_orders)}

    @staticmethod
    def from_json(obj: dict) -> "FiniteAbelianGroup":
        return FiniteAbelianGroup(tuple(int(n) for n in obj["cyclic_orders"]))


def direct_product(*groups: FiniteAbelianGroup) -> FiniteAbelianGroup:
    orders: tuple[int, ...] = ()
    for g in groups:
        orders += g.cyclic_orders
    return FiniteAbelianGroup(orders)


@dataclass(frozen=True)
class GroupElement:
    group: FiniteAbelianGroup
    coords: tuple[int, ...]

    def __add__(self, other: "GroupElement") -> "GroupElement":
        self._check(other)
        return GroupElement(
            self.group,
            tuple((a + b) % n for a, b, n in zip(self.coords, other.coords, self.group.cyclic_orders)),
        )

    def __neg__(self) -> "GroupElement":
        return GroupElement(
            self.group, tuple((-a) % n for a, n in zip(self.coords, self.group.cyclic_orders))
        )

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        return self + (-other)

    def scale(self, k: int) -> "GroupElement":
        return GroupElement(
            self.group, tuple((a * k) % n for a, n in zip(self.coords, self.group.cyclic_orders))
        )

    @property
    def is_identity(self) -> bool:
        return all(c == 0 for c in self.coords)

    def element_order(self) -> int:
        return lcm(*(n // gcd(c, n) for c, n in zip(self.coords, self.group.cyclic_orders))) \
            if self.coords else 1

    def _check(self, other: "GroupElement") -> None:
        if self.group != other.group:
            raise ValueError("elements of different groups")


@dataclass(frozen=True)
class Character:
    group: FiniteAbelianGroup
    exponents: tuple[int, ...]

    def __call__(self, g: GroupElement) -> RootOfUnity:
        return char_eval(self, g)

    def __mul__(self, other: "Character") -> "Character":
        if self.group != other.group:
            raise ValueError("characters of different groups")
        return Character(
            self.group,
            tuple((a + b) % n for a, b, n in zip(self.exponents, other.exponents, self.group.cyclic_orders)),
        )

    def inverse(self) -> "Character":
        return Character(
            self.group, tuple((-a) % n for a, n in zip(self.exponents, self.group.cyclic_orders))
        )

    @property
    def is_trivial(self) -> bool:
        return all(e == 0 for e in self.exponents)


def char_eval(chi: Character, g: GroupElement) -> RootOfUnity:
    """chi(g) = e^{2*pi*i * sum_j e_j c_j / n_j} as an exact phase."""
    if chi.group != g.group:
        raise ValueError("character/element group mismatch")
    L = chi.group.exponent
    num = 0
    for e, c, n in zip(chi.exponents, g.coords, chi.group.cyclic_orders):
        num += e * c * (L // n)
    return RootOfUnity.make(num, L)


@dataclass(frozen=True)
class Subgroup:
    """Subgroup of a finite ambient group, materialized on construction.

    The element set is the closure of the generators; iteration order is the
    canonical sort of coordinate tuples so all downstream computations are
    deterministic.
    """

    ambient: FiniteAbelianGroup
    generators: tuple[GroupElement, ...]
    _elements: tuple[GroupElement, ...] = field(compare=False, repr=False, default=())

    @property
    def elements(self) -> tuple[GroupElement, ...]:
        return self._elements

    @property
    def order(self) -> int:
        return len(self._elements)

    def __contains__(self, g: GroupElement) -> bool:
        return g in set(self._elements)

    def element_set(self) -> frozenset[GroupElement]:
        return frozenset(self._elements)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.ambient == other.ambient and self.element_set() == other.element_set()

    def __hash__(self) -> int:
        return hash((self.ambient, self.element_set()))


def subgroup_from_generators(
    group: FiniteAbelianGroup, gens: Sequence[GroupElement]
) -> Subgroup:
    """Closure of `gens` under addition; always contains the identity."""
    for g in gens:
        if g.group != group:
            raise ValueError("generator not in ambient group")
    seen = {group.identity()}
    frontier = [group.identity()]
    while frontier:
        cur = frontier.pop()
        for g in gens:
            nxt = cur + g
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    ordered = tuple(sorted(seen, key=lambda e: e.coords))
    return Subgroup(group, tuple(gens), ordered)


def annihilator(h: Subgroup) -> list[Character]:
    """Characters of the ambient group that are 1 on all of H.

    Checking the generators suffices (a character trivial on generators is
    trivial on their closure).  |Ann(H)| * |H| = |G|.
    """
    out = []
    for chi in h.ambient.characters():
        if all(char_eval(chi, g).is_one for g in h.generators):
            out.append(chi)
    return out


def all_subgroups(group: FiniteAbelianGroup) -> list[Subgroup]:
    """Every subgroup, found by repeatedly extending known subgroups by one element."""
    triv = subgroup_from_generators(group, [])
    found: dict[frozenset[GroupElement], Subgroup] = {triv.element_set(): triv}
    frontier = [triv]
    elems = list(group.elements())
    while frontier:
        sub = frontier.pop()
        for e in elems:
            if e in sub.element_set():
                continue
            ext = subgroup_from_generators(group, list(sub.generators) + [e])
            key = ext.element_set()
            if key not in found:
                found[key] = ext
                frontier.append(ext)
    return sorted(found.values(), key=lambda s: (s.order, tuple(e.coords for e in s.elements)))


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------


def _eye(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def _row_op(m: Matrix, dst: int, src: int, k: int) -> None:
    m[dst] = [a + k * b for a, b in zip(m[dst], m[src])]


def _col_op(m: Matrix, dst: int, src: int, k: int) -> None:
    for row in m:
        row[dst] += k * row[src]


def _swap_rows(m: Matrix, i: int, j: int) -> None:
    m[i], m[j] = m[j], m[i]


def _swap_cols(m: Matrix, i: int, j: int) -> None:
    for row in m:
        row[i], row[j] = row[j], row[i]


def _negate_row(m: Matrix, i: int) -> None:
    m[i] = [-a for a in m[i]]


def smith_normal_form(a: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix, Matrix]:
    """U @ A @ V = D with D diagonal, d_1 | d_2 | ..., U and V unimodular.

    Pivoting: smallest-absolute-value nonzero entry of the working submatrix,
    ties broken in row-major order.  Total over integer matrices.
    """
    d: Matrix = [list(map(int, row)) for row in a]
    m = len(d)
    n = len(d[0]) if m else 0
    u = _eye(m)
    v = _eye(n)

    def pivot(t: int) -> tuple[int, int] | None:
        best: tuple[int, int, int] | None = None
        for i in range(t, m):
            for j in range(t, n):
                x = d[i][j]
                if x != 0 and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
        return None if best is None else (best[1], best[2])

    t = 0
    while t < min(m, n):
        pv = pivot(t)
        if pv is None:
            break
        while True:
            pi, pj = pv
            if pi != t:
                _swap_rows(d, t, pi)
                _swap_rows(u, t, pi)
            if pj != t:
                _swap_cols(d, t, pj)
                _swap_cols(v, t, pj)
            if d[t][t] < 0:
                _negate_row(d, t)
                _negate_row(u, t)
            p = d[t][t]
            for i in range(t + 1, m):
                if d[i][t]:
                    q = d[i][t] // p
                    _row_op(d, i, t, -q)
                    _row_op(u, i, t, -q)
            for j in range(t + 1, n):
                if d[t][j]:
                    q = d[t][j] // p
                    _col_op(d, j, t, -q)
                    _col_op(v, j, t, -q)
            if all(d[i][t] == 0 for i in range(t + 1, m)) and all(
                d[t][j] == 0 for j in range(t + 1, n)
            ):
                bad = None
                for i in range(t + 1, m):
                    for j in range(t + 1, n):
                        if d[i][j] % p != 0:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                _row_op(d, t, bad, 1)
                _row_op(u, t, bad, 1)
            pv = pivot(t)
            assert pv is not None
        t += 1
    return u, d, v


def snf_diagonal(d: Matrix) -> list[int]:
    return [d[i][i] for i in range(min(len(d), len(d[0]) if d else 0))]


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    return [[sum(x * y for x, y in zip(row, col)) for col in zip(*b)] for row in a]


def mat_det(a: Matrix) -> int:
    """Exact integer determinant by fraction-free Gaussian elimination (Bareiss)."""
    n = len(a)
    if n == 0:
        return 1
    m = [row[:] for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]
