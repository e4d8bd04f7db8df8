"""Abelian embeddings of ternary relations.

A standard embedding of a relation S over Sigma_1 x Sigma_2 x Sigma_3 is a
triple of maps sigma_i: Sigma_i -> G into an Abelian group with
sigma_i(w*) = 0 for the designated first symbol w*, together with a constant
g such that sigma_1(a) + sigma_2(b) + sigma_3(c) = g on every tuple of S.

`universal_embedding` computes the initial object among these: the quotient of
the free Abelian group on the non-w* symbol slots (plus one generator for g)
by the tuple relations, i.e. the cokernel of the integer relation matrix,
split into torsion and free parts by Smith normal form.  Every standard
embedding into any Abelian group factors through it, so downstream consumers
that need "all embeddings into all groups" (character-column constructions,
equation generation) can use this single embedding together with all
characters of its torsion group: characters of any quotient target pull back
to characters of the universal group, so the generated column space and
equation set are the same.

Free part and integer embeddings: a homomorphism from the cokernel to the
integers exists iff the free rank is positive, and any such nonzero
homomorphism restricts to a not-all-constant triple of maps.  (If every
sigma_i(a) generator mapped to 0, each tuple relation would force g -> 0 as
well, and the homomorphism would vanish on all generators.)  Hence
`has_z_embedding` is exactly `free_rank > 0`, and a witness triple of integer
maps is read off one free coordinate.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct

from .groups import (
    FiniteAbelianGroup,
    GroupElement,
    smith_normal_form,
    snf_diagonal,
)


@dataclass(frozen=True)
class Relation3:
    """Ternary relation over finite alphabets; symbols are 0-based, w* = 0."""

    sizes: tuple[int, int, int]
    tuples: frozenset[tuple[int, int, int]]

    def __post_init__(self) -> None:
        for (a, b, c) in self.tuples:
            if not (0 <= a < self.sizes[0] and 0 <= b < self.sizes[1] and 0 <= c < self.sizes[2]):
                raise ValueError(f"tuple {(a, b, c)} outside alphabets {self.sizes}")

    @property
    def is_empty(self) -> bool:
        return not self.tuples

    def sorted_tuples(self) -> list[tuple[int, int, int]]:
        return sorted(self.tuples)

    @staticmethod
    def from_json(obj: dict) -> "Relation3":
        q = int(obj["sigma"])
        tups = frozenset((int(a) - 1, int(b) - 1, int(c) - 1) for a, b, c in obj["tuples"])
        return Relation3((q, q, q), tups)

    def to_json(self) -> dict:
        return {
            "sigma": self.sizes[0],
            "tuples": [[a + 1, b + 1, c + 1] for a, b, c in self.sorted_tuples()],
        }


@dataclass(frozen=True)
class UniversalEmbedding:
    """Universal standard embedding data of a relation.

    torsion maps land in `torsion_group`; the free part of each symbol's image
    is kept as an integer vector of length `free_rank` (used for integer
    embedding witnesses and for the factoring tests).
    """

    relation: Relation3
    torsion_group: FiniteAbelianGroup
    maps: tuple[tuple[GroupElement, ...], tuple[GroupElement, ...], tuple[GroupElement, ...]]
    g: GroupElement
    free_rank: int
    free_maps: tuple[tuple[tuple[int, ...], ...], ...]
    free_g: tuple[int, ...]

    def check_identity(self) -> bool:
        """sigma_1(a) + sigma_2(b) + sigma_3(c) == g on every tuple, exactly."""
        for (a, b, c) in self.relation.tuples:
            s = self.maps[0][a] + self.maps[1][b] + self.maps[2][c]
            if s != self.g:
                return False
            for k in range(self.free_rank):
                if (
                    self.free_maps[0][a][k] + self.free_maps[1][b][k] + self.free_maps[2][c][k]
                    != self.free_g[k]
                ):
                    return False
        return True

    def to_json(self) -> dict:
        return {
            "torsion": list(self.torsion_group.cyclic_orders),
            "free_rank": self.free_rank,
            "maps": [[list(e.coords) for e in m] for m in self.maps],
            "g": list(self.g.coords),
        }


def _unknown_index(sizes: tuple[int, int, int]) -> tuple[dict[tuple[int, int], int], int]:
    """Index (position, symbol != 0) slots, then one slot for g."""
    idx: dict[tuple[int, int], int] = {}
    k = 0
    for pos in range(3):
        for sym in range(1, sizes[pos]):
            idx[(pos, sym)] = k
            k += 1
    return idx, k + 1  # last slot is g


def relation_matrix(rel: Relation3) -> list[list[int]]:
    """One row per tuple: sigma_1(a) + sigma_2(b) + sigma_3(c) - g = 0."""
    idx, nunk = _unknown_index(rel.sizes)
    rows = []
    for (a, b, c) in rel.sorted_tuples():
        row = [0] * nunk
        for pos, sym in ((0, a), (1, b), (2, c)):
            if sym != 0:
                row[idx[(pos, sym)]] += 1
        row[-1] -= 1
        rows.append(row)
    return rows


def universal_embedding(rel: Relation3) -> UniversalEmbedding:
    """Cokernel of the relation matrix, split into torsion and free parts."""
    if rel.is_empty:
        raise ValueError("relation is empty")
    idx, nunk = _unknown_index(rel.sizes)
    rows = relation_matrix(rel)
    # Cokernel of Z^nunk / colspan(A^T): Smith of A^T, generator e_j maps to
    # column j of U read modulo the diagonal.
    at = [[rows[r][c] for r in range(len(rows))] for c in range(nunk)]
    u, d, _ = smith_normal_form(at)
    diag = snf_diagonal(d)
    rank = sum(1 for x in diag if x != 0)
    torsion_rows = [i for i, x in enumerate(diag) if x > 1]
    free_rows = list(range(rank, nunk))
    torsion_group = FiniteAbelianGroup(tuple(diag[i] for i in torsion_rows))

    def image(j: int) -> tuple[GroupElement, tuple[int, ...]]:
        tors = torsion_group.element([u[i][j] for i in torsion_rows])
        free = tuple(u[i][j] for i in free_rows)
        return tors, free

    maps = []
    free_maps = []
    for pos in range(3):
        col_t = [torsion_group.identity()]
        col_f: list[tuple[int, ...]] = [(0,) * len(free_rows)]
        for sym in range(1, rel.sizes[pos]):
            t, f = image(idx[(pos, sym)])
            col_t.append(t)
            col_f.append(f)
        maps.append(tuple(col_t))
        free_maps.append(tuple(col_f))
    g_t, g_f = image(nunk - 1)

    emb = UniversalEmbedding(
        relation=rel,
        torsion_group=torsion_group,
        maps=(maps[0], maps[1], maps[2]),
        g=g_t,
        free_rank=len(free_rows),
        free_maps=(free_maps[0], free_maps[1], free_maps[2]),
        free_g=g_f,
    )
    assert emb.check_identity()
    return emb


def has_z_embedding(rel: Relation3) -> bool:
    """True iff some not-all-constant integer-valued embedding exists."""
    return universal_embedding(rel).free_rank > 0


def z_embedding_witness(rel: Relation3) -> tuple[list[list[int]], int] | None:
    """A concrete integer embedding (maps, g) with some map non-constant, or None."""
    emb = universal_embedding(rel)
    if emb.free_rank == 0:
        return None
    for k in range(emb.free_rank):
        if any(any(vec[k] for vec in emb.free_maps[pos]) for pos in range(3)):
            maps = [[vec[k] for vec in emb.free_maps[pos]] for pos in range(3)]
            return maps, emb.free_g[k]
    raise AssertionError("free coordinate with all-zero symbol images")


def is_pairwise_connected(rel: Relation3) -> bool:
    """Each of the three projection bipartite graphs, restricted to occurring
    symbols, is connected."""
    if rel.is_empty:
        raise ValueError("relation is empty")
    for (p, q) in ((0, 1), (0, 2), (1, 2)):
        edges = {(t[p], t[q]) for t in rel.tuples}
        left = {a for a, _ in edges}
        right = {b for _, b in edges}
        parent: dict[tuple[int, int], tuple[int, int]] = {}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a in left:
            parent[("L", a)] = ("L", a)  # type: ignore[assignment]
        for b in right:
            parent[("R", b)] = ("R", b)  # type: ignore[assignment]
        for a, b in edges:
            ra, rb = find(("L", a)), find(("R", b))
            if ra != rb:
                parent[ra] = rb
        roots = {find(("L", a)) for a in left} | {find(("R", b)) for b in right}
        if len(roots) > 1:
            return False
    return True


def find_preserving_actions(
    predicates: list[frozenset[tuple[int, int, int]]], q: int, budget: int = 10**7
) -> list[tuple[int, ...]]:
    """All maps tau: Sigma -> Sigma sending satisfying triples of every
    predicate to satisfying triples, in lexicographic order."""
    if q**q > budget:
        raise ValueError(f"search space {q}^{q} exceeds budget {budget}")
    out = []
    for tau in iproduct(range(q), repeat=q):
        ok = True
        for sat in predicates:
            for (a, b, c) in sat:
                if (tau[a], tau[b], tau[c]) not in sat:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(tau)
    return out


def check_mildly_symmetric(
    predicates: list[frozenset[tuple[int, int, int]]],
    actions: list[tuple[int, ...]],
    q: int,
) -> bool:
    """Actions must preserve every predicate's satisfying set, and the orbit of
    each satisfying triple under the actions must admit no integer embedding."""
    if not actions:
        raise ValueError("need at least one action")
    for sat in predicates:
        for tau in actions:
            for (a, b, c) in sat:
                if (tau[a], tau[b], tau[c]) not in sat:
                    return False
    for sat in predicates:
        for (a, b, c) in sat:
            orbit = frozenset((tau[a], tau[b], tau[c]) for tau in actions)
            if has_z_embedding(Relation3((q, q, q), orbit)):
                return False
    return True
