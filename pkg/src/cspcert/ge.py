"""Linear equation systems over finite Abelian groups built from the supports
of an SDP solution's local distributions.

Per variable v, one Abelian group G_v ("master group") is assembled by
concatenating the torsion groups of the universal embeddings of the supports
of all constraints v participates in; r_v[symbol] records the image of each
alphabet symbol across those blocks, and H*_v is the subgroup the r's
generate.  The system's unknown for v is a single group-valued Y_v in H*_v:
its character tuple (chi(Y_v))_{chi} is exactly an assignment of the
one-variable-per-character formulation satisfying the triviality,
multiplicativity and constant-column constraints, so the two representations
have identical solution sets (audited in tests by enumerating both).

Equations come in two shapes: per-constraint group equations
pi_C(Y_{s1}) + pi_C(Y_{s2}) + pi_C(Y_{s3}) = g_C in the constraint's torsion
block, and appended character-triple equations chi1(Y)chi2(Y)chi3(Y) = 1.
Both become integer congruences in the generator coefficients of the Y's and
are solved exactly by Smith normal form; the solution set is a coset
(particular point + subgroup of prod_v H*_v).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from math import lcm
from typing import Optional, Sequence

import numpy as np

from .csp import Instance, Triple
from .embedding import Relation3, UniversalEmbedding, universal_embedding
from .groups import (
    Character,
    FiniteAbelianGroup,
    GroupElement,
    RootOfUnity,
    Subgroup,
    char_eval,
    smith_normal_form,
    snf_diagonal,
    subgroup_from_generators,
)
from .sdp import DEFAULT_TAU_SUPP, SdpSolution

ENUM_BUDGET = 10**5


class ZEmbeddingError(ValueError):
    def __init__(self, constraint: int, witness):
        super().__init__(f"support of constraint {constraint} admits an integer embedding")
        self.constraint = constraint
        self.witness = witness


@dataclass(frozen=True)
class BlockInfo:
    constraint: int
    start: int
    length: int


@dataclass
class MasterGroupData:
    instance: Instance
    supports: tuple[frozenset[Triple], ...]
    embeddings: tuple[Optional[UniversalEmbedding], ...]  # per constraint
    master: list[FiniteAbelianGroup]  # per variable
    r: list[list[GroupElement]]  # per variable, per symbol
    h_star: list[Subgroup]  # per variable
    blocks: list[list[BlockInfo]]  # per variable

    def block_of(self, v: int, k: int) -> BlockInfo:
        for b in self.blocks[v]:
            if b.constraint == k:
                return b
        raise KeyError(f"variable {v} has no block for constraint {k}")

    def sigma(self, v: int, a: int) -> GroupElement:
        return self.r[v][a]


def support_relation(q: int, supp: frozenset[Triple]) -> Relation3:
    return Relation3((q, q, q), supp)


def build_master_groups(
    inst: Instance, sdp: SdpSolution, tau_supp: float = DEFAULT_TAU_SUPP
) -> MasterGroupData:
    """Attach the universal torsion embedding of each constraint's support and
    concatenate per variable.  Raises ZEmbeddingError if some support admits an
    integer embedding (callers check connectivity upstream)."""
    q = inst.q
    supports = tuple(sdp.support(k, tau_supp) for k in range(len(inst.constraints)))
    embeddings: list[Optional[UniversalEmbedding]] = []
    for k, supp in enumerate(supports):
        if not supp:
            raise ValueError(f"constraint {k} has empty support after thresholding")
        rel = support_relation(q, supp)
        emb = universal_embedding(rel)
        if emb.free_rank > 0:
            from .embedding import z_embedding_witness

            raise ZEmbeddingError(k, z_embedding_witness(rel))
        embeddings.append(emb)
    master: list[FiniteAbelianGroup] = []
    r: list[list[GroupElement]] = []
    blocks: list[list[BlockInfo]] = []
    for v in range(inst.num_vars):
        orders: tuple[int, ...] = ()
        binfo: list[BlockInfo] = []
        for k in inst.constraints_of(v):
            emb = embeddings[k]
            blk = emb.torsion_group.cyclic_orders
            binfo.append(BlockInfo(k, len(orders), len(blk)))
            orders += blk
        grp = FiniteAbelianGroup(orders)
        rv = []
        for a in range(q):
            coords: tuple[int, ...] = ()
            for k in inst.constraints_of(v):
                emb = embeddings[k]
                pos = inst.constraints[k].vars.index(v)
                coords += emb.maps[pos][a].coords
            rv.append(grp.element(coords))
        master.append(grp)
        r.append(rv)
        blocks.append(binfo)
    h_star = [
        subgroup_from_generators(master[v], [e for e in r[v] if not e.is_identity])
        for v in range(inst.num_vars)
    ]
    return MasterGroupData(inst, supports, tuple(embeddings), master, r, h_star, blocks)


# ---------------------------------------------------------------------------
# The character matrix of a variable (testing artifact)
# ---------------------------------------------------------------------------


def materialize_mv(data: MasterGroupData, v: int) -> tuple[list[GroupElement], list[np.ndarray]]:
    """Rows: the q symbol images r_v[0..q-1] followed by the remaining elements
    of H*_v; columns: the per-block character columns closed under pointwise
    products, deduplicated by evaluation vector (the constant-1 column first).
    Returns (row_elements, columns of complex values)."""
    q = data.instance.q
    rows = list(data.r[v])
    seen = {e for e in rows}
    for e in data.h_star[v].elements:
        if e not in seen:
            rows.append(e)
            seen.add(e)

    grp = data.master[v]
    base_chars: list[Character] = []
    for binfo in data.blocks[v]:
        emb = data.embeddings[binfo.constraint]
        for chi in emb.torsion_group.characters():
            if chi.is_trivial:
                continue
            exps = [0] * len(grp.cyclic_orders)
            exps[binfo.start : binfo.start + binfo.length] = list(chi.exponents)
            base_chars.append(grp.character(exps))

    def col_key(chi: Character) -> tuple:
        return tuple(char_eval(chi, e) for e in rows)

    cols: dict[tuple, Character] = {}
    triv = grp.character([0] * len(grp.cyclic_orders))
    cols[col_key(triv)] = triv
    for chi in base_chars:
        cols.setdefault(col_key(chi), chi)
    # close under pointwise products (products of block characters)
    changed = True
    while changed:
        changed = False
        current = list(cols.values())
        for c1 in current:
            for c2 in base_chars:
                prod = c1 * c2
                key = col_key(prod)
                if key not in cols:
                    cols[key] = prod
                    changed = True
    out_cols = [np.array([r.to_complex() for r in key]) for key in cols.keys()]
    return rows, out_cols


# ---------------------------------------------------------------------------
# System and solving
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GroupEquation:
    """pi(Y_{s1}) + pi(Y_{s2}) + pi(Y_{s3}) = target in the torsion block of
    one constraint."""

    constraint: int
    vars: Triple
    target: GroupElement


@dataclass(frozen=True)
class CharacterEquation:
    """chi1(Y_{s1}) * chi2(Y_{s2}) * chi3(Y_{s3}) = target phase."""

    vars: Triple
    chars: tuple[Character, Character, Character]
    target: RootOfUnity


@dataclass(frozen=True)
class ModLogEntry:
    """Replayable record: the span of the r-images of these support tuples had
    its annihilator triples appended for this constraint."""

    constraint: int
    tuples: tuple[Triple, ...]


@dataclass
class GeSystem:
    data: MasterGroupData
    group_equations: list[GroupEquation]
    char_equations: list[CharacterEquation] = field(default_factory=list)
    mod_log: list[ModLogEntry] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "h_star_orders": [s.order for s in self.data.h_star],
            "group_equations": [
                {"constraint": e.constraint, "vars": list(e.vars), "target": list(e.target.coords)}
                for e in self.group_equations
            ],
            "char_equations": [
                {
                    "vars": list(e.vars),
                    "exponents": [list(c.exponents) for c in e.chars],
                    "target": [e.target.num, e.target.den],
                }
                for e in self.char_equations
            ],
            "mod_log": [
                {"constraint": e.constraint, "tuples": [list(t) for t in e.tuples]}
                for e in self.mod_log
            ],
        }


def build_system(
    inst: Instance,
    sdp: SdpSolution,
    data: Optional[MasterGroupData] = None,
    mod_log: Sequence[ModLogEntry] = (),
    tau_supp: float = DEFAULT_TAU_SUPP,
) -> GeSystem:
    """One group equation per constraint with nontrivial torsion; previously
    logged modifications are replayed against the current master groups."""
    if data is None:
        data = build_master_groups(inst, sdp, tau_supp)
    eqs = []
    for k, c in enumerate(inst.constraints):
        emb = data.embeddings[k]
        if emb.torsion_group.is_trivial:
            continue
        eqs.append(GroupEquation(k, c.vars, emb.g))
    system = GeSystem(data, eqs)
    for entry in mod_log:
        _apply_mod_entry(system, entry)
        system.mod_log.append(entry)
    return system


@dataclass
class SolutionSpace:
    """Either empty, or the coset particular + <generators> in prod_v H*_v."""

    data: MasterGroupData
    empty: bool
    particular: Optional[tuple[GroupElement, ...]] = None
    generators: tuple[tuple[GroupElement, ...], ...] = ()
    _enumeration: Optional[list[tuple[GroupElement, ...]]] = field(default=None, repr=False)

    def total_h_order(self) -> int:
        return math.prod(s.order for s in self.data.h_star)

    def enumerate(self, budget: int = ENUM_BUDGET) -> list[tuple[GroupElement, ...]]:
        if self.empty:
            raise ValueError("solution space is empty")
        if self._enumeration is not None:
            return self._enumeration
        if self.total_h_order() > budget:
            raise ValueError("solution space too large to enumerate")
        subgroup = _tuple_closure(self.generators, self.particular, budget)
        self._enumeration = subgroup
        return subgroup

    def __contains__(self, point: tuple[GroupElement, ...]) -> bool:
        return point in set(self.enumerate())

    def size(self) -> int:
        return len(self.enumerate())

    def to_json(self) -> dict:
        if self.empty:
            return {"empty": True}
        return {
            "empty": False,
            "particular": [list(e.coords) for e in self.particular],
            "generators": [[list(e.coords) for e in g] for g in self.generators],
        }


def _tuple_add(a: tuple[GroupElement, ...], b: tuple[GroupElement, ...]) -> tuple[GroupElement, ...]:
    return tuple(x + y for x, y in zip(a, b))


def _tuple_closure(
    gens: Sequence[tuple[GroupElement, ...]],
    base: tuple[GroupElement, ...],
    budget: int,
) -> list[tuple[GroupElement, ...]]:
    def key(t):
        return tuple(e.coords for e in t)

    seen = {key(base): base}
    frontier = [base]
    while frontier:
        cur = frontier.pop()
        for g in gens:
            nxt = _tuple_add(cur, g)
            k = key(nxt)
            if k not in seen:
                if len(seen) >= budget:
                    raise ValueError("closure exceeds enumeration budget")
                seen[k] = nxt
                frontier.append(nxt)
    return [seen[k] for k in sorted(seen)]


def _generator_lists(data: MasterGroupData) -> tuple[list[tuple[int, GroupElement]], list[int]]:
    """Flattened (variable, generator) unknowns and each generator's order."""
    unknowns: list[tuple[int, GroupElement]] = []
    orders: list[int] = []
    for v in range(data.instance.num_vars):
        for g in data.h_star[v].generators:
            unknowns.append((v, g))
            orders.append(g.element_order())
    return unknowns, orders


def solve_system(system: GeSystem) -> SolutionSpace:
    """Parametrize Y_v by integer coefficients over H*_v generators, turn every
    equation into integer congruences, and solve by Smith normal form."""
    data = system.data
    unknowns, _ = _generator_lists(data)
    nunk = len(unknowns)

    rows: list[list[int]] = []
    rhs: list[int] = []
    mods: list[int] = []

    for eq in system.group_equations:
        emb = data.embeddings[eq.constraint]
        block_orders = emb.torsion_group.cyclic_orders
        for m_idx, n_m in enumerate(block_orders):
            row = [0] * nunk
            for u_idx, (v, gen) in enumerate(unknowns):
                if v in eq.vars:
                    blk = data.block_of(v, eq.constraint)
                    coef = gen.coords[blk.start + m_idx]
                    # a variable occurs once per constraint (distinct indices)
                    row[u_idx] += coef * sum(1 for w in eq.vars if w == v)
            rows.append(row)
            rhs.append(eq.target.coords[m_idx])
            mods.append(n_m)

    for eq in system.char_equations:
        phases: list[RootOfUnity] = []
        for u_idx, (v, gen) in enumerate(unknowns):
            if v in eq.vars:
                p = RootOfUnity.one()
                for pos, w in enumerate(eq.vars):
                    if w == v:
                        p = p * char_eval(eq.chars[pos], gen)
                phases.append(p)
            else:
                phases.append(RootOfUnity.one())
        L = lcm(eq.target.den, *(p.den for p in phases))
        row = [p.num * (L // p.den) for p in phases]
        rows.append(row)
        rhs.append(eq.target.num * (L // eq.target.den))
        mods.append(L)

    if not rows:
        particular = tuple(data.master[v].identity() for v in range(data.instance.num_vars))
        gens = _unknown_generators(data, unknowns)
        return SolutionSpace(data, False, particular, gens)

    # integer system [A | diag(mods)] x = rhs
    ncols = nunk + len(rows)
    full = [row + [mods[i] if j == i else 0 for j in range(len(rows))] for i, row in enumerate(rows)]
    u, d, v_mat = smith_normal_form(full)
    diag = snf_diagonal(d)
    rank = sum(1 for x in diag if x != 0)
    uc = [sum(u[i][j] * rhs[j] for j in range(len(rhs))) for i in range(len(rhs))]
    y = [0] * ncols
    for i in range(len(rhs)):
        if i < rank:
            if uc[i] % diag[i] != 0:
                return SolutionSpace(data, True)
            y[i] = uc[i] // diag[i]
        elif uc[i] != 0:
            return SolutionSpace(data, True)
    x_part = [sum(v_mat[i][j] * y[j] for j in range(ncols)) for i in range(ncols)]
    hom = [[v_mat[i][j] for i in range(ncols)] for j in range(rank, ncols)]

    particular = _lambda_to_point(data, unknowns, x_part[:nunk])
    gen_points = []
    seen_keys = set()
    for h in hom:
        pt = _lambda_to_point(data, unknowns, h[:nunk])
        k = tuple(e.coords for e in pt)
        if any(not e.is_identity for e in pt) and k not in seen_keys:
            seen_keys.add(k)
            gen_points.append(pt)
    return SolutionSpace(data, False, particular, tuple(gen_points))


def _unknown_generators(data: MasterGroupData, unknowns) -> tuple[tuple[GroupElement, ...], ...]:
    gens = []
    for u_idx, (v, gen) in enumerate(unknowns):
        pt = tuple(
            gen if w == v else data.master[w].identity() for w in range(data.instance.num_vars)
        )
        gens.append(pt)
    return tuple(gens)


def _lambda_to_point(
    data: MasterGroupData,
    unknowns: list[tuple[int, GroupElement]],
    lam: list[int],
) -> tuple[GroupElement, ...]:
    out = [data.master[v].identity() for v in range(data.instance.num_vars)]
    for coef, (v, gen) in zip(lam, unknowns):
        if coef:
            out[v] = out[v] + gen.scale(coef)
    return tuple(out)


def restrict(space: SolutionSpace, k: int) -> frozenset[tuple[GroupElement, GroupElement, GroupElement]]:
    """Image of the solution set under projection to constraint k's variables."""
    if space.empty:
        raise ValueError("solution space is empty")
    s1, s2, s3 = space.data.instance.constraints[k].vars
    base = (space.particular[s1], space.particular[s2], space.particular[s3])
    gens = [(g[s1], g[s2], g[s3]) for g in space.generators]
    gens = [g for g in gens if any(not e.is_identity for e in g)]
    pts = _tuple_closure(gens, base, ENUM_BUDGET)
    return frozenset(pts)


def span_support(
    data: MasterGroupData, k: int, supp: Optional[frozenset[Triple]] = None
) -> Subgroup:
    """Subgroup of the product of the three master groups generated by the
    r-images of the support tuples."""
    if supp is None:
        supp = data.supports[k]
    if not supp:
        raise ValueError("empty support")
    s1, s2, s3 = data.instance.constraints[k].vars
    from .groups import direct_product

    prod = direct_product(data.master[s1], data.master[s2], data.master[s3])
    gens = []
    for (a, b, c) in sorted(supp):
        coords = data.r[s1][a].coords + data.r[s2][b].coords + data.r[s3][c].coords
        g = prod.element(coords)
        if not g.is_identity:
            gens.append(g)
    return subgroup_from_generators(prod, gens)


def triple_to_product_element(
    data: MasterGroupData, k: int, t: tuple[GroupElement, GroupElement, GroupElement]
) -> GroupElement:
    from .groups import direct_product

    s1, s2, s3 = data.instance.constraints[k].vars
    prod = direct_product(data.master[s1], data.master[s2], data.master[s3])
    return prod.element(t[0].coords + t[1].coords + t[2].coords)


def r_image(data: MasterGroupData, k: int, t: Triple) -> tuple[GroupElement, GroupElement, GroupElement]:
    s1, s2, s3 = data.instance.constraints[k].vars
    return (data.r[s1][t[0]], data.r[s2][t[1]], data.r[s3][t[2]])


def sample_solution(
    space: SolutionSpace, rng: np.random.Generator
) -> tuple[GroupElement, ...]:
    """Exactly uniform over the coset: uniform independent coefficients modulo
    each generator's order push forward to the uniform distribution on the
    generated subgroup (the coefficient map is a surjective homomorphism from a
    product of cyclic groups, so its fibers are equal-size cosets of its
    kernel)."""
    if space.empty:
        raise ValueError("solution space is empty")
    out = list(space.particular)
    for g in space.generators:
        order = lcm(*(e.element_order() for e in g))
        coef = int(rng.integers(order))
        if coef:
            out = [x + e.scale(coef) for x, e in zip(out, g)]
    return tuple(out)


def _apply_mod_entry(system: GeSystem, entry: ModLogEntry) -> int:
    """Append the annihilator character triples of span(r-images of
    entry.tuples) for entry's constraint.  Returns how many were appended."""
    from .groups import annihilator

    data = system.data
    k = entry.constraint
    s1, s2, s3 = data.instance.constraints[k].vars
    span = span_support(data, k, frozenset(entry.tuples))
    anns = annihilator(span)
    lens = (
        len(data.master[s1].cyclic_orders),
        len(data.master[s2].cyclic_orders),
        len(data.master[s3].cyclic_orders),
    )
    appended = 0
    existing = set(
        (e.vars, tuple(c.exponents for c in e.chars), e.target) for e in system.char_equations
    )
    for chi in anns:
        e1 = chi.exponents[: lens[0]]
        e2 = chi.exponents[lens[0] : lens[0] + lens[1]]
        e3 = chi.exponents[lens[0] + lens[1] :]
        chars = (
            data.master[s1].character(e1),
            data.master[s2].character(e2),
            data.master[s3].character(e3),
        )
        if all(c.is_trivial for c in chars):
            continue
        key = ((s1, s2, s3), tuple(c.exponents for c in chars), RootOfUnity.one())
        if key in existing:
            continue
        system.char_equations.append(
            CharacterEquation((s1, s2, s3), chars, RootOfUnity.one())
        )
        existing.add(key)
        appended += 1
    return appended
