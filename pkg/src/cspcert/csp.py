"""Weighted 3-ary CSP instances: model, JSON format, brute-force oracles.

Symbols and variable indices are 0-based internally; the JSON interchange
format is 1-based for both.  Weights are exact rationals in the model and are
only converted to floats inside the SDP solver.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iproduct
from typing import Iterator, Sequence

Assignment = tuple[int, ...]
Triple = tuple[int, int, int]


class InstanceFormatError(ValueError):
    """Raised on schema violations, with a field path in the message."""


@dataclass(frozen=True)
class Predicate3:
    q: int
    satisfying: frozenset[Triple]

    def __post_init__(self) -> None:
        for t in self.satisfying:
            if not all(0 <= x < self.q for x in t):
                raise ValueError(f"satisfying tuple {t} outside alphabet of size {self.q}")

    def holds(self, a: int, b: int, c: int) -> bool:
        return (a, b, c) in self.satisfying

    def sorted_tuples(self) -> list[Triple]:
        return sorted(self.satisfying)


@dataclass(frozen=True)
class Constraint:
    vars: Triple
    predicate: Predicate3
    weight: Fraction


@dataclass(frozen=True)
class Instance:
    q: int
    num_vars: int
    constraints: tuple[Constraint, ...]

    def __post_init__(self) -> None:
        if sum(c.weight for c in self.constraints) != 1:
            raise ValueError("constraint weights must sum to 1")
        used = set()
        for k, c in enumerate(self.constraints):
            if len(set(c.vars)) != 3:
                raise ValueError(f"constraint {k} repeats a variable")
            if not all(0 <= v < self.num_vars for v in c.vars):
                raise ValueError(f"constraint {k} references a variable out of range")
            if c.weight <= 0:
                raise ValueError(f"constraint {k} has non-positive weight")
            if c.predicate.q != self.q:
                raise ValueError(f"constraint {k} predicate alphabet mismatch")
            used.update(c.vars)
        if used != set(range(self.num_vars)):
            raise ValueError("every variable must occur in at least one constraint")

    def constraints_of(self, v: int) -> list[int]:
        return [k for k, c in enumerate(self.constraints) if v in c.vars]


def value(inst: Instance, a: Assignment) -> Fraction:
    """Weighted fraction of satisfied constraints, exact."""
    if len(a) != inst.num_vars:
        raise ValueError("assignment length mismatch")
    total = Fraction(0)
    for c in inst.constraints:
        s1, s2, s3 = c.vars
        if c.predicate.holds(a[s1], a[s2], a[s3]):
            total += c.weight
    return total


def _assignments(inst: Instance) -> Iterator[Assignment]:
    yield from iproduct(range(inst.q), repeat=inst.num_vars)


def _check_budget(inst: Instance, budget: int) -> None:
    if inst.q**inst.num_vars > budget:
        raise ValueError(
            f"enumeration size {inst.q}^{inst.num_vars} exceeds budget {budget}"
        )


def opt_bruteforce(inst: Instance, budget: int = 10**7) -> tuple[Fraction, Assignment]:
    """Maximum value and the lexicographically-first maximizer."""
    _check_budget(inst, budget)
    best_val = Fraction(-1)
    best: Assignment = ()
    for a in _assignments(inst):
        v = value(inst, a)
        if v > best_val:
            best_val, best = v, a
    return best_val, best


def enumerate_satisfying(inst: Instance, budget: int = 10**7) -> list[Assignment]:
    """All assignments of value exactly 1, lexicographic."""
    _check_budget(inst, budget)
    return [a for a in _assignments(inst) if value(inst, a) == 1]


# ---------------------------------------------------------------------------
# JSON format
# ---------------------------------------------------------------------------
#
# {"sigma": q, "num_vars": N,
#  "constraints": [{"vars": [s1, s2, s3],            # 1-based
#                   "satisfying": [[a, b, c], ...],  # 1-based symbols
#                   "weight": "p/q"}, ...]}


def _parse_weight(w, where: str) -> Fraction:
    try:
        if isinstance(w, str):
            return Fraction(w)
        if isinstance(w, int):
            return Fraction(w)
        if isinstance(w, float):
            return Fraction(w).limit_denominator(10**12)
    except (ValueError, ZeroDivisionError) as e:
        raise InstanceFormatError(f"{where}: bad weight {w!r}: {e}") from None
    raise InstanceFormatError(f"{where}: weight must be a string fraction or number")


def parse_instance(text: str) -> Instance:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise InstanceFormatError(f"invalid JSON at line {e.lineno}: {e.msg}") from None
    for key in ("sigma", "num_vars", "constraints"):
        if key not in obj:
            raise InstanceFormatError(f"missing top-level field {key!r}")
    q = int(obj["sigma"])
    n = int(obj["num_vars"])
    if q < 1 or n < 1:
        raise InstanceFormatError("sigma and num_vars must be positive")
    constraints = []
    weights = []
    for k, cobj in enumerate(obj["constraints"]):
        where = f"constraints[{k}]"
        for key in ("vars", "satisfying", "weight"):
            if key not in cobj:
                raise InstanceFormatError(f"{where}: missing field {key!r}")
        raw_vars = cobj["vars"]
        if len(raw_vars) != 3:
            raise InstanceFormatError(f"{where}.vars: need exactly 3 variables")
        vars3 = tuple(int(v) - 1 for v in raw_vars)
        if len(set(vars3)) != 3:
            raise InstanceFormatError(f"{where}.vars: repeated variable")
        if not all(0 <= v < n for v in vars3):
            raise InstanceFormatError(f"{where}.vars: index out of range 1..{n}")
        sat = set()
        for t in cobj["satisfying"]:
            if len(t) != 3 or not all(1 <= int(x) <= q for x in t):
                raise InstanceFormatError(f"{where}.satisfying: bad tuple {t}")
            sat.add((int(t[0]) - 1, int(t[1]) - 1, int(t[2]) - 1))
        if not sat:
            raise InstanceFormatError(f"{where}.satisfying: empty")
        weights.append(_parse_weight(cobj["weight"], f"{where}.weight"))
        constraints.append((vars3, frozenset(sat)))
    total = sum(weights, Fraction(0))
    if abs(float(total) - 1.0) > 1e-12:
        raise InstanceFormatError(f"weights sum to {float(total)}, expected 1 within 1e-12")
    weights = [w / total for w in weights]  # normalize exactly
    return Instance(
        q=q,
        num_vars=n,
        constraints=tuple(
            Constraint(vars=v, predicate=Predicate3(q, sat), weight=w)
            for (v, sat), w in zip(constraints, weights)
        ),
    )


def serialize_instance(inst: Instance) -> str:
    obj = {
        "sigma": inst.q,
        "num_vars": inst.num_vars,
        "constraints": [
            {
                "vars": [v + 1 for v in c.vars],
                "satisfying": [[a + 1, b + 1, c3 + 1] for a, b, c3 in c.predicate.sorted_tuples()],
                "weight": f"{c.weight.numerator}/{c.weight.denominator}",
            }
            for c in inst.constraints
        ],
    }
    return json.dumps(obj, indent=2, sort_keys=True)


# ---------------------------------------------------------------------------
# Common predicates for fixtures and tests
# ---------------------------------------------------------------------------


def parity_predicate(q: int, target: int) -> Predicate3:
    """x + y + z = target over Z_q."""
    sat = frozenset(
        (a, b, c)
        for a, b, c in iproduct(range(q), repeat=3)
        if (a + b + c) % q == target
    )
    return Predicate3(q, sat)


def all_distinct_predicate(q: int) -> Predicate3:
    sat = frozenset(
        (a, b, c) for a, b, c in iproduct(range(q), repeat=3) if len({a, b, c}) == 3
    )
    return Predicate3(q, sat)


def uniform_instance(q: int, num_vars: int, cons: Sequence[tuple[Triple, Predicate3]]) -> Instance:
    w = Fraction(1, len(cons))
    return Instance(
        q=q,
        num_vars=num_vars,
        constraints=tuple(Constraint(vars=v, predicate=p, weight=w) for v, p in cons),
    )
