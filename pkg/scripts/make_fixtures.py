"""Regenerate the bundled instance/relation fixtures under fixtures/."""

from __future__ import annotations

import json
import sys
from itertools import product
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from cspcert.csp import (
    Predicate3,
    all_distinct_predicate,
    parity_predicate,
    serialize_instance,
    uniform_instance,
)
from cspcert.embedding import Relation3

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"


def write(name: str, text: str) -> None:
    path = FIXTURES / name
    path.write_text(text if text.endswith("\n") else text + "\n")
    print(f"wrote {path}")


def main() -> None:
    FIXTURES.mkdir(exist_ok=True)
    p0 = parity_predicate(2, 0)
    p1 = parity_predicate(2, 1)
    dis5 = all_distinct_predicate(5)
    dis3 = all_distinct_predicate(3)

    write(
        "strong_coloring_f5.json",
        serialize_instance(uniform_instance(5, 4, [((0, 1, 2), dis5), ((1, 2, 3), dis5)])),
    )
    write("threelin_f2_single.json", serialize_instance(uniform_instance(2, 3, [((0, 1, 2), p0)])))
    write(
        "threelin_f2_chain.json",
        serialize_instance(uniform_instance(2, 5, [((0, 1, 2), p0), ((2, 3, 4), p0)])),
    )
    write(
        "contradictory_pair_f2.json",
        serialize_instance(uniform_instance(2, 3, [((0, 1, 2), p0), ((0, 1, 2), p1)])),
    )
    write(
        "disconnected_support.json",
        serialize_instance(
            uniform_instance(2, 3, [((0, 1, 2), Predicate3(2, frozenset({(0, 0, 0), (1, 1, 1)})))])
        ),
    )
    write("rainbow_f3_instance.json", serialize_instance(uniform_instance(3, 3, [((0, 1, 2), dis3)])))

    # relation files for analyze-predicate
    rainbow = Relation3(
        (3, 3, 3),
        frozenset(t for t in product(range(3), repeat=3) if len(set(t)) == 3),
    )
    write("rainbow_f3.relation.json", json.dumps(rainbow.to_json(), indent=2))
    distinct5 = Relation3(
        (5, 5, 5),
        frozenset(t for t in product(range(5), repeat=5 and 3) if len(set(t)) == 3),
    )
    write("strong_coloring_f5.relation.json", json.dumps(distinct5.to_json(), indent=2))
    orbit = Relation3(
        (5, 5, 5),
        frozenset((b % 5, (a + b) % 5, (a * 2 + b) % 5) for a in range(1, 5) for b in range(5)),
    )
    write("affine_orbit_f5.relation.json", json.dumps(orbit.to_json(), indent=2))
    threelin = Relation3(
        (2, 2, 2),
        frozenset(t for t in product(range(2), repeat=3) if sum(t) % 2 == 0),
    )
    write("threelin_f2.relation.json", json.dumps(threelin.to_json(), indent=2))

    # a dictator table for the CLI demos (q=2, R=4, coordinate 1)
    table = [z[1] + 1 for z in product(range(2), repeat=4)]
    write("dictator_q2_R4.function.json", json.dumps({"R": 4, "table": table}, indent=2))
    table5 = [z[0] + 1 for z in product(range(5), repeat=2)]
    write("dictator_q5_R2.function.json", json.dumps({"R": 2, "table": table5}, indent=2))


if __name__ == "__main__":
    main()
