"""Certification of satisfiable 3-ary CSPs by a hybrid of a vector relaxation
and exact linear algebra over finite Abelian groups, plus a desk-scale
dictatorship-test and rounding-scheme laboratory."""

from .config import RunConfig
from .csp import (
    Assignment,
    Constraint,
    Instance,
    Predicate3,
    all_distinct_predicate,
    enumerate_satisfying,
    opt_bruteforce,
    parity_predicate,
    parse_instance,
    serialize_instance,
    uniform_instance,
    value,
)
from .embedding import (
    Relation3,
    UniversalEmbedding,
    check_mildly_symmetric,
    find_preserving_actions,
    has_z_embedding,
    is_pairwise_connected,
    universal_embedding,
    z_embedding_witness,
)
from .groups import (
    Character,
    FiniteAbelianGroup,
    GroupElement,
    RootOfUnity,
    Subgroup,
    annihilator,
    char_eval,
    smith_normal_form,
    subgroup_from_generators,
)
from .hybrid import HybridConfig, RejectReason, Verdict, run_hybrid
from .sdp import (
    Infeasible,
    SdpFormulation,
    SdpSolution,
    build_formulation,
    combine,
    dimension_reduce,
    integral_solution,
    preserve_all_integral,
    solve_value1,
)

__all__ = [name for name in dir() if not name.startswith("_")]
