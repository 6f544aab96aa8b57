"""Exact zero-sum invariants of finite abelian groups.

Compute s_L(G) (Davenport constant, EGZ constant, eta invariant, zero-sum
constant, and the congruence variants s_{dN}) by exact search, evaluate every
closed formula and bound the theory provides, construct and certify extremal
witnesses, and cross-verify all three against each other.
"""

from __future__ import annotations

from .engine import Budget, SearchOutcome, kernel_name, max_extremal
from .errors import (
    BudgetExceeded,
    ExtractionFailed,
    HypothesisUnmet,
    InfiniteInvariant,
    ZsinvError,
)
from .groups import (
    GroupElement,
    GroupSpec,
    canonicalize,
    cyclic,
    direct_sum,
    p_component,
    parse_group,
    reduction_hom,
)
from .reach import (
    ReachTable,
    has_forbidden_subsequence,
    is_minimal_zero_sum,
    is_zero_sum_free,
    reach_incorporate,
)
from .sequences import (
    LengthSet,
    Sequence,
    apply_hom,
    canonical_extensions,
    count_zero_sum_subsequences,
    parse_length_set,
    parse_sequence,
)

__version__ = "0.1.0"

__all__ = [
    "Budget",
    "BudgetExceeded",
    "ExtractionFailed",
    "GroupElement",
    "GroupSpec",
    "HypothesisUnmet",
    "InfiniteInvariant",
    "LengthSet",
    "ReachTable",
    "SearchOutcome",
    "Sequence",
    "ZsinvError",
    "apply_hom",
    "canonical_extensions",
    "canonicalize",
    "count_zero_sum_subsequences",
    "cyclic",
    "direct_sum",
    "has_forbidden_subsequence",
    "is_minimal_zero_sum",
    "is_zero_sum_free",
    "kernel_name",
    "max_extremal",
    "p_component",
    "parse_group",
    "parse_length_set",
    "parse_sequence",
    "reach_incorporate",
    "reduction_hom",
]
