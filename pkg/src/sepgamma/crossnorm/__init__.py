"""Bounds on the greatest cross norm and the separability certificate built on them."""

from .certify import certify, entanglement_measure, lower_bounds
from .decomposition import (
    ElementaryDecomposition,
    concat,
    decomposition_cost,
    from_schmidt,
    from_separable,
    pure_state_decomposition,
    reconstruct,
)
from .lower import (
    lower_bound_realignment,
    lower_bound_witness,
    realignment_witness,
    witness_value,
)
from .positivize import positivize, refine_separable
from .search import SeedMismatch, upper_bound_search
from .types import (
    Certificate,
    GammaBounds,
    SearchConfig,
    UpperBound,
    Verdict,
    WitnessResult,
)

__all__ = [
    "Certificate",
    "ElementaryDecomposition",
    "GammaBounds",
    "SearchConfig",
    "SeedMismatch",
    "UpperBound",
    "Verdict",
    "WitnessResult",
    "certify",
    "concat",
    "decomposition_cost",
    "entanglement_measure",
    "from_schmidt",
    "from_separable",
    "lower_bound_realignment",
    "lower_bound_witness",
    "lower_bounds",
    "positivize",
    "pure_state_decomposition",
    "realignment_witness",
    "reconstruct",
    "refine_separable",
    "upper_bound_search",
    "witness_value",
]
