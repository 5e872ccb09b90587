"""Separability of bipartite density operators via the greatest cross norm."""

__version__ = "0.1.0"

from .operator_core import BipartiteDims  # noqa: E402
from .states import (  # noqa: E402
    DensityOperator,
    RandomSpec,
    SeparableDecomposition,
    bell,
    from_matrix,
    max_entangled,
    pure_density,
    random_state,
    separable_mixture,
    werner,
)
from .crossnorm import (  # noqa: E402
    Certificate,
    ElementaryDecomposition,
    GammaBounds,
    SearchConfig,
    Verdict,
    certify,
    decomposition_cost,
    entanglement_measure,
    lower_bound_realignment,
    lower_bound_witness,
    upper_bound_search,
)
