"""Independent reference criteria: partial transpose and pure-state Schmidt analysis.

The PPT test is a complete separability oracle only for 2x2 and 2x3 systems;
elsewhere it is a necessary condition and is reported as such.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .operator_core import BipartiteDims, min_eigenvalue, partial_transpose
from .states import DensityOperator, _unit_vector

PPT_TOL = 1e-9


@dataclass(frozen=True)
class PptReport:
    """``complete`` marks dimensions (2x2, 2x3, or a trivial factor) where PPT decides separability."""

    min_eigenvalue: float
    is_ppt: bool
    tol: float = PPT_TOL
    complete: bool = False


def ppt_check(rho: DensityOperator, tol: float = PPT_TOL) -> PptReport:
    lam = min_eigenvalue(partial_transpose(rho.matrix, rho.dims))
    complete = min(rho.dims) == 1 or sorted(rho.dims) in ([2, 2], [2, 3])
    return PptReport(min_eigenvalue=lam, is_ppt=lam >= -tol, tol=tol, complete=complete)


def schmidt_coefficients(psi, dims) -> np.ndarray:
    """Singular values of the ``d1 x d2`` reshaping of a unit vector, descending."""
    dims = BipartiteDims.of(dims)
    v = _unit_vector(psi, dims.total)
    return np.linalg.svd(v.reshape(dims.d1, dims.d2), compute_uv=False)


def pure_gamma(psi, dims) -> float:
    """Closed-form cross norm ``(sum_k c_k)^2`` of a pure state."""
    return float(np.sum(schmidt_coefficients(psi, dims)) ** 2)


def schmidt_rank(psi, dims, tol: float = 1e-12) -> int:
    return int(np.count_nonzero(schmidt_coefficients(psi, dims) > tol))
