"""Three-way separability verdicts backed by checkable evidence."""

from __future__ import annotations

from typing import Optional, Union

from ..errors import CostTooHigh, ValidationError
from ..states import DensityOperator, SeparableDecomposition
from .decomposition import ElementaryDecomposition, from_separable
from .lower import lower_bound_realignment, lower_bound_witness, realignment_witness
from .positivize import positivize, refine_separable
from .search import upper_bound_search
from .types import Certificate, GammaBounds, SearchConfig, Verdict, WitnessResult

SeedDecomposition = Union[ElementaryDecomposition, SeparableDecomposition]


def as_elementary(seed_dec: Optional[SeedDecomposition]) -> Optional[ElementaryDecomposition]:
    if seed_dec is None or isinstance(seed_dec, ElementaryDecomposition):
        return seed_dec
    return from_separable(seed_dec)


def lower_bounds(rho: DensityOperator, config: SearchConfig) -> tuple[float, str, WitnessResult, tuple]:
    """Best certified lower bound, its method tag, a witness attaining it, and the realignment spectrum."""
    realign_value, spectrum = lower_bound_realignment(rho)
    seesaw = lower_bound_witness(rho, config)
    raw_realign = float(sum(spectrum))
    if max(raw_realign, seesaw.raw) <= 1.0:
        method = "clamp"
    elif seesaw.raw >= raw_realign:
        method = "witness"
    else:
        method = "realignment"
    witness = seesaw if seesaw.raw >= raw_realign else realignment_witness(rho)
    return max(realign_value, seesaw.value), method, witness, tuple(float(s) for s in spectrum)


def certify(rho: DensityOperator, config: SearchConfig | None = None,
            seed_dec: Optional[SeedDecomposition] = None) -> Certificate:
    """Decide separability of ``rho``.

    ``Entangled`` rests on a lower bound above ``1 + entangled_tol`` and carries
    the contraction pair attaining it. ``Separable`` carries an explicit
    separable decomposition within ``reconstruction_error`` of ``rho`` in
    trace norm. Anything else is ``Undecided`` with the bounds found.
    """
    config = config or SearchConfig()
    lower, method, witness, spectrum = lower_bounds(rho, config)
    if lower > 1.0 + config.entangled_tol:
        bounds = GammaBounds(lower=lower, lower_method=method, spectrum=spectrum)
        return Certificate(Verdict.ENTANGLED, bounds, witness=witness, config=config)

    ub = upper_bound_search(rho, config, as_elementary(seed_dec))
    bounds = GammaBounds(lower=lower, upper=ub.value, lower_method=method,
                         upper_witness=ub.witness, iterations_used=ub.iterations,
                         spectrum=spectrum)
    if ub.value <= 1.0 + config.sep_tol:
        try:
            sep, err = positivize(ub.witness, rho, config.sep_tol)
            if err > config.sep_reconstruction_tol * 1e-3:
                sep, err = refine_separable(sep, rho)
        except (CostTooHigh, ValidationError):
            sep, err = None, None
        if sep is not None and err <= config.sep_reconstruction_tol:
            return Certificate(Verdict.SEPARABLE, bounds, separable_evidence=sep,
                               reconstruction_error=err, config=config)
    return Certificate(Verdict.UNDECIDED, bounds, config=config)


def entanglement_measure(rho: DensityOperator, config: SearchConfig | None = None,
                         seed_dec: Optional[SeedDecomposition] = None) -> tuple[float, Optional[float]]:
    """Interval ``(lower - 1, upper - 1)`` enclosing the cross-norm excess over 1."""
    config = config or SearchConfig()
    lower = lower_bounds(rho, config)[0]
    ub = upper_bound_search(rho, config, as_elementary(seed_dec))
    return lower - 1.0, ub.value - 1.0
