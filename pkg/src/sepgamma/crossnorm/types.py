"""Configuration and result records for the cross-norm bounds."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from ..errors import ValidationError
from ..states import SeparableDecomposition
from .decomposition import ElementaryDecomposition


@dataclass(frozen=True)
class SearchConfig:
    """Search budget, seed and decision tolerances.

    The defaults keep the undecided band narrow at 2x2 and 2x3 scale; larger
    dimensions usually need more ``restarts`` and ``max_iters``.
    """

    restarts: int = 16
    max_iters: int = 2000
    step_init: float = 0.1
    step_shrink: float = 0.5
    seed: int = 0
    rank_padding: int = 0
    entangled_tol: float = 1e-6
    sep_tol: float = 1e-3
    sep_reconstruction_tol: float = 1e-4
    convergence_tol: float = 1e-10

    def __post_init__(self):
        if self.restarts < 1 or self.max_iters < 0:
            raise ValidationError("restarts must be >= 1 and max_iters >= 0")
        if not self.step_init > 0:
            raise ValidationError("step_init must be positive")
        if not 0 < self.step_shrink < 1:
            raise ValidationError("step_shrink must lie in (0, 1)")
        if not 0 <= int(self.seed) < 2**64:
            raise ValidationError("seed must be a 64-bit unsigned integer")
        if self.rank_padding < 0:
            raise ValidationError("rank_padding must be non-negative")
        for name in ("entangled_tol", "sep_tol", "sep_reconstruction_tol", "convergence_tol"):
            if not getattr(self, name) > 0:
                raise ValidationError(f"{name} must be positive")

    def replace(self, **changes) -> "SearchConfig":
        return dataclasses.replace(self, **changes)

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)


@dataclass(frozen=True, eq=False)
class UpperBound:
    value: float
    witness: ElementaryDecomposition
    initial_value: float
    iterations: tuple[int, ...]
    best_restart: int


@dataclass(frozen=True, eq=False)
class WitnessResult:
    """Lower bound ``|tr(A^dag R(rho) B)|`` from a pair of contractions.

    ``A`` is ``d1^2 x r`` and ``B`` is ``d2^2 x r``; ``raw`` is the unclamped
    pairing and ``value = max(1, raw)``.
    """

    value: float
    raw: float
    A: np.ndarray
    B: np.ndarray
    iterations: int = 0
    history: tuple[float, ...] = ()


@dataclass(frozen=True, eq=False)
class GammaBounds:
    lower: float
    upper: Optional[float] = None
    lower_method: str = "trivial"
    upper_witness: Optional[ElementaryDecomposition] = None
    iterations_used: tuple[int, ...] = ()
    spectrum: tuple[float, ...] = ()


class Verdict(str, Enum):
    SEPARABLE = "Separable"
    ENTANGLED = "Entangled"
    UNDECIDED = "Undecided"


@dataclass(frozen=True, eq=False)
class Certificate:
    verdict: Verdict
    bounds: GammaBounds
    separable_evidence: Optional[SeparableDecomposition] = None
    witness: Optional[WitnessResult] = None
    reconstruction_error: Optional[float] = None
    config: SearchConfig = field(default_factory=SearchConfig)

    @property
    def evidence(self):
        if self.verdict is Verdict.SEPARABLE:
            return self.separable_evidence
        if self.verdict is Verdict.ENTANGLED:
            return self.witness
        return None

    @property
    def measure(self) -> tuple[float, Optional[float]]:
        lo = self.bounds.lower - 1.0
        hi = None if self.bounds.upper is None else self.bounds.upper - 1.0
        return lo, hi
