"""Validated density operators, separable mixtures and seeded state generators."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    NotHermitian,
    NotNormalized,
    NotPositive,
    TraceNotOne,
    ValidationError,
)
from .operator_core import BipartiteDims, as_matrix, min_eigenvalue, stack_kron

STATE_TOL = 1e-8
NORM_TOL = 1e-10


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.complex128, copy=True)
    a.setflags(write=False)
    return a


def check_density_matrix(m, tol: float = STATE_TOL) -> np.ndarray:
    """Validate that ``m`` is Hermitian, positive and unit-trace; return it as an array."""
    a = as_matrix(m)
    if a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"density matrix must be square, got {a.shape}")
    dev = float(np.max(np.abs(a - a.conj().T)))
    if dev > tol:
        raise NotHermitian(dev)
    lam = min_eigenvalue(a)
    if lam < -tol:
        raise NotPositive(lam)
    tr = np.trace(a)
    if abs(tr - 1.0) > tol:
        raise TraceNotOne(tr)
    return a


@dataclass(frozen=True, eq=False)
class SeparableDecomposition:
    """Finite convex combination ``sum_i w_i rho1_i (x) rho2_i`` of product states."""

    dims: BipartiteDims
    weights: np.ndarray
    rho1: tuple[np.ndarray, ...]
    rho2: tuple[np.ndarray, ...]

    def __post_init__(self):
        dims = BipartiteDims.of(self.dims)
        weights = np.asarray(self.weights, dtype=float).reshape(-1)
        if not (len(weights) == len(self.rho1) == len(self.rho2)) or len(weights) == 0:
            raise ValidationError("weights, rho1 and rho2 must be non-empty and of equal length")
        object.__setattr__(self, "dims", dims)
        weights = weights.copy()
        weights.setflags(write=False)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "rho1", tuple(_readonly(r) for r in self.rho1))
        object.__setattr__(self, "rho2", tuple(_readonly(r) for r in self.rho2))
        self.validate()

    @classmethod
    def from_terms(cls, dims, terms: Sequence[tuple[float, np.ndarray, np.ndarray]]):
        w, r1, r2 = zip(*terms)
        return cls(dims, np.array(w, dtype=float), r1, r2)

    def __len__(self) -> int:
        return len(self.weights)

    @property
    def terms(self):
        return list(zip(self.weights, self.rho1, self.rho2))

    def validate(self, tol: float = STATE_TOL) -> None:
        if np.any(~np.isfinite(self.weights)) or np.any(self.weights <= 0):
            raise ValidationError("all weights must be positive and finite")
        if abs(float(np.sum(self.weights)) - 1.0) > tol:
            raise ValidationError(f"weights sum to {np.sum(self.weights):.12g}, expected 1")
        for factors, d in ((self.rho1, self.dims.d1), (self.rho2, self.dims.d2)):
            for r in factors:
                if r.shape != (d, d):
                    raise DimensionMismatch(f"factor of shape {r.shape}, expected {(d, d)}")
                check_density_matrix(r, tol)

    def matrix(self) -> np.ndarray:
        return stack_kron(self.weights[:, None, None] * np.asarray(self.rho1), np.asarray(self.rho2))


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Positive unit-trace operator on ``H1 (x) H2``.

    ``provenance`` optionally carries an explicit separable decomposition the
    state was built from.
    """

    dims: BipartiteDims
    matrix: np.ndarray
    provenance: Optional[SeparableDecomposition] = field(default=None, repr=False)

    @property
    def dim(self) -> int:
        return self.dims.total


def from_matrix(m, dims) -> DensityOperator:
    """Validate ``m`` against ``dims`` and wrap it as a :class:`DensityOperator`."""
    dims = BipartiteDims.of(dims)
    a = as_matrix(m)
    if a.shape != (dims.total, dims.total):
        raise DimensionMismatch(f"matrix shape {a.shape} does not match dims {tuple(dims)}")
    check_density_matrix(a)
    return DensityOperator(dims, _readonly(a))


def separable_mixture(dec: SeparableDecomposition) -> DensityOperator:
    rho = from_matrix(dec.matrix(), dec.dims)
    return DensityOperator(rho.dims, rho.matrix, provenance=dec)


def _unit_vector(psi, n: int) -> np.ndarray:
    v = np.asarray(psi, dtype=np.complex128).reshape(-1)
    if v.shape[0] != n:
        raise DimensionMismatch(f"vector of length {v.shape[0]}, expected {n}")
    norm = float(np.linalg.norm(v))
    if abs(norm - 1.0) > NORM_TOL:
        raise NotNormalized(norm)
    return v


def pure_density(psi, dims) -> DensityOperator:
    dims = BipartiteDims.of(dims)
    v = _unit_vector(psi, dims.total)
    return from_matrix(np.outer(v, v.conj()), dims)


def basis_vector(d: int, k: int) -> np.ndarray:
    e = np.zeros(d, dtype=np.complex128)
    e[k] = 1.0
    return e


def singlet_vector() -> np.ndarray:
    return np.array([0, 1, -1, 0], dtype=np.complex128) / np.sqrt(2)


def bell_vector() -> np.ndarray:
    """``|Phi+> = (|00> + |11>) / sqrt(2)``."""
    return np.array([1, 0, 0, 1], dtype=np.complex128) / np.sqrt(2)


def bell() -> DensityOperator:
    return pure_density(bell_vector(), (2, 2))


def werner(p: float) -> DensityOperator:
    """Two-qubit Werner state ``p |Psi-><Psi-| + (1 - p) I/4``."""
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValidationError(f"Werner parameter must lie in [0, 1], got {p}")
    s = singlet_vector()
    m = p * np.outer(s, s.conj()) + (1.0 - p) * np.eye(4) / 4.0
    return from_matrix(m, (2, 2))


def max_entangled_vector(d: int) -> np.ndarray:
    v = np.zeros(d * d, dtype=np.complex128)
    v[[k * d + k for k in range(d)]] = 1.0 / np.sqrt(d)
    return v


def max_entangled(d: int) -> DensityOperator:
    if int(d) < 2:
        raise ValidationError(f"max_entangled needs d >= 2, got {d}")
    d = int(d)
    return pure_density(max_entangled_vector(d), (d, d))


def maximally_mixed(dims) -> DensityOperator:
    dims = BipartiteDims.of(dims)
    return from_matrix(np.eye(dims.total) / dims.total, dims)


# --- random generators -------------------------------------------------------

RANDOM_KINDS = ("pure", "mixed_hs", "separable")


@dataclass(frozen=True)
class RandomSpec:
    """Recipe for a seeded random state.

    ``params`` keys: ``k`` (number of product terms, kind ``separable``) and
    ``rank`` (Ginibre rank, kinds ``mixed_hs`` and the factors of ``separable``).
    """

    seed: int
    kind: str = "mixed_hs"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in RANDOM_KINDS:
            raise ValidationError(f"unknown random kind {self.kind!r}; expected one of {RANDOM_KINDS}")
        if not 0 <= int(self.seed) < 2**64:
            raise ValidationError("seed must be a 64-bit unsigned integer")
        unknown = set(self.params) - {"k", "rank"}
        if unknown:
            raise ValidationError(f"unknown random-state parameters: {sorted(unknown)}")
        for key in ("k", "rank"):
            if key in self.params and int(self.params[key]) < 1:
                raise ValidationError(f"parameter {key} must be a positive integer")


def make_rng(seed: int) -> np.random.Generator:
    """The package's PRNG: PCG64 seeded with the 64-bit ``seed``."""
    return np.random.Generator(np.random.PCG64(int(seed)))


def ginibre(rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    return rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))


def random_pure_vector(n: int, rng: np.random.Generator) -> np.ndarray:
    v = ginibre(n, 1, rng)[:, 0]
    return v / np.linalg.norm(v)


def random_hs_matrix(d: int, rng: np.random.Generator, rank: Optional[int] = None) -> np.ndarray:
    """``G G^dag / tr(G G^dag)`` for a ``d x rank`` complex Ginibre ``G``."""
    g = ginibre(d, d if rank is None else int(rank), rng)
    m = g @ g.conj().T
    m = 0.5 * (m + m.conj().T)
    return m / np.trace(m).real


def random_separable_decomposition(dims, k: int, rng: np.random.Generator,
                                   rank: Optional[int] = None) -> SeparableDecomposition:
    """``k`` random product densities with weights uniform on the simplex."""
    dims = BipartiteDims.of(dims)
    weights = rng.dirichlet(np.ones(k))
    # Dirichlet draws can underflow to exactly zero for large k; keep weights positive.
    weights = np.maximum(weights, 1e-300)
    weights /= weights.sum()
    r1 = [random_hs_matrix(dims.d1, rng, None if rank is None else min(rank, dims.d1)) for _ in range(k)]
    r2 = [random_hs_matrix(dims.d2, rng, None if rank is None else min(rank, dims.d2)) for _ in range(k)]
    return SeparableDecomposition(dims, weights, r1, r2)


def random_state(spec: RandomSpec, dims) -> DensityOperator:
    """Deterministic random state; ``kind='separable'`` attaches its provenance."""
    dims = BipartiteDims.of(dims)
    rng = make_rng(spec.seed)
    rank = spec.params.get("rank")
    if spec.kind == "pure":
        return pure_density(random_pure_vector(dims.total, rng), dims)
    if spec.kind == "mixed_hs":
        return from_matrix(random_hs_matrix(dims.total, rng, rank), dims)
    k = int(spec.params.get("k", 4))
    return separable_mixture(random_separable_decomposition(dims, k, rng, rank))
