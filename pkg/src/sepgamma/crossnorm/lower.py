"""Certified lower bounds on the greatest cross norm.

Both bounds rest on the same duality. For a decomposition
``rho = sum_i u_i (x) v_i`` the realignment is ``sum_i vec(u_i) vec(v_i)^T``,
so for any contractions ``A`` and ``B`` (operator norm <= 1)

    |tr(A^dag R(rho) B)| <= sum_i ||u_i||_F ||v_i||_F <= sum_i ||u_i||_1 ||v_i||_1.

The supremum of the left side is the nuclear norm of ``R(rho)``. A single
product pairing ``tr(rho (X (x) Y))`` cannot do better than 1 for a state, so
the witness lives on the realigned matrix, where it corresponds to the
operator ``W = sum_k A_k^dag (x) B_k^T`` built from the de-vectorized columns.
"""

from __future__ import annotations

import numpy as np

from ..operator_core import operator_schmidt, random_unitary, realignment, svd
from ..states import DensityOperator, make_rng
from .types import SearchConfig, WitnessResult


def lower_bound_realignment(rho: DensityOperator) -> tuple[float, np.ndarray]:
    """``max(1, ||R(rho)||_1)`` together with the singular values of ``R(rho)``."""
    spectrum = np.linalg.svd(realignment(rho.matrix, rho.dims), compute_uv=False)
    return max(1.0, float(np.sum(spectrum))), spectrum


def witness_value(rho: DensityOperator, A: np.ndarray, B: np.ndarray) -> float:
    """The pairing ``|tr(A^dag R(rho) B)|``."""
    r = realignment(rho.matrix, rho.dims)
    return float(abs(np.trace(A.conj().T @ r @ B)))


def realignment_witness(rho: DensityOperator) -> WitnessResult:
    """The contraction pair that attains the realignment nuclear norm exactly."""
    u, s, v = svd(realignment(rho.matrix, rho.dims))
    raw = float(abs(np.trace(u.conj().T @ realignment(rho.matrix, rho.dims) @ v)))
    return WitnessResult(value=max(1.0, raw), raw=raw, A=u, B=v)


def _polar(m: np.ndarray) -> np.ndarray:
    """Maximizer of ``Re tr(X^dag m)`` over contractions ``X``."""
    u, _, v = svd(m)
    return u @ v.conj().T


def _initial_b(rho: DensityOperator, width: int, rng: np.random.Generator) -> np.ndarray:
    # first column: top right operator-Schmidt factor, completed to an isometry
    d2sq = rho.dims.d2**2
    top = operator_schmidt(rho.matrix, rho.dims).right_factors[0].reshape(-1).conj()
    fill = rng.standard_normal((d2sq, width)) + 1j * rng.standard_normal((d2sq, width))
    fill[:, 0] = top
    q, rr = np.linalg.qr(fill)
    # keep the first column equal to +top (QR may flip its phase)
    return q * (np.diagonal(rr) / np.abs(np.diagonal(rr)))


def lower_bound_witness(rho: DensityOperator, config: SearchConfig | None = None) -> WitnessResult:
    """See-saw maximization of ``|tr(A^dag R(rho) B)|`` over contraction pairs.

    With ``B`` fixed the optimal ``A`` is the polar factor of ``M = R B``,
    achieving ``||M||_1``; then roles swap with ``N = R^dag A``. Each
    half-step is an exact maximization, so the objective never decreases.
    Restart 0 starts from the leading right operator-Schmidt factor; further
    restarts start from seeded random unitaries.
    """
    config = config or SearchConfig()
    r = realignment(rho.matrix, rho.dims)
    d1sq, d2sq = r.shape
    width = min(d1sq, d2sq)
    best = None
    for restart in range(config.restarts):
        rng = make_rng(config.seed + restart)
        if restart == 0:
            b = _initial_b(rho, width, rng)
        else:
            b = random_unitary(d2sq, rng)[:, :width]
        a = _polar(r @ b)
        value = float(np.real(np.trace(a.conj().T @ r @ b)))
        history = [value]
        it = 0
        while it < config.max_iters:
            it += 1
            b = _polar(r.conj().T @ a)
            a = _polar(r @ b)
            new = float(np.real(np.trace(a.conj().T @ r @ b)))
            history.append(new)
            improved = new - value
            value = max(value, new)
            if improved < config.convergence_tol:
                break
        raw = float(abs(np.trace(a.conj().T @ r @ b)))
        if best is None or raw > best.raw:
            best = WitnessResult(value=max(1.0, raw), raw=raw, A=a, B=b,
                                 iterations=it, history=tuple(history))
        if restart == 0 and config.restarts > 1:
            # restart 0 already sits at the global optimum whenever it meets the nuclear norm
            if best.raw >= float(np.sum(np.linalg.svd(r, compute_uv=False))) - config.convergence_tol:
                break
    return best
