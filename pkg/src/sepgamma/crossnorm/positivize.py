"""Turning near-optimal decompositions into explicitly separable ones."""

from __future__ import annotations

import numpy as np
from scipy.optimize import least_squares

from ..errors import CostTooHigh, ValidationError
from ..operator_core import stack_kron, trace_norm
from ..states import DensityOperator, SeparableDecomposition
from .decomposition import ElementaryDecomposition, decomposition_cost

DROP_TRACE = 1e-12


def _positive_part(m: np.ndarray) -> np.ndarray:
    h = 0.5 * (m + m.conj().T)
    w, v = np.linalg.eigh(h)
    w = np.clip(w, 0.0, None)
    p = (v * w) @ v.conj().T
    return 0.5 * (p + p.conj().T)


def _assemble(dims, lefts, rights) -> SeparableDecomposition:
    """Weights ``tr(P) tr(Q)`` and unit-trace factors from positive pairs, weights renormalized."""
    weights, r1, r2 = [], [], []
    for p, q in zip(lefts, rights):
        tp, tq = float(np.trace(p).real), float(np.trace(q).real)
        if tp < DROP_TRACE or tq < DROP_TRACE:
            continue
        weights.append(tp * tq)
        r1.append(p / tp)
        r2.append(q / tq)
    if not weights:
        raise ValidationError("no term survived positivization")
    weights = np.asarray(weights)
    return SeparableDecomposition(dims, weights / weights.sum(), r1, r2)


def positivize(dec: ElementaryDecomposition, target: DensityOperator,
               sep_tol: float = 1e-3) -> tuple[SeparableDecomposition, float]:
    """Separable decomposition obtained from ``dec`` term by term.

    Each term's trace phases are absorbed into its two factors (the joint
    phase of ``tr(u) tr(v)`` split evenly, so ``u (x) v`` is unchanged), then
    every factor is replaced by the positive part of its Hermitian part.
    Returns the decomposition and its trace-norm distance to ``target``.

    Raises :class:`CostTooHigh` when ``decomposition_cost(dec) > 1 + sep_tol``.
    """
    cost = decomposition_cost(dec)
    if cost > 1.0 + sep_tol:
        raise CostTooHigh(cost, 1.0 + sep_tol)
    lefts, rights = [], []
    for u, v in dec.terms:
        tu, tv = np.trace(u), np.trace(v)
        half = 0.5 * np.angle(tu * tv)
        lefts.append(_positive_part(u * np.exp(1j * (half - np.angle(tu)))))
        rights.append(_positive_part(v * np.exp(1j * (half - np.angle(tv)))))
    sep = _assemble(dec.dims, lefts, rights)
    return sep, trace_norm(target.matrix - sep.matrix())


def _sqrt_psd(p: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(0.5 * (p + p.conj().T))
    return v * np.sqrt(np.clip(w, 0.0, None))


def refine_separable(sep: SeparableDecomposition, target: DensityOperator,
                     max_nfev: int = 200) -> tuple[SeparableDecomposition, float]:
    """Pull an approximate separable decomposition onto ``target``.

    Terms are written as ``(A_i A_i^dag) (x) (B_i B_i^dag)``, so positivity
    holds for every parameter value, and ``sum_i`` of them is fitted to
    ``target`` by nonlinear least squares starting from ``sep``. Returns the
    better (by trace-norm error) of the refined and the input decomposition.
    """
    dims = sep.dims
    d1, d2 = dims
    k = len(sep)
    base_err = trace_norm(target.matrix - sep.matrix())
    a0 = np.array([_sqrt_psd(w * r) for w, r in zip(sep.weights, sep.rho1)])
    b0 = np.array([_sqrt_psd(r) for r in sep.rho2])
    na = k * d1 * d1

    def unpack(x):
        z = x[: x.size // 2] + 1j * x[x.size // 2:]
        return z[:na].reshape(k, d1, d1), z[na:].reshape(k, d2, d2)

    def residual(x):
        a, b = unpack(x)
        p = a @ np.swapaxes(a.conj(), 1, 2)
        q = b @ np.swapaxes(b.conj(), 1, 2)
        r = (stack_kron(p, q) - target.matrix).reshape(-1)
        return np.concatenate([r.real, r.imag])

    z0 = np.concatenate([a0.reshape(-1), b0.reshape(-1)])
    x0 = np.concatenate([z0.real, z0.imag])
    try:
        fit = least_squares(residual, x0, method="trf", xtol=1e-15, ftol=1e-15, gtol=1e-15,
                            max_nfev=max_nfev)
    except (ValueError, np.linalg.LinAlgError):
        return sep, base_err
    a, b = unpack(fit.x)
    p = a @ np.swapaxes(a.conj(), 1, 2)
    q = b @ np.swapaxes(b.conj(), 1, 2)
    try:
        refined = _assemble(dims, p, q)
    except ValidationError:
        return sep, base_err
    err = trace_norm(target.matrix - refined.matrix())
    if err < base_err:
        return refined, err
    return sep, base_err
