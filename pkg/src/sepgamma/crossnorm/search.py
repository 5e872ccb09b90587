"""Upper bounds on the greatest cross norm by searching over decompositions.

Starting from an exact decomposition ``rho = sum_j u_j (x) v_j`` (the
operator-Schmidt form, or a caller-supplied seed), every candidate is
``u' = G u``, ``v' = G^{-T} v`` for an invertible mixing matrix ``G``; the
reconstruction is unchanged, so only the cost has to be tracked. ``G`` is
improved by a (1+1) evolution strategy with multiplicative steps
``G <- (I + eps X) G`` and a one-fifth success rule on ``eps``.

Restarts are advanced in lock-step as one batch. Each restart owns its PRNG
stream (``seed + index``) and its step size, so the outcome of a restart does
not depend on which other restarts share its batch; ``SEPGAMMA_THREADS``
splits the restarts into chunks without changing results.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Optional

import numpy as np

from ..errors import ValidationError
from ..operator_core import batch_trace_norms, operator_schmidt, random_unitary, trace_norm
from ..states import DensityOperator, make_rng
from .decomposition import (
    ElementaryDecomposition,
    decomposition_cost,
    from_schmidt,
    reconstruct,
)
from .lower import lower_bound_realignment
from .types import SearchConfig, UpperBound

SEED_MATCH_TOL = 1e-8
# bound on ||G||_F ||G^-1||_F; keeps G G^-1 = I accurate to ~1e-10
MAX_CONDITION = 1e6
MIN_STEP = 1e-10
MAX_STEP = 1.0


class SeedMismatch(ValidationError):
    pass


def thread_count() -> int:
    raw = os.environ.get("SEPGAMMA_THREADS")
    if not raw:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise ValidationError(f"SEPGAMMA_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise ValidationError(f"SEPGAMMA_THREADS must be a positive integer, got {raw!r}")
    return n


def _costs(g, ginv, u0, v0, d1, d2):
    """Costs of the mixed decompositions for a batch of mixing matrices."""
    n, k, _ = g.shape
    u = (g @ u0).reshape(n * k, d1, d1)
    v = (np.swapaxes(ginv, 1, 2) @ v0).reshape(n * k, d2, d2)
    return (batch_trace_norms(u) * batch_trace_norms(v)).reshape(n, k).sum(axis=1)


def _draw_moves(rng, k, count):
    """Pre-draw ``count`` shear moves ``(i, j, phase)`` with ``i != j``."""
    i = rng.integers(k, size=count)
    j = (i + 1 + rng.integers(k - 1, size=count)) % k
    z = rng.standard_normal((count, 2))
    return i, j, (z[:, 0] + 1j * z[:, 1]) / np.hypot(z[:, 0], z[:, 1])


def _run_restarts(indices, u0, v0, dims, floor, config):
    """Run the restarts in ``indices`` in lock-step; return ``(G, G^-1, cost, iterations)`` each.

    Moves are shears ``X = c E_ij`` (``|c| = 1``, ``i != j``): term ``i`` of
    the first factors gains ``eps c u_j`` and term ``j`` of the second factors
    loses ``eps c v_i``. Diagonal moves only rescale a term against itself and
    never change the cost, so they are not drawn.
    """
    k = u0.shape[0]
    d1, d2 = dims
    n = len(indices)
    g = np.empty((n, k, k), dtype=np.complex128)
    moves = []
    for j, r in enumerate(indices):
        rng = make_rng(config.seed + r)
        g[j] = np.eye(k) if r == 0 else random_unitary(k, rng)
        moves.append(_draw_moves(rng, k, config.max_iters))
    mi = np.array([m[0] for m in moves]).reshape(n, -1)
    mj = np.array([m[1] for m in moves]).reshape(n, -1)
    mc = np.array([m[2] for m in moves]).reshape(n, -1)
    ginv = np.swapaxes(g.conj(), 1, 2).copy()
    u = g @ u0
    v = np.swapaxes(ginv, 1, 2) @ v0
    tu = batch_trace_norms(u.reshape(n * k, d1, d1)).reshape(n, k)
    tv = batch_trace_norms(v.reshape(n * k, d2, d2)).reshape(n, k)
    cost = (tu * tv).sum(axis=1)
    eps = np.full(n, float(config.step_init))
    iters = np.zeros(n, dtype=int)
    grow = config.step_shrink ** -0.25
    shrink = config.step_shrink ** (1.0 / 16.0)
    active = np.ones(n, dtype=bool)
    for _ in range(config.max_iters):
        active &= (cost - floor > config.convergence_tol) & (eps > MIN_STEP)
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        t = iters[idx]
        i, j = mi[idx, t], mj[idx, t]
        c = eps[idx] * mc[idx, t]
        iters[idx] += 1
        ui = u[idx, i] + c[:, None] * u[idx, j]
        vj = v[idx, j] - c[:, None] * v[idx, i]
        nu = batch_trace_norms(ui.reshape(-1, d1, d1))
        nv = batch_trace_norms(vj.reshape(-1, d2, d2))
        delta = (nu - tu[idx, i]) * tv[idx, i] + tu[idx, j] * (nv - tv[idx, j])
        gi = g[idx, i] + c[:, None] * g[idx, j]
        hj = ginv[idx, :, j] - c[:, None] * ginv[idx, :, i]
        gnorm = np.sqrt(np.sum(np.abs(g[idx]) ** 2, axis=(1, 2)) - np.sum(np.abs(g[idx, i]) ** 2, axis=1)
                        + np.sum(np.abs(gi) ** 2, axis=1))
        hnorm = np.sqrt(np.sum(np.abs(ginv[idx]) ** 2, axis=(1, 2)) - np.sum(np.abs(ginv[idx, :, j]) ** 2, axis=1)
                        + np.sum(np.abs(hj) ** 2, axis=1))
        accept = (delta < 0) & (gnorm * hnorm <= MAX_CONDITION)
        a = idx[accept]
        ia, ja = i[accept], j[accept]
        u[a, ia] = ui[accept]
        v[a, ja] = vj[accept]
        tu[a, ia] = nu[accept]
        tv[a, ja] = nv[accept]
        g[a, ia] = gi[accept]
        ginv[a, :, ja] = hj[accept]
        cost[a] += delta[accept]
        eps[a] = np.minimum(eps[a] * grow, MAX_STEP)
        eps[idx[~accept]] *= shrink
    cost = _costs(g, ginv, u0, v0, d1, d2)
    return [(g[j], ginv[j], float(cost[j]), int(iters[j])) for j in range(n)]


def upper_bound_search(
    rho: DensityOperator,
    config: SearchConfig | None = None,
    seed_dec: Optional[ElementaryDecomposition] = None,
) -> UpperBound:
    """Best decomposition found for ``rho`` and its cost.

    Raises :class:`SeedMismatch` if ``seed_dec`` does not reconstruct ``rho``
    within ``1e-8`` in trace norm.
    """
    config = config or SearchConfig()
    dims = rho.dims
    if seed_dec is not None:
        if seed_dec.dims != dims:
            raise SeedMismatch(f"seed decomposition dims {tuple(seed_dec.dims)} != {tuple(dims)}")
        err = trace_norm(reconstruct(seed_dec) - rho.matrix)
        if err > SEED_MATCH_TOL:
            raise SeedMismatch(f"seed decomposition misses the state by {err:.3e} in trace norm")
        start = seed_dec
    else:
        start = from_schmidt(operator_schmidt(rho.matrix, dims), dims)
    start = start.padded(config.rank_padding)
    floor = lower_bound_realignment(rho)[0]
    initial = decomposition_cost(start)
    if initial - floor <= config.convergence_tol or config.max_iters == 0:
        return UpperBound(initial, start, initial, (0,) * config.restarts, 0)

    k = len(start)
    if k == 1:
        return UpperBound(initial, start, initial, (0,) * config.restarts, 0)
    u0 = start.lefts.reshape(k, -1)
    v0 = start.rights.reshape(k, -1)
    indices = list(range(config.restarts))
    threads = min(thread_count(), len(indices))
    if threads == 1:
        results = _run_restarts(indices, u0, v0, dims, floor, config)
    else:
        chunks = [indices[t::threads] for t in range(threads)]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda c: _run_restarts(c, u0, v0, dims, floor, config), chunks))
        by_index = {}
        for chunk, part in zip(chunks, parts):
            by_index.update(zip(chunk, part))
        results = [by_index[r] for r in indices]

    # lowest cost wins, ties to the lowest restart index; restart 0 never rises above the start
    best_r = min(range(len(results)), key=lambda r: (results[r][2], r))
    g, ginv, _, _ = results[best_r]
    lefts = (g @ u0).reshape(start.lefts.shape)
    rights = (ginv.T @ v0).reshape(start.rights.shape)
    witness = ElementaryDecomposition(dims, lefts, rights)
    value = decomposition_cost(witness)
    if value > initial:
        witness, value, best_r = start, initial, 0
    return UpperBound(value, witness, initial, tuple(r[3] for r in results), best_r)
