"""Quick invariant checks at small dimensions, run by ``sepgamma selftest``."""

from __future__ import annotations

import time
from contextlib import nullcontext
from typing import Callable, Optional

import numpy as np

from . import operator_core as oc
from .baselines import ppt_check, pure_gamma
from .crossnorm import (
    ElementaryDecomposition,
    SearchConfig,
    Verdict,
    certify,
    decomposition_cost,
    lower_bound_realignment,
    lower_bound_witness,
    pure_state_decomposition,
    reconstruct,
)
from .states import RandomSpec, bell, make_rng, pure_density, random_pure_vector, random_state, werner

MUTATIONS = ("realignment",)


def _rand(shape, rng):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def check_kron_mixed_product(rng):
    a, b, c, d = (_rand((2, 2), rng) for _ in range(4))
    err = np.max(np.abs(oc.kron(a, b) @ oc.kron(c, d) - oc.kron(a @ c, b @ d)))
    return err < 1e-12, f"max error {err:.2e}"


def check_realignment_product_rule(rng):
    a, b = _rand((2, 2), rng), _rand((3, 3), rng)
    r = oc.realignment(oc.kron(a, b), (2, 3))
    err = np.max(np.abs(r - np.outer(a.reshape(-1), b.reshape(-1))))
    return err < 1e-12, f"max error {err:.2e}"


def check_realignment_isometry(rng):
    m = _rand((6, 6), rng)
    err = abs(np.linalg.norm(oc.realignment(m, (2, 3))) - np.linalg.norm(m))
    return err < 1e-12, f"norm difference {err:.2e}"


def check_partial_transpose(rng):
    m = _rand((6, 6), rng)
    twice = oc.partial_transpose(oc.partial_transpose(m, (3, 2)), (3, 2))
    return bool(np.array_equal(twice, m)), "involution"


def check_cross_norm_property(rng):
    u, v = _rand((2, 2), rng), _rand((3, 3), rng)
    err = abs(oc.trace_norm(oc.kron(u, v)) - oc.trace_norm(u) * oc.trace_norm(v))
    return err < 1e-10, f"difference {err:.2e}"


def check_bell_anchor(rng):
    rho = bell()
    value = lower_bound_realignment(rho)[0]
    seesaw = lower_bound_witness(rho, SearchConfig(restarts=2)).value
    ok = abs(value - 2) < 1e-9 and seesaw >= 2 - 1e-6
    return ok, f"realignment {value:.12f}, see-saw {seesaw:.12f}"


def check_werner_ppt(rng):
    errs = [abs(ppt_check(werner(p)).min_eigenvalue - (1 - 3 * p) / 4) for p in (0.0, 0.25, 0.5, 1.0)]
    return max(errs) < 1e-9, f"max error {max(errs):.2e}"


def check_pure_tightness(rng):
    psi = random_pure_vector(9, rng)
    rho = np.outer(psi, psi.conj())
    dec = pure_state_decomposition(psi, (3, 3))
    lower = lower_bound_realignment(pure_density(psi, (3, 3)))[0]
    cost = decomposition_cost(dec)
    gamma = pure_gamma(psi, (3, 3))
    rec = oc.trace_norm(reconstruct(dec) - rho)
    ok = max(abs(cost - lower), abs(cost - gamma)) < 1e-9 and rec < 1e-9
    return ok, f"cost {cost:.12f}, realignment {lower:.12f}, closed form {gamma:.12f}"


def check_cost_floor(rng):
    worst = np.inf
    for _ in range(20):
        rho = random_state(RandomSpec(int(rng.integers(2**32)), "mixed_hs"), (2, 2))
        g = _rand((6, 6), rng)
        base = oc.operator_schmidt(rho.matrix, rho.dims)
        k = base.rank
        lefts = np.concatenate([np.asarray(base.left_factors) * base.coefficients[:, None, None],
                                np.zeros((6 - k, 2, 2))])
        rights = np.concatenate([np.asarray(base.right_factors), np.zeros((6 - k, 2, 2))])
        lefts = np.einsum("ij,jab->iab", g, lefts)
        rights = np.einsum("ij,jab->iab", np.linalg.inv(g).T, rights)
        worst = min(worst, decomposition_cost(ElementaryDecomposition((2, 2), lefts, rights)))
    return worst >= 1 - 1e-9, f"smallest cost {worst:.12f}"


def check_seeded_separable(rng):
    rho = random_state(RandomSpec(int(rng.integers(2**32)), "separable", {"k": 3}), (2, 2))
    cert = certify(rho, SearchConfig(restarts=2, max_iters=200), seed_dec=rho.provenance)
    return cert.verdict is Verdict.SEPARABLE, f"verdict {cert.verdict.value}"


def check_bell_entangled(rng):
    cert = certify(bell(), SearchConfig(restarts=2, max_iters=200))
    return cert.verdict is Verdict.ENTANGLED, f"verdict {cert.verdict.value}"


CHECKS: list[tuple[str, Callable]] = [
    ("kron mixed-product identity", check_kron_mixed_product),
    ("realignment product rule", check_realignment_product_rule),
    ("realignment Frobenius isometry", check_realignment_isometry),
    ("partial transpose involution", check_partial_transpose),
    ("trace norm cross property", check_cross_norm_property),
    ("Bell lower bounds equal 2", check_bell_anchor),
    ("Werner partial-transpose spectrum", check_werner_ppt),
    ("pure-state decomposition tightness", check_pure_tightness),
    ("decomposition cost floor", check_cost_floor),
    ("seeded separable certificate", check_seeded_separable),
    ("Bell certificate entangled", check_bell_entangled),
]


def run_selftest(seed: int = 2024, mutate: Optional[str] = None) -> list[tuple[str, bool, float, str]]:
    """Run every check; returns ``(name, passed, seconds, detail)`` rows."""
    if mutate is not None and mutate not in MUTATIONS:
        raise ValueError(f"unknown mutation {mutate!r}")
    ctx = oc._mutated_realignment() if mutate == "realignment" else nullcontext()
    rows = []
    with ctx:
        for i, (name, fn) in enumerate(CHECKS):
            rng = make_rng(seed + i)
            t0 = time.perf_counter()
            try:
                ok, detail = fn(rng)
            except Exception as exc:  # a crashing check is a failing check
                ok, detail = False, f"{type(exc).__name__}: {exc}"
            rows.append((name, bool(ok), time.perf_counter() - t0, detail))
    return rows
