import numpy as np
import pytest

from sepgamma.states import make_rng


@pytest.fixture
def rng():
    return make_rng(12345)


def crandn(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def jacobi_singular_values(m, sweeps=60):
    """One-sided Jacobi SVD oracle (Hestenes); independent of LAPACK's gesdd."""
    a = np.array(m, dtype=complex)
    n = a.shape[1]
    for _ in range(sweeps):
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                alpha = np.vdot(a[:, p], a[:, p]).real
                beta = np.vdot(a[:, q], a[:, q]).real
                gamma = np.vdot(a[:, p], a[:, q])
                if abs(gamma) < 1e-300:
                    continue
                off = max(off, abs(gamma) / np.sqrt(alpha * beta))
                phase = gamma / abs(gamma)
                zeta = (beta - alpha) / (2 * abs(gamma))
                t = np.sign(zeta) / (abs(zeta) + np.sqrt(1 + zeta**2)) if zeta != 0 else 1.0
                c = 1 / np.sqrt(1 + t**2)
                s = c * t
                ap = a[:, p].copy()
                aq = a[:, q].copy()
                a[:, p] = c * ap - s * np.conj(phase) * aq
                a[:, q] = s * phase * ap + c * aq
        if off < 1e-15:
            break
    return np.sort(np.linalg.norm(a, axis=0))[::-1]


def kron_oracle(a, b):
    ra, ca = a.shape
    rb, cb = b.shape
    out = np.zeros((ra * rb, ca * cb), dtype=complex)
    for i in range(ra):
        for j in range(ca):
            for k in range(rb):
                for l in range(cb):
                    out[i * rb + k, j * cb + l] = a[i, j] * b[k, l]
    return out


PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]]),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def bell_pauli_terms():
    """``|Phi+><Phi+| = (II + XX - YY + ZZ) / 4`` as (coefficient, left, right)."""
    return [(0.25, PAULI["I"], PAULI["I"]), (0.25, PAULI["X"], PAULI["X"]),
            (-0.25, PAULI["Y"], PAULI["Y"]), (0.25, PAULI["Z"], PAULI["Z"])]
