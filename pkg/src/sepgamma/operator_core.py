"""Dense complex linear algebra kernels and bipartite structural transforms.

Every operator is a ``numpy.ndarray`` of dtype ``complex128``. Composite
indices follow one global convention: the basis vector ``|i>|k>`` of
``H1 (x) H2`` sits at position ``i * d2 + k`` (first factor major), which is
exactly the layout produced by :func:`numpy.kron`. Vectorization of a factor
operator is row-major (``A.reshape(-1)``), so that

    realignment(A (x) B) == outer(vec(A), vec(B)).
"""

from __future__ import annotations

import contextlib
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DimensionMismatch, NotHermitian, NotSquare, ValidationError

HERMITIAN_TOL = 1e-8


class BipartiteDims(NamedTuple):
    """Factor dimensions ``(d1, d2)`` of ``H1 (x) H2``."""

    d1: int
    d2: int

    @property
    def total(self) -> int:
        return self.d1 * self.d2

    @classmethod
    def of(cls, dims) -> "BipartiteDims":
        d1, d2 = (int(d) for d in dims)
        if d1 < 1 or d2 < 1:
            raise ValidationError(f"factor dimensions must be positive, got {(d1, d2)}")
        return cls(d1, d2)


def as_matrix(m) -> np.ndarray:
    """Coerce ``m`` to a finite 2-D complex128 array."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise ValidationError(f"expected a non-empty 2-D matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValidationError("matrix has non-finite entries")
    return a


def _square(m) -> np.ndarray:
    a = as_matrix(m)
    if a.shape[0] != a.shape[1]:
        raise NotSquare(f"expected a square matrix, got shape {a.shape}")
    return a


def _bipartite(m, dims) -> tuple[np.ndarray, BipartiteDims]:
    dims = BipartiteDims.of(dims)
    a = _square(m)
    if a.shape[0] != dims.total:
        raise DimensionMismatch(
            f"matrix of size {a.shape[0]} does not match dims {tuple(dims)} (total {dims.total})"
        )
    return a, dims


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(m, -1, -2))


def hermiticity_deviation(m) -> float:
    a = _square(m)
    return float(np.max(np.abs(a - a.conj().T)))


def kron(a, b) -> np.ndarray:
    """Kronecker product with entry ``((i*rb + k), (j*cb + l)) = a[i,j] * b[k,l]``."""
    return np.kron(as_matrix(a), as_matrix(b))


def svd(m) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Thin SVD ``m = U @ diag(s) @ V^dag`` with ``s`` descending.

    Returns ``(U, s, V)``; note ``V`` (not ``V^dag``) is returned.
    """
    a = as_matrix(m)
    u, s, vh = np.linalg.svd(a, full_matrices=False)
    return u, s, vh.conj().T


def singular_values(m) -> np.ndarray:
    return np.linalg.svd(as_matrix(m), compute_uv=False)


def trace_norm(m) -> float:
    """Sum of singular values of a square matrix."""
    return float(np.sum(singular_values(_square(m))))


def operator_norm(m) -> float:
    return float(singular_values(m)[0])


def frobenius_norm(m) -> float:
    return float(np.linalg.norm(as_matrix(m)))


def batch_trace_norms(stack: np.ndarray) -> np.ndarray:
    """Trace norms of a stack of square matrices with shape ``(n, d, d)``.

    The 2x2 case uses the closed form ``s1 + s2 = sqrt(|m|_F^2 + 2|det m|)``;
    it sits on the search hot path.
    """
    if stack.shape[-1] == 1:
        return np.abs(stack[:, 0, 0])
    if stack.shape[-1] == 2:
        a, b = stack[:, 0, 0], stack[:, 0, 1]
        c, d = stack[:, 1, 0], stack[:, 1, 1]
        fro2 = (a * a.conj() + b * b.conj() + c * c.conj() + d * d.conj()).real
        det = np.abs(a * d - b * c)
        return np.sqrt(fro2 + 2.0 * det)
    return np.linalg.svd(stack, compute_uv=False).sum(axis=-1)


def hermitian_eig(m) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a Hermitian matrix, eigenvalues descending.

    Raises :class:`NotHermitian` if ``max |m - m^dag| > 1e-8``. The input is
    symmetrized before decomposition.
    """
    a = _square(m)
    dev = float(np.max(np.abs(a - a.conj().T)))
    if dev > HERMITIAN_TOL:
        raise NotHermitian(dev)
    w, v = np.linalg.eigh(0.5 * (a + a.conj().T))
    return w[::-1].copy(), v[:, ::-1].copy()


def min_eigenvalue(m) -> float:
    a = _square(m)
    return float(np.linalg.eigvalsh(0.5 * (a + a.conj().T))[0])


def _blocks(m: np.ndarray, dims: BipartiteDims) -> np.ndarray:
    # view as m4[i, k, j, l] = m[i*d2 + k, j*d2 + l]
    return m.reshape(dims.d1, dims.d2, dims.d1, dims.d2)


def partial_trace(m, dims, which: int = 2) -> np.ndarray:
    """Trace out factor ``which`` (1 or 2) of an operator on ``H1 (x) H2``."""
    a, dims = _bipartite(m, dims)
    m4 = _blocks(a, dims)
    if which == 2:
        return np.einsum("ikjk->ij", m4)
    if which == 1:
        return np.einsum("ikil->kl", m4)
    raise ValidationError(f"subsystem selector must be 1 or 2, got {which!r}")


def partial_transpose(m, dims) -> np.ndarray:
    """Transpose the second factor: entry ``((i,k),(j,l)) -> ((i,l),(j,k))``."""
    a, dims = _bipartite(m, dims)
    return _blocks(a, dims).transpose(0, 3, 2, 1).reshape(dims.total, dims.total)


# Axis order mapping m4[i, k, j, l] onto R[(i, j), (k, l)]. Only the selftest
# mutation hook ever changes it.
_REALIGN_AXES = (0, 2, 1, 3)


@contextlib.contextmanager
def _mutated_realignment():
    """Deliberately corrupt the realignment index map (selftest mutation check)."""
    global _REALIGN_AXES
    saved = _REALIGN_AXES
    _REALIGN_AXES = (0, 2, 3, 1)
    try:
        yield
    finally:
        _REALIGN_AXES = saved


def realignment(m, dims) -> np.ndarray:
    """Realigned ``d1^2 x d2^2`` matrix ``R[i*d1 + j, k*d2 + l] = m[i*d2 + k, j*d2 + l]``."""
    a, dims = _bipartite(m, dims)
    return _blocks(a, dims).transpose(_REALIGN_AXES).reshape(dims.d1**2, dims.d2**2)


def unrealign(r, dims) -> np.ndarray:
    """Inverse of :func:`realignment`."""
    dims = BipartiteDims.of(dims)
    r = as_matrix(r)
    if r.shape != (dims.d1**2, dims.d2**2):
        raise DimensionMismatch(f"realigned matrix has shape {r.shape}, expected {(dims.d1**2, dims.d2**2)}")
    return r.reshape(dims.d1, dims.d1, dims.d2, dims.d2).transpose(0, 2, 1, 3).reshape(dims.total, dims.total)


@dataclass(frozen=True)
class OperatorSchmidt:
    """``m = sum_k coefficients[k] * left_factors[k] (x) right_factors[k]``.

    Factor sets are orthonormal under the Hilbert-Schmidt inner product.
    """

    coefficients: np.ndarray
    left_factors: tuple[np.ndarray, ...]
    right_factors: tuple[np.ndarray, ...]

    @property
    def rank(self) -> int:
        return len(self.coefficients)

    def reconstruct(self) -> np.ndarray:
        return sum(
            c * np.kron(a, b)
            for c, a, b in zip(self.coefficients, self.left_factors, self.right_factors)
        )


def operator_schmidt(m, dims, rank_tol: float = 1e-12) -> OperatorSchmidt:
    """Operator-Schmidt decomposition via the SVD of the realignment.

    Singular values at or below ``rank_tol`` are dropped; at least one term is
    always kept so that the zero operator still has a (zero) decomposition.
    """
    a, dims = _bipartite(m, dims)
    u, s, v = svd(realignment(a, dims))
    keep = max(1, int(np.count_nonzero(s > rank_tol)))
    left = tuple(u[:, k].reshape(dims.d1, dims.d1) for k in range(keep))
    # R = sum_k s_k u_k v_k^dag, and R(A (x) B) = vec(A) vec(B)^T, so B_k = devec(conj(v_k))
    right = tuple(v[:, k].conj().reshape(dims.d2, dims.d2) for k in range(keep))
    return OperatorSchmidt(coefficients=s[:keep].copy(), left_factors=left, right_factors=right)


def hs_inner(a, b) -> complex:
    """Hilbert-Schmidt inner product ``tr(a^dag b)``."""
    return complex(np.vdot(np.asarray(a), np.asarray(b)))


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR of a complex Ginibre matrix with phase fix."""
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    ph = np.diagonal(r) / np.abs(np.diagonal(r))
    return q * ph


def stack_kron(lefts: Sequence[np.ndarray], rights: Sequence[np.ndarray]) -> np.ndarray:
    """``sum_i lefts[i] (x) rights[i]``."""
    lefts = np.asarray(lefts)
    rights = np.asarray(rights)
    n, d1, _ = lefts.shape
    d2 = rights.shape[1]
    out = np.einsum("nij,nkl->ikjl", lefts, rights)
    return out.reshape(d1 * d2, d1 * d2)
