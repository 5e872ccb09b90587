"""Finite elementary-tensor decompositions ``t = sum_i u_i (x) v_i`` and their cost."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..errors import DimensionMismatch, ValidationError
from ..operator_core import (
    BipartiteDims,
    OperatorSchmidt,
    batch_trace_norms,
    stack_kron,
)
from ..states import SeparableDecomposition, _unit_vector


@dataclass(frozen=True, eq=False)
class ElementaryDecomposition:
    """Non-empty list of factor pairs, stored as stacked arrays.

    ``lefts`` has shape ``(n, d1, d1)`` and ``rights`` shape ``(n, d2, d2)``.
    """

    dims: BipartiteDims
    lefts: np.ndarray
    rights: np.ndarray

    def __post_init__(self):
        dims = BipartiteDims.of(self.dims)
        lefts = np.array(self.lefts, dtype=np.complex128)
        rights = np.array(self.rights, dtype=np.complex128)
        if lefts.ndim != 3 or rights.ndim != 3 or len(lefts) == 0 or len(lefts) != len(rights):
            raise ValidationError("decomposition needs matching, non-empty stacks of factors")
        if lefts.shape[1:] != (dims.d1, dims.d1) or rights.shape[1:] != (dims.d2, dims.d2):
            raise DimensionMismatch(
                f"factor shapes {lefts.shape[1:]} / {rights.shape[1:]} do not match dims {tuple(dims)}"
            )
        if not (np.all(np.isfinite(lefts)) and np.all(np.isfinite(rights))):
            raise ValidationError("decomposition has non-finite entries")
        lefts.setflags(write=False)
        rights.setflags(write=False)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "lefts", lefts)
        object.__setattr__(self, "rights", rights)

    @classmethod
    def from_terms(cls, dims, terms: Sequence[tuple[np.ndarray, np.ndarray]]):
        lefts, rights = zip(*terms)
        return cls(dims, np.asarray(lefts), np.asarray(rights))

    def __len__(self) -> int:
        return len(self.lefts)

    @property
    def terms(self) -> list[tuple[np.ndarray, np.ndarray]]:
        return list(zip(self.lefts, self.rights))

    def scaled(self, w: float) -> "ElementaryDecomposition":
        return ElementaryDecomposition(self.dims, w * self.lefts, self.rights)

    def padded(self, extra: int) -> "ElementaryDecomposition":
        """Append ``extra`` zero terms."""
        if extra <= 0:
            return self
        d1, d2 = self.dims
        zl = np.zeros((extra, d1, d1), dtype=np.complex128)
        zr = np.zeros((extra, d2, d2), dtype=np.complex128)
        return ElementaryDecomposition(
            self.dims, np.concatenate([self.lefts, zl]), np.concatenate([self.rights, zr])
        )


def concat(*decs: ElementaryDecomposition) -> ElementaryDecomposition:
    dims = decs[0].dims
    if any(d.dims != dims for d in decs):
        raise DimensionMismatch("cannot concatenate decompositions with different dims")
    return ElementaryDecomposition(
        dims, np.concatenate([d.lefts for d in decs]), np.concatenate([d.rights for d in decs])
    )


def term_costs(dec: ElementaryDecomposition) -> np.ndarray:
    return batch_trace_norms(dec.lefts) * batch_trace_norms(dec.rights)


def decomposition_cost(dec: ElementaryDecomposition) -> float:
    """``sum_i ||u_i||_1 ||v_i||_1``."""
    return float(np.sum(term_costs(dec)))


def reconstruct(dec: ElementaryDecomposition) -> np.ndarray:
    return stack_kron(dec.lefts, dec.rights)


def from_schmidt(schmidt: OperatorSchmidt, dims) -> ElementaryDecomposition:
    """Terms ``(lambda_k A_k, B_k)`` of an operator-Schmidt decomposition."""
    lefts = np.asarray(schmidt.left_factors) * np.asarray(schmidt.coefficients)[:, None, None]
    return ElementaryDecomposition(dims, lefts, np.asarray(schmidt.right_factors))


def from_separable(dec: SeparableDecomposition) -> ElementaryDecomposition:
    """Terms ``(w_i rho1_i, rho2_i)``; the weight rides on the first factor."""
    lefts = np.asarray(dec.rho1) * np.asarray(dec.weights)[:, None, None]
    return ElementaryDecomposition(dec.dims, lefts, np.asarray(dec.rho2))


def pure_state_decomposition(psi, dims) -> ElementaryDecomposition:
    """Optimal decomposition of ``|psi><psi|`` with cost ``(sum_k c_k)^2``.

    With Schmidt form ``psi = sum_k c_k |e_k>|f_k>`` of rank ``r``, build
    ``a_m = sum_k w^(mk) sqrt(c_k) e_k`` and its conjugate twin
    ``b_m = sum_k w^(-mk) sqrt(c_k) f_k`` (``w = exp(2 pi i / r)``). Since
    ``sum_m a_m (x) b_m = r psi``, the ``r^2`` rank-one terms
    ``|a_m><a_n| (x) |b_m><b_n| / r^2`` sum to ``|psi><psi|``, each costing
    ``(sum c)^2 / r^2``.
    """
    dims = BipartiteDims.of(dims)
    v = _unit_vector(psi, dims.total)
    u, s, vh = np.linalg.svd(v.reshape(dims.d1, dims.d2), full_matrices=False)
    r = max(1, int(np.count_nonzero(s > 1e-14 * max(1.0, s[0]))))
    c = s[:r]
    e = u[:, :r]
    f = vh[:r, :].T
    phase = np.exp(2j * np.pi * np.outer(np.arange(r), np.arange(r)) / r)
    a = (phase * np.sqrt(c)) @ e.T
    b = (phase.conj() * np.sqrt(c)) @ f.T
    lefts, rights = [], []
    for m in range(r):
        for n in range(r):
            lefts.append(np.outer(a[m], a[n].conj()) / r**2)
            rights.append(np.outer(b[m], b[n].conj()))
    return ElementaryDecomposition(dims, np.asarray(lefts), np.asarray(rights))
