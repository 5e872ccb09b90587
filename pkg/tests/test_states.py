import numpy as np
import pytest

from sepgamma import operator_core as oc
from sepgamma.errors import (
    DimensionMismatch,
    NotHermitian,
    NotNormalized,
    NotPositive,
    TraceNotOne,
    ValidationError,
)
from sepgamma.states import (
    RandomSpec,
    SeparableDecomposition,
    bell,
    from_matrix,
    make_rng,
    max_entangled,
    maximally_mixed,
    pure_density,
    random_hs_matrix,
    random_separable_decomposition,
    random_state,
    separable_mixture,
    singlet_vector,
    werner,
)


def test_from_matrix_rejects_invalid():
    with pytest.raises(NotHermitian):
        from_matrix(np.array([[0.5, 1.0], [0.0, 0.5]]), (2, 1))
    with pytest.raises(NotPositive):
        from_matrix(np.diag([1.5, -0.5]), (1, 2))
    with pytest.raises(TraceNotOne):
        from_matrix(np.eye(4) / 2, (2, 2))
    with pytest.raises(DimensionMismatch):
        from_matrix(np.eye(4) / 4, (2, 3))


def test_density_matrix_is_read_only():
    rho = maximally_mixed((2, 2))
    with pytest.raises(ValueError):
        rho.matrix[0, 0] = 1.0


def test_pure_density_requires_unit_vector():
    with pytest.raises(NotNormalized):
        pure_density([1.0, 1.0, 0.0, 0.0], (2, 2))
    with pytest.raises(DimensionMismatch):
        pure_density([1.0, 0.0, 0.0], (2, 2))


def test_bell_matrix():
    expected = np.zeros((4, 4))
    expected[np.ix_([0, 3], [0, 3])] = 0.5
    np.testing.assert_allclose(bell().matrix, expected, atol=1e-15)


def test_werner_endpoints_and_spectrum():
    np.testing.assert_allclose(werner(0.0).matrix, np.eye(4) / 4)
    s = singlet_vector()
    np.testing.assert_allclose(werner(1.0).matrix, np.outer(s, s.conj()), atol=1e-15)
    for p in (0.0, 0.3, 0.7, 1.0):
        w = np.linalg.eigvalsh(werner(p).matrix)
        np.testing.assert_allclose(w, sorted([(1 - p) / 4] * 3 + [(1 + 3 * p) / 4]), atol=1e-14)
    with pytest.raises(ValidationError):
        werner(1.2)


def test_max_entangled_reduced_state():
    for d in (2, 3):
        rho = max_entangled(d)
        np.testing.assert_allclose(oc.partial_trace(rho.matrix, rho.dims, 2), np.eye(d) / d, atol=1e-14)
    with pytest.raises(ValidationError):
        max_entangled(1)


def test_maximally_mixed():
    rho = maximally_mixed((2, 3))
    np.testing.assert_allclose(rho.matrix, np.eye(6) / 6)
    assert rho.dims == (2, 3)


def test_random_hs_is_density_with_rank():
    rng = make_rng(3)
    for rank in (None, 1, 2):
        m = random_hs_matrix(4, rng, rank)
        w = np.linalg.eigvalsh(m)
        assert w[0] > -1e-12
        assert np.trace(m).real == pytest.approx(1.0, abs=1e-12)
        if rank is not None:
            assert np.count_nonzero(w > 1e-10) == rank


def test_random_state_deterministic():
    spec = RandomSpec(seed=99, kind="mixed_hs")
    a, b = random_state(spec, (2, 3)), random_state(spec, (2, 3))
    np.testing.assert_array_equal(a.matrix, b.matrix)
    c = random_state(RandomSpec(seed=100), (2, 3))
    assert not np.allclose(a.matrix, c.matrix)


def test_random_pure_state_is_rank_one():
    rho = random_state(RandomSpec(5, "pure"), (2, 2))
    assert np.count_nonzero(np.linalg.eigvalsh(rho.matrix) > 1e-10) == 1


def test_random_separable_has_provenance():
    rho = random_state(RandomSpec(7, "separable", {"k": 3}), (2, 2))
    assert rho.provenance is not None and len(rho.provenance) == 3
    np.testing.assert_allclose(rho.provenance.matrix(), rho.matrix, atol=1e-14)
    assert np.all(rho.provenance.weights > 0)
    assert rho.provenance.weights.sum() == pytest.approx(1.0)


def test_random_spec_validation():
    with pytest.raises(ValidationError):
        RandomSpec(0, "gaussian")
    with pytest.raises(ValidationError):
        RandomSpec(0, "separable", {"terms": 3})
    with pytest.raises(ValidationError):
        RandomSpec(0, "separable", {"k": 0})
    with pytest.raises(ValidationError):
        RandomSpec(-1)


def test_separable_decomposition_validation():
    p = np.diag([1.0, 0.0])
    with pytest.raises(ValidationError):
        SeparableDecomposition((2, 2), [0.5, 0.4], [p, p], [p, p])
    with pytest.raises(ValidationError):
        SeparableDecomposition((2, 2), [1.0, 0.0], [p, p], [p, p])
    with pytest.raises(NotPositive):
        SeparableDecomposition((2, 2), [1.0], [np.diag([1.5, -0.5])], [p])
    with pytest.raises(DimensionMismatch):
        SeparableDecomposition((2, 2), [1.0], [np.eye(3) / 3], [p])


def test_separable_mixture_matrix():
    q = np.diag([0.0, 1.0])
    p = np.diag([1.0, 0.0])
    dec = SeparableDecomposition.from_terms((2, 2), [(0.5, p, p), (0.5, q, q)])
    rho = separable_mixture(dec)
    np.testing.assert_allclose(rho.matrix, np.diag([0.5, 0, 0, 0.5]))


def test_random_separable_decomposition_shapes():
    dec = random_separable_decomposition((2, 3), 5, make_rng(1), rank=1)
    assert len(dec) == 5
    assert all(r.shape == (2, 2) for r in dec.rho1)
    assert all(r.shape == (3, 3) for r in dec.rho2)
    assert all(np.linalg.matrix_rank(r, tol=1e-10) == 1 for r in dec.rho2)
