import numpy as np
import pytest

from sepgamma.baselines import ppt_check, pure_gamma, schmidt_coefficients, schmidt_rank
from sepgamma.states import (
    RandomSpec,
    basis_vector,
    bell,
    bell_vector,
    make_rng,
    max_entangled_vector,
    maximally_mixed,
    random_pure_vector,
    random_state,
    werner,
)


def test_ppt_bell():
    rep = ppt_check(bell())
    assert rep.min_eigenvalue == pytest.approx(-0.5, abs=1e-12)
    assert not rep.is_ppt and rep.complete


def test_ppt_werner_threshold():
    # analytic PT spectrum minimum: (1 - 3p) / 4
    for p in np.linspace(0, 1, 11):
        rep = ppt_check(werner(p))
        assert rep.min_eigenvalue == pytest.approx(min((1 - 3 * p) / 4, (1 + p) / 4), abs=1e-12)
        assert rep.is_ppt == (p <= 1 / 3 + 1e-12)


def test_ppt_complete_flag():
    assert ppt_check(maximally_mixed((2, 3))).complete
    assert ppt_check(maximally_mixed((3, 2))).complete
    assert not ppt_check(maximally_mixed((3, 3))).complete
    assert ppt_check(maximally_mixed((1, 4))).complete


def test_ppt_separable_states_are_ppt():
    for seed in range(5):
        rho = random_state(RandomSpec(seed, "separable"), (2, 3))
        assert ppt_check(rho).is_ppt


def test_schmidt_coefficients_examples():
    np.testing.assert_allclose(schmidt_coefficients(bell_vector(), (2, 2)), [2**-0.5] * 2)
    prod = np.kron(basis_vector(2, 0), basis_vector(3, 2))
    np.testing.assert_allclose(schmidt_coefficients(prod, (2, 3)), [1.0, 0.0], atol=1e-15)
    assert schmidt_rank(prod, (2, 3)) == 1
    assert schmidt_rank(max_entangled_vector(3), (3, 3)) == 3


def test_pure_gamma_examples():
    assert pure_gamma(bell_vector(), (2, 2)) == pytest.approx(2.0)
    assert pure_gamma(max_entangled_vector(3), (3, 3)) == pytest.approx(3.0)
    assert pure_gamma(np.kron(basis_vector(2, 1), basis_vector(2, 0)), (2, 2)) == pytest.approx(1.0)


def test_schmidt_coefficients_square_sum():
    rng = make_rng(8)
    for dims in ((2, 2), (2, 3), (3, 3)):
        c = schmidt_coefficients(random_pure_vector(dims[0] * dims[1], rng), dims)
        assert np.sum(c**2) == pytest.approx(1.0, abs=1e-12)
        assert 1.0 - 1e-12 <= np.sum(c) ** 2 <= min(dims) + 1e-12
