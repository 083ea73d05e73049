import math

import numpy as np
import pytest

from multiscale_infodyn.errors import DimensionError, InstabilityError, SingularityError, CovarianceError, \
    ConvergenceError, ParameterError
from multiscale_infodyn.linalg import spectral_radius, solve_dlyap, solve_dare, dare_residual, is_psd, is_pd, \
    is_symmetric, max_abs


def random_stable_matrix(rng, size, radius):
    a = rng.standard_normal((size, size))
    return a * radius / spectral_radius(a)


def random_noise_covariances(rng, nl, nm):
    r = rng.standard_normal((nl + nm, nl + nm))
    joint = r @ r.T + 0.1 * np.eye(nl + nm)
    return joint[:nl, :nl], joint[nl:, nl:], joint[:nl, nl:]


def lyapunov_series(a, q, terms=3000):
    x = np.zeros_like(q)
    term = q.copy()
    for _ in range(terms):
        x += term
        term = a @ term @ a.T
    return x


@pytest.mark.parametrize("matrix, expected", [
    (np.zeros((3, 3)), 0.0),
    (np.eye(2), 1.0),
    (np.diag([0.25, -0.95]), 0.95),
    (np.array([[0.0, 1.0], [-1.0, 0.0]]), 1.0),
])
def test_spectral_radius_examples(matrix, expected):
    assert spectral_radius(matrix) == pytest.approx(expected, abs=1e-12)


def test_spectral_radius_scales_with_matrix():
    rng = np.random.default_rng(11)
    for _ in range(20):
        a = rng.standard_normal((4, 4))
        c = rng.uniform(-3, 3)
        assert spectral_radius(c * a) == pytest.approx(abs(c) * spectral_radius(a), rel=1e-10)


def test_spectral_radius_needs_square_matrix():
    with pytest.raises(DimensionError):
        spectral_radius(np.zeros((2, 3)))


def test_matrix_checks():
    assert is_symmetric([[1.0, 2.0], [2.0, 1.0]])
    assert not is_symmetric([[1.0, 2.0], [2.1, 1.0]])
    assert is_psd(np.diag([1.0, 0.0]))
    assert not is_psd(np.diag([1.0, -0.5]))
    assert is_pd(np.eye(3))
    assert not is_pd(np.diag([1.0, 0.0]))


def test_dlyap_zero_transition_returns_q():
    q = np.array([[2.0, 0.5], [0.5, 1.0]])
    np.testing.assert_allclose(solve_dlyap(np.zeros((2, 2)), q), q, atol=1e-15)


def test_dlyap_small_example():
    a = np.array([[0.25, 0.5], [0.0, 0.0]])
    q = np.eye(2)
    np.testing.assert_allclose(solve_dlyap(a, q), lyapunov_series(a, q, terms=200), atol=1e-12)


def test_dlyap_scalar():
    x = solve_dlyap([[0.5]], [[1.0]])
    assert x[0, 0] == pytest.approx(4.0 / 3.0, abs=1e-12)


def test_dlyap_matches_truncated_series():
    rng = np.random.default_rng(2026)
    for case in range(100):
        size = int(rng.integers(1, 7))
        a = random_stable_matrix(rng, size, rng.uniform(0.05, 0.9))
        b = rng.standard_normal((size, size))
        q = b @ b.T
        x = solve_dlyap(a, q)
        oracle = lyapunov_series(a, q)
        np.testing.assert_allclose(x, oracle, rtol=1e-8, atol=1e-8 * max_abs(oracle), err_msg=f"case {case}")
        assert is_symmetric(x)
        assert is_psd(x)


def test_dlyap_rejects_unstable_transition():
    with pytest.raises(InstabilityError) as info:
        solve_dlyap([[1.0]], [[1.0]])
    assert info.value.spectral_radius == pytest.approx(1.0)


def test_dlyap_rejects_indefinite_noise():
    with pytest.raises(CovarianceError):
        solve_dlyap(np.zeros((2, 2)), np.diag([1.0, -1.0]))


def test_dare_without_dynamics():
    rng = np.random.default_rng(5)
    xi, psi, ups = random_noise_covariances(rng, 2, 2)
    solution = solve_dare(np.zeros((2, 2)), np.zeros((2, 2)), xi, psi, ups)
    np.testing.assert_allclose(solution.phi, psi, atol=1e-12)
    np.testing.assert_allclose(solution.k, ups @ np.linalg.inv(psi), atol=1e-10)
    np.testing.assert_allclose(solution.p, xi - ups @ np.linalg.inv(psi) @ ups.T, atol=1e-10)


@pytest.mark.parametrize("method", ["doubling", "iteration"])
def test_dare_scalar(method):
    solution = solve_dare([[0.9]], [[1.0]], [[1.0]], [[1.0]], [[0.0]], method=method)
    expected = (0.81 + math.sqrt(0.6561 + 4.0)) / 2
    assert solution.p[0, 0] == pytest.approx(expected, abs=1e-10)
    assert solution.phi[0, 0] == pytest.approx(expected + 1.0, abs=1e-10)
    assert solution.k[0, 0] == pytest.approx(0.9 * expected / (expected + 1.0), abs=1e-10)


def test_dare_methods_agree_on_random_systems():
    rng = np.random.default_rng(7)
    for case in range(30):
        nl = int(rng.integers(1, 6))
        nm = int(rng.integers(1, 3))
        a = random_stable_matrix(rng, nl, rng.uniform(0.1, 0.9))
        c = rng.standard_normal((nm, nl))
        xi, psi, ups = random_noise_covariances(rng, nl, nm)
        doubled = solve_dare(a, c, xi, psi, ups, method="doubling")
        iterated = solve_dare(a, c, xi, psi, ups, method="iteration")
        scale = 1 + max_abs(doubled.p)
        np.testing.assert_allclose(doubled.p, iterated.p, atol=1e-8 * scale, err_msg=f"case {case}")
        assert dare_residual(doubled.p, a, c, xi, psi, ups) <= 1e-9 * scale
        assert is_pd(doubled.phi)
        assert spectral_radius(a - doubled.k @ c) < 1


def test_dare_rejects_singular_observation_noise():
    with pytest.raises(SingularityError):
        solve_dare([[0.5]], [[1.0]], [[1.0]], [[0.0]], [[0.0]])


def test_dare_rejects_mismatched_shapes():
    with pytest.raises(DimensionError):
        solve_dare(np.zeros((2, 2)), np.zeros((1, 3)), np.eye(2), np.eye(1), np.zeros((2, 1)))


def test_dare_rejects_unknown_method():
    with pytest.raises(ParameterError):
        solve_dare([[0.5]], [[1.0]], [[1.0]], [[1.0]], [[0.0]], method="schur")


def test_critical_dare():
    # y_n = e_n + e_(n-1): the innovation filter has its zero on the unit circle
    solution = solve_dare([[0.0]], [[1.0]], [[1.0]], [[1.0]], [[1.0]])
    assert solution.p[0, 0] == pytest.approx(0.0, abs=1e-12)
    assert solution.k[0, 0] == pytest.approx(1.0, abs=1e-12)
    assert solution.phi[0, 0] == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(ConvergenceError, match="doubling"):
        solve_dare([[0.0]], [[1.0]], [[1.0]], [[1.0]], [[1.0]], method="iteration")
