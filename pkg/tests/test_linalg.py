import math

import mpmath
import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings, strategies as st

from chanent import linalg
from chanent.errors import ConvergenceFailure, DimensionMismatch, NotHermitian, NotPSD, SingularState
from conftest import random_density, random_hermitian

SX = np.array([[0, 1], [1, 0]], dtype=complex)


def charpoly_roots(m):
    """Eigenvalues from the characteristic polynomial (Faddeev-LeVerrier in 60 digits)."""
    mpmath.mp.dps = 60
    n = m.shape[0]
    a = mpmath.matrix([[mpmath.mpc(complex(z)) for z in row] for row in m])
    coeffs = [mpmath.mpf(1)]
    mk = mpmath.zeros(n, n)
    eye = mpmath.eye(n)
    for k in range(1, n + 1):
        mk = a * (mk + coeffs[-1] * eye)
        ck = -sum(mk[i, i] for i in range(n)) / k
        coeffs.append(ck)
    roots = mpmath.polyroots(coeffs, maxsteps=400, extraprec=200)
    return np.sort([float(mpmath.re(r)) for r in roots])


def test_eig_diagonal():
    es = linalg.hermitian_eig(np.diag([1.0, 2.0]))
    assert np.allclose(es.eigenvalues, [1, 2])
    assert np.allclose(np.abs(es.eigenvectors), np.eye(2))


def test_eig_pauli_x():
    assert np.allclose(linalg.eigvalsh(SX), [-1, 1])


def test_eig_matches_charpoly_roots(rng):
    h = random_hermitian(8, rng)
    es = linalg.hermitian_eig(h)
    assert np.max(np.abs(es.eigenvalues - charpoly_roots(h))) <= 1e-10
    assert np.max(np.abs(es.reconstruct() - h)) <= 1e-10


def test_eig_rejects_non_hermitian():
    with pytest.raises(NotHermitian):
        linalg.hermitian_eig(np.array([[0, 1], [0, 0]], dtype=complex))


def test_eig_reports_convergence_failure(monkeypatch):
    def boom(*a, **k):
        raise np.linalg.LinAlgError("no convergence")

    monkeypatch.setattr(np.linalg, "eigh", boom)
    with pytest.raises(ConvergenceFailure):
        linalg.hermitian_eig(np.eye(2))


def test_spectral_function_examples():
    assert np.allclose(linalg.spectral_function(np.eye(2), "log"), 0)
    assert np.allclose(linalg.spectral_function(np.diag([4.0, 9.0]), "sqrt"), np.diag([2, 3]))
    half = linalg.spectral_function(np.eye(2) / 2, "log")
    assert np.allclose(half, -math.log(2) * np.eye(2))


def test_spectral_function_matches_scipy(rng):
    rho = random_density(4, rng)
    assert np.allclose(linalg.spectral_function(rho, "log"), scipy.linalg.logm(rho), atol=1e-10)
    assert np.allclose(linalg.spectral_function(rho, "sqrt"), scipy.linalg.sqrtm(rho), atol=1e-10)
    assert np.allclose(linalg.spectral_function(rho, "inverse"), np.linalg.inv(rho), atol=1e-8)
    s = linalg.spectral_function(rho, "inv_sqrt")
    assert np.allclose(s @ rho @ s, np.eye(4), atol=1e-8)


def test_spectral_function_rejects_negative():
    with pytest.raises(NotPSD):
        linalg.spectral_function(np.diag([1.0, -0.5]), "sqrt")


def test_log_on_support_is_zero_on_kernel():
    out = linalg.spectral_function(np.diag([1.0, 0.0]), "log")
    assert np.allclose(out, 0)


def test_kron_examples(rng):
    assert np.array_equal(linalg.kron(np.eye(2), np.eye(2)), np.eye(4))
    a, b, c, d = 2.0, 3.0, 5.0, 7.0
    assert np.allclose(linalg.kron(np.diag([a, b]), np.diag([c, d])), np.diag([a * c, a * d, b * c, b * d]))
    A, B, C, D = (rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)) for _ in range(4))
    assert np.max(np.abs(linalg.kron(A, B) @ linalg.kron(C, D) - linalg.kron(A @ C, B @ D))) <= 1e-12


def test_partial_trace_product(rng):
    rho, tau = random_density(2, rng), 3.0 * random_density(2, rng)
    assert np.allclose(linalg.partial_trace(np.kron(rho, tau), (2, 2), "A"), rho * 3.0)
    assert np.allclose(linalg.partial_trace(np.kron(rho, tau), (2, 2), "B"), tau)


def test_partial_trace_max_entangled():
    v = np.array([1, 0, 0, 1.0])
    phi = np.outer(v, v) / 2
    assert np.allclose(linalg.partial_trace(phi, (2, 2), "B"), np.eye(2) / 2)


def _loop_trace_b(m, da, db):
    out = np.zeros((da, da), dtype=complex)
    for i in range(da):
        for j in range(da):
            for k in range(db):
                out[i, j] += m[i * db + k, j * db + k]
    return out


@pytest.mark.parametrize("dims", [(2, 2), (2, 3), (3, 2)])
def test_partial_trace_matches_loop(rng, dims):
    da, db = dims
    rho = random_density(da * db, rng)
    assert np.max(np.abs(linalg.partial_trace(rho, dims, "A") - _loop_trace_b(rho, da, db))) <= 1e-14


def test_partial_trace_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        linalg.partial_trace(np.eye(4), (2, 3), "A")


def test_vectorize_examples():
    p = 0.25
    v = linalg.vectorize(np.diag([math.sqrt(p), math.sqrt(1 - p)]))
    assert np.allclose(v, [0.5, 0, 0, math.sqrt(0.75)])
    assert np.array_equal(linalg.vectorize(np.eye(2)), [1, 0, 0, 1])


def test_vectorize_kron_identity(rng):
    A, B, X = (rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)) for _ in range(3))
    lhs = np.kron(A, B) @ linalg.vectorize(X)
    assert np.max(np.abs(lhs - linalg.vectorize(A @ X @ B.T))) <= 1e-12
    assert np.array_equal(linalg.devectorize(linalg.vectorize(X), (2, 2)), X)


def test_frechet_commuting_cases():
    delta = np.diag([1.0, -1.0])
    assert np.allclose(linalg.frechet_log_derivative(np.eye(2) / 2, delta), 2 * delta, atol=1e-13)
    out = linalg.frechet_log_derivative(np.diag([0.2, 0.8]), np.diag([0.3, -0.7]))
    assert np.allclose(out, np.diag([0.3 / 0.2, -0.7 / 0.8]), atol=1e-12)


def _fd_log(rho, delta, h=1e-5):
    return (scipy.linalg.logm(rho + h * delta) - scipy.linalg.logm(rho - h * delta)) / (2 * h)


def _divided_difference(rho, delta):
    w, v = np.linalg.eigh(rho)
    dw = w[:, None] - w[None, :]
    dl = np.log(w)[:, None] - np.log(w)[None, :]
    same = np.abs(dw) < 1e-14
    kern = np.where(same, 1.0 / w[:, None], dl / np.where(same, 1.0, dw))
    return v @ (kern * (v.conj().T @ delta @ v)) @ v.conj().T


def _well_posed_density(d, rng, floor=0.02):
    # the h = 1e-5 central difference has truncation error ~ (h / min eig)^2
    while True:
        rho = random_density(d, rng)
        if np.linalg.eigvalsh(rho)[0] >= floor:
            return rho


def test_frechet_vs_finite_difference(rng):
    for _ in range(10):
        rho = _well_posed_density(4, rng)
        delta = random_hermitian(4, rng)
        got = linalg.frechet_log_derivative(rho, delta)
        ref = _fd_log(rho, delta)
        assert np.linalg.norm(got - ref) / np.linalg.norm(ref) <= 1e-5


def test_frechet_vs_divided_differences(rng):
    # includes nearly singular states
    for _ in range(20):
        rho = random_density(4, rng)
        delta = random_hermitian(4, rng)
        got = linalg.frechet_log_derivative(rho, delta)
        exact = _divided_difference(rho, delta)
        assert np.linalg.norm(got - exact) / np.linalg.norm(exact) <= 1e-9


def test_frechet_quadrature_exact_when_well_conditioned(rng):
    # away from singular states the 64-node rule is exact to rounding
    rho = 0.5 * random_density(4, rng) + 0.5 * np.eye(4) / 4
    delta = random_hermitian(4, rng)
    got = linalg.frechet_log_derivative(rho, delta)
    assert np.max(np.abs(got - _divided_difference(rho, delta))) <= 1e-10
    assert np.allclose(got, got.conj().T)


def test_frechet_rejects_singular():
    with pytest.raises(SingularState):
        linalg.frechet_log_derivative(np.diag([1.0, 0.0]), np.eye(2))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(2, 5))
def test_eig_reconstructs(seed, d):
    h = random_hermitian(d, np.random.default_rng(seed))
    es = linalg.hermitian_eig(h)
    assert np.all(np.diff(es.eigenvalues) >= 0)
    assert np.max(np.abs(es.reconstruct() - h)) <= 1e-10


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_partial_traces_agree_on_total_trace(seed):
    rho = random_density(6, np.random.default_rng(seed))
    assert abs(np.trace(linalg.partial_trace(rho, (2, 3), "A")) - 1) < 1e-12
    assert abs(np.trace(linalg.partial_trace(rho, (2, 3), "B")) - 1) < 1e-12
