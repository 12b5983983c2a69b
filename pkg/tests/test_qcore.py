import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from obsclone import qcore as q
from obsclone.qcore import DomainError, pauli


def series_expm(G, terms=30):
    """Truncated power series of exp(G); test oracle only."""
    out = np.eye(G.shape[0], dtype=complex)
    term = np.eye(G.shape[0], dtype=complex)
    for k in range(1, terms):
        term = term @ G / k
        out = out + term
    return out


def random_density(rng, dim):
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    r = z @ z.conj().T
    return r / np.trace(r)


angles = st.floats(-2 * math.pi, 2 * math.pi, allow_nan=False)
bloch_ball = st.tuples(*[st.floats(-1, 1)] * 3).filter(lambda s: np.linalg.norm(s) <= 1)


def test_pauli_algebra():
    assert q.allclose(pauli(1) @ pauli(2), 1j * pauli(3))
    for j in (1, 2, 3):
        assert q.allclose(pauli(j) @ pauli(j), pauli(0))
        assert abs(np.trace(pauli(j))) == 0
        assert q.is_hermitian(pauli(j))
        assert q.unitarity_error(pauli(j)) == 0


@pytest.mark.parametrize("bad", [-1, 4, 1.0, "1", True])
def test_pauli_index_errors(bad):
    with pytest.raises(DomainError):
        pauli(bad)


def test_pauli_is_read_only():
    with pytest.raises(ValueError):
        pauli(1)[0, 0] = 5


def test_tensor_examples():
    assert q.allclose(q.tensor(pauli(0), pauli(0)), np.eye(4))
    assert np.all(np.diag(q.tensor(pauli(1), pauli(0))) == 0)
    assert q.allclose(q.tensor(pauli(3), pauli(3)), np.diag([1, -1, -1, 1]))


def test_tensor_mixed_product():
    rng = np.random.default_rng(3)
    a, b, c, d = (rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)) for _ in range(4))
    assert q.allclose(q.tensor(a, b) @ q.tensor(c, d), q.tensor(a @ c, b @ d))


def test_partial_trace_examples():
    rho = q.bloch_to_state([0.2, -0.4, 0.5])
    rp = q.bloch_to_state([0, 0.6, 0])
    assert q.allclose(q.partial_trace(np.kron(rho, rp), "signal"), rho)
    assert q.allclose(q.partial_trace(np.kron(rho, rp), "probe"), rp)
    bell = np.array([1, 0, 0, 1]) / math.sqrt(2)
    R = np.outer(bell, bell.conj())
    for keep in ("signal", "probe"):
        assert q.allclose(q.partial_trace(R, keep), pauli(0) / 2)
    with pytest.raises(DomainError):
        q.partial_trace(R, "both")


def test_partial_trace_adjointness_and_trace():
    rng = np.random.default_rng(7)
    for _ in range(50):
        R = random_density(rng, 4)
        X = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        X = X + X.conj().T
        lhs = np.trace(R @ np.kron(X, np.eye(2)))
        rhs = np.trace(q.partial_trace(R, "signal") @ X)
        assert abs(lhs - rhs) <= 1e-12
        lhs = np.trace(R @ np.kron(np.eye(2), X))
        rhs = np.trace(q.partial_trace(R, "probe") @ X)
        assert abs(lhs - rhs) <= 1e-12
        assert abs(np.trace(q.partial_trace(R, "probe")) - np.trace(R)) <= 1e-12


def test_bloch_examples():
    assert q.allclose(q.bloch_to_state([0, 0, 1]), np.diag([1, 0]))
    assert q.allclose(q.bloch_to_state([0, 0, 0]), pauli(0) / 2)
    with pytest.raises(DomainError):
        q.bloch_to_state([1, 1, 0])


def test_bloch_roundtrip_random():
    rng = np.random.default_rng(0)
    for s in q.random_bloch(rng, 100):
        assert np.max(np.abs(q.state_to_bloch(q.bloch_to_state(s)) - s)) <= 1e-12


@given(bloch_ball)
def test_bloch_roundtrip_property(s):
    rho = q.check_density(q.bloch_to_state(s))
    assert np.max(np.abs(q.state_to_bloch(rho) - np.array(s))) <= 1e-12


def test_pure_states_have_unit_bloch_norm():
    rng = np.random.default_rng(1)
    for s in q.random_bloch(rng, 20, pure=True):
        assert abs(np.linalg.norm(q.state_to_bloch(q.bloch_to_state(s))) - 1) <= 1e-9


def test_expectation_and_variance_examples():
    zero = np.diag([1.0, 0.0])
    assert q.expectation(zero, pauli(1)) == 0
    assert q.variance(zero, pauli(1)) == 1
    assert q.expectation(zero, pauli(3)) == 1
    assert q.variance(zero, pauli(3)) == 0
    rho = q.bloch_to_state([0, 0, 1])
    assert q.variance(rho, pauli(1)) * q.variance(rho, pauli(2)) == 1


def test_expectation_rejects_non_hermitian():
    with pytest.raises(DomainError):
        q.expectation(np.eye(2) / 2, np.array([[0, 1], [0, 0]]))


@settings(max_examples=50)
@given(bloch_ball, st.tuples(*[st.floats(-3, 3)] * 4), st.floats(-3, 3))
def test_expectation_linear_in_observable(s, coeffs, lam):
    rho = q.bloch_to_state(s)
    X = sum(c * pauli(j) for j, c in enumerate(coeffs))
    Y = pauli(1) - 2 * pauli(3)
    lhs = q.expectation(rho, X + lam * Y)
    assert abs(lhs - q.expectation(rho, X) - lam * q.expectation(rho, Y)) <= 1e-12
    # affine in the Bloch vector
    assert abs(q.expectation(rho, X) - (coeffs[0] + np.dot(coeffs[1:], s))) <= 1e-12


def test_evolve_examples():
    rng = np.random.default_rng(11)
    rho, rp = random_density(rng, 2), q.bloch_to_state([0.1, 0.2, -0.3])
    assert q.allclose(q.evolve(rho, rp, np.eye(4)), np.kron(rho, rp))
    assert q.allclose(q.partial_trace(q.evolve(rho, rp, q.SWAP), "signal"), rp)
    for _ in range(20):
        U = q.su4_from_params(rng.uniform(-np.pi, np.pi, 15))
        R = q.check_density(q.evolve(rho, rp, U))
        assert np.max(np.abs(np.linalg.eigvalsh(R) - np.linalg.eigvalsh(np.kron(rho, rp)))) <= 1e-12


def test_evolve_rejects_non_unitary_with_deviation():
    with pytest.raises(DomainError, match="not unitary"):
        q.evolve(np.eye(2) / 2, q.KET0, 1.01 * np.eye(4))


def test_check_density_rejects():
    with pytest.raises(DomainError):
        q.check_density(np.diag([0.6, 0.6]))
    with pytest.raises(DomainError):
        q.check_density(np.diag([1.2, -0.2]))
    with pytest.raises(DomainError):
        q.check_density(np.array([[0.5, 0.5], [0.1, 0.5]]))


def test_cartan_kernel_examples():
    assert q.allclose(q.cartan_kernel((0, 0, 0)), np.eye(4))
    assert q.allclose(q.cartan_kernel((math.pi, 0, 0)), 1j * np.kron(pauli(1), pauli(1)))


def test_cartan_kernel_matches_series_exponential():
    rng = np.random.default_rng(5)
    ss = [np.kron(pauli(j), pauli(j)) for j in (1, 2, 3)]
    # the 30-term series is accurate to ~1e-20 for |theta_j| <= pi/2
    for th in rng.uniform(-math.pi / 2, math.pi / 2, (50, 3)):
        G = 0.5j * sum(t * m for t, m in zip(th, ss))
        assert q.max_abs(q.cartan_kernel(th) - series_expm(G)) <= 1e-12


@given(st.tuples(angles, angles, angles))
def test_cartan_kernel_unitary(th):
    assert q.unitarity_error(q.cartan_kernel(th)) <= 1e-12


def test_cartan_params_wrap_preserves_kernel():
    p = q.CartanParams(7.0, -9.0, 13.0)
    assert all(-2 * math.pi < t <= 2 * math.pi for t in p.as_tuple())
    raw = np.eye(4, dtype=complex)
    for t, j in zip((7.0, -9.0, 13.0), (1, 2, 3)):
        raw = raw @ (math.cos(t / 2) * np.eye(4) + 1j * math.sin(t / 2) * np.kron(pauli(j), pauli(j)))
    assert q.allclose(q.cartan_kernel(p), raw)
    with pytest.raises(DomainError):
        q.CartanParams(float("nan"), 0, 0)


def test_su4_parameterization():
    rng = np.random.default_rng(2)
    for _ in range(20):
        U = q.su4_from_params(rng.uniform(-4, 4, 15))
        assert q.unitarity_error(U) <= 1e-12
        assert abs(np.linalg.det(U) - 1) <= 1e-12
    for angles_ in rng.uniform(-4, 4, (10, 3)):
        u = q.su2_euler(*angles_)
        assert q.unitarity_error(u) <= 1e-12 and abs(np.linalg.det(u) - 1) <= 1e-12
    # SWAP up to a global phase
    U = q.su4_from_params([math.pi / 2] * 3 + [0] * 12)
    assert abs(abs(np.trace(U.conj().T @ q.SWAP)) - 4) <= 1e-12


def test_random_unitary2_is_unitary():
    rng = np.random.default_rng(9)
    for _ in range(10):
        assert q.unitarity_error(q.random_unitary2(rng)) <= 1e-12
