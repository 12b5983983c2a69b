"""Dense one- and two-qubit linear algebra.

Everything here works on plain ``numpy`` complex arrays of shape (2, 2) or
(4, 4). The signal qubit is always the first tensor factor and the
computational basis has ``sigma_3 |0> = +|0>``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# construction-time validation tolerance
ATOL = 1e-12
# unitarity tolerance
UNITARY_TOL = 1e-10


class DomainError(ValueError):
    """Input outside the domain of an operation."""


def _frozen(a):
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


_PAULI = (
    _frozen([[1, 0], [0, 1]]),
    _frozen([[0, 1], [1, 0]]),
    _frozen([[0, -1j], [1j, 0]]),
    _frozen([[1, 0], [0, -1]]),
)
I2 = _PAULI[0]
I4 = _frozen(np.eye(4))
KET0 = _frozen([[1, 0], [0, 0]])
CNOT = _frozen([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])
SWAP = _frozen([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]])


def pauli(j: int) -> np.ndarray:
    """Return sigma_j (j = 0 is the identity)."""
    if isinstance(j, bool) or not isinstance(j, (int, np.integer)) or not 0 <= j <= 3:
        raise DomainError(f"Pauli index must be 0, 1, 2 or 3, got {j!r}")
    return _PAULI[j]


def dagger(a: np.ndarray) -> np.ndarray:
    return np.conj(np.transpose(a))


def max_abs(a) -> float:
    return float(np.max(np.abs(a)))


def allclose(a, b, tol: float = ATOL) -> bool:
    """Max entrywise modulus of ``a - b`` is at most ``tol``."""
    return max_abs(np.asarray(a) - np.asarray(b)) <= tol


def tensor(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product, signal (``a``) first."""
    return np.kron(a, b)


def partial_trace(R: np.ndarray, keep: str = "signal") -> np.ndarray:
    """Reduce a 4x4 operator to the ``signal`` or ``probe`` qubit."""
    R = np.asarray(R, dtype=complex)
    if R.shape != (4, 4):
        raise DomainError(f"expected a 4x4 matrix, got shape {R.shape}")
    t = R.reshape(2, 2, 2, 2)
    if keep == "signal":
        return np.einsum("ajbj->ab", t)
    if keep == "probe":
        return np.einsum("jajb->ab", t)
    raise DomainError(f"keep must be 'signal' or 'probe', got {keep!r}")


def is_hermitian(a, tol: float = ATOL) -> bool:
    return allclose(a, dagger(a), tol)


def unitarity_error(U) -> float:
    """Max entrywise modulus of U^dagger U - I."""
    U = np.asarray(U, dtype=complex)
    return max_abs(dagger(U) @ U - np.eye(U.shape[0]))


def check_unitary(U, tol: float = UNITARY_TOL) -> np.ndarray:
    U = np.asarray(U, dtype=complex)
    if U.ndim != 2 or U.shape[0] != U.shape[1] or U.shape[0] not in (2, 4):
        raise DomainError(f"expected a 2x2 or 4x4 matrix, got shape {U.shape}")
    err = unitarity_error(U)
    if not err <= tol:
        raise DomainError(f"matrix is not unitary: |U^dag U - I|_max = {err:.3e} > {tol:g}")
    return U


def check_hermitian(X, tol: float = ATOL) -> np.ndarray:
    X = np.asarray(X, dtype=complex)
    if X.shape != (2, 2):
        raise DomainError(f"expected a 2x2 observable, got shape {X.shape}")
    if not is_hermitian(X, tol):
        raise DomainError(f"observable is not Hermitian (deviation {max_abs(X - dagger(X)):.3e})")
    return X


def check_density(rho, tol: float = ATOL) -> np.ndarray:
    """Validate a density matrix (2x2 or 4x4) and return it as a complex array."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1] or rho.shape[0] not in (2, 4):
        raise DomainError(f"expected a 2x2 or 4x4 density matrix, got shape {rho.shape}")
    tr = np.trace(rho)
    if abs(tr - 1) > tol:
        raise DomainError(f"density matrix trace is {tr:.15g}, not 1")
    if not is_hermitian(rho, tol):
        raise DomainError("density matrix is not Hermitian")
    lo = float(np.linalg.eigvalsh(rho).min())
    if lo < -tol:
        raise DomainError(f"density matrix has negative eigenvalue {lo:.3e}")
    return rho


def check_bloch(s, tol: float = ATOL) -> np.ndarray:
    s = np.asarray(s, dtype=float).reshape(-1)
    if s.shape != (3,) or not np.all(np.isfinite(s)):
        raise DomainError(f"Bloch vector needs 3 finite components, got {s!r}")
    n = float(np.linalg.norm(s))
    if n > 1 + tol:
        raise DomainError(f"Bloch vector norm {n:.15g} exceeds 1: not a state")
    return s


def bloch_to_state(s) -> np.ndarray:
    """rho = (I + s.sigma) / 2."""
    s = check_bloch(s)
    return 0.5 * (I2 + s[0] * _PAULI[1] + s[1] * _PAULI[2] + s[2] * _PAULI[3])


def state_to_bloch(rho) -> np.ndarray:
    rho = check_density(rho)
    if rho.shape != (2, 2):
        raise DomainError("Bloch vectors are defined for single-qubit states only")
    return np.array([np.trace(rho @ _PAULI[j]).real for j in (1, 2, 3)])


def expectation(rho, X) -> float:
    """Tr[rho X] for Hermitian X; the imaginary residue must vanish."""
    X = check_hermitian(X)
    v = np.trace(np.asarray(rho) @ X)
    if abs(v.imag) > ATOL:
        raise DomainError(f"expectation has imaginary part {v.imag:.3e}; rho is not Hermitian?")
    return float(v.real)


def variance(rho, X) -> float:
    """<X^2> - <X>^2 (a variance, not a standard deviation)."""
    X = check_hermitian(X)
    m = expectation(rho, X)
    v = expectation(rho, X @ X) - m * m
    if v < -ATOL:
        raise DomainError(f"negative variance {v:.3e}")
    return max(v, 0.0)


def evolve(rho, rho_p, U) -> np.ndarray:
    """Joint output state R = U (rho x rho_p) U^dagger."""
    U = np.asarray(U, dtype=complex)
    if U.shape != (4, 4):
        raise DomainError(f"expected a 4x4 unitary, got shape {U.shape}")
    check_unitary(U)
    rho = check_density(rho)
    rho_p = check_density(rho_p)
    R = U @ np.kron(rho, rho_p) @ dagger(U)
    return 0.5 * (R + dagger(R))


def _wrap_angle(a: float) -> float:
    """Map into (-2 pi, 2 pi]; the kernel has period 4 pi in each angle."""
    period = 4 * math.pi
    w = math.fmod(a, period)
    if w <= -2 * math.pi:
        w += period
    elif w > 2 * math.pi:
        w -= period
    return w


@dataclass(frozen=True)
class CartanParams:
    theta1: float
    theta2: float
    theta3: float

    def __post_init__(self):
        for name in ("theta1", "theta2", "theta3"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise DomainError(f"{name} must be finite, got {v}")
            object.__setattr__(self, name, _wrap_angle(v))

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.theta1, self.theta2, self.theta3)


_SS = tuple(_frozen(np.kron(_PAULI[j], _PAULI[j])) for j in (1, 2, 3))


def cartan_kernel(p) -> np.ndarray:
    """exp[(i/2) sum_j theta_j sigma_j x sigma_j] via its commuting factors.

    ``p`` is a :class:`CartanParams` or a 3-sequence of angles.
    """
    if not isinstance(p, CartanParams):
        p = CartanParams(*p)
    U = np.eye(4, dtype=complex)
    for th, ss in zip(p.as_tuple(), _SS):
        U = U @ (math.cos(th / 2) * I4 + 1j * math.sin(th / 2) * ss)
    return U


def su2_euler(alpha: float, beta: float, gamma: float) -> np.ndarray:
    """Rz(alpha) Ry(beta) Rz(gamma) with R(t) = exp(-i t sigma / 2)."""
    ea, eg = np.exp(-0.5j * alpha), np.exp(-0.5j * gamma)
    c, s = math.cos(beta / 2), math.sin(beta / 2)
    return np.array(
        [[ea * eg * c, -ea * np.conj(eg) * s], [np.conj(ea) * eg * s, np.conj(ea * eg) * c]]
    )


# layout of the 15 SU(4) coordinates used by the no-go search
SU4_LAYOUT = (
    "theta1 theta2 theta3 "
    "pre_signal(a,b,g) pre_probe(a,b,g) post_signal(a,b,g) post_probe(a,b,g)"
)


def su4_from_params(x) -> np.ndarray:
    """(A x B) U_E(theta) (C x D) from 15 real coordinates.

    Order: three Cartan angles, then Euler angles for C, D (applied first)
    and A, B (applied last). Every SU(4) element is reached up to a global
    phase.
    """
    x = np.asarray(x, dtype=float)
    if x.shape != (15,):
        raise DomainError(f"expected 15 SU(4) coordinates, got shape {x.shape}")
    pre = np.kron(su2_euler(*x[3:6]), su2_euler(*x[6:9]))
    post = np.kron(su2_euler(*x[9:12]), su2_euler(*x[12:15]))
    return post @ cartan_kernel(x[:3]) @ pre


def random_unitary2(rng: np.random.Generator) -> np.ndarray:
    """Haar-random 2x2 unitary (QR of a Ginibre matrix with phase fix)."""
    z = (rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_bloch(rng: np.random.Generator, n: int, pure: bool = False) -> np.ndarray:
    """``n`` Bloch vectors uniform on the sphere (pure) or in the ball."""
    v = rng.standard_normal((n, 3))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    if not pure:
        v *= rng.random((n, 1)) ** (1 / 3)
    return v
