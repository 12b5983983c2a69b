"""Catalog of two-qubit cloning machines for observables."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import qcore
from .qcore import DomainError, dagger, pauli, tensor

# class-membership residual tolerance
MEMBERSHIP_TOL = 1e-10

SQRT2 = math.sqrt(2.0)
# swaps sigma_1 and sigma_2 under conjugation
FLIP = (1j / SQRT2) * (pauli(1) + pauli(2))
FLIP.setflags(write=False)


class ClassMembershipError(DomainError):
    """Observable is not a real combination of the class generators."""


@dataclass(frozen=True, eq=False)
class ObservableClass:
    """Real span {c A + d B} of two Hermitian generators."""

    generator_a: np.ndarray
    generator_b: np.ndarray
    label: str = ""

    def __post_init__(self):
        for name in ("generator_a", "generator_b"):
            g = qcore.check_hermitian(getattr(self, name)).copy()
            g.setflags(write=False)
            object.__setattr__(self, name, g)

    @property
    def generators(self) -> tuple[np.ndarray, np.ndarray]:
        return (self.generator_a, self.generator_b)

    def coefficients(self, X) -> tuple[float, float, float]:
        """Least-squares real (c, d) for X ~ cA + dB and the max-entry residual."""
        X = np.asarray(X, dtype=complex)
        # real-linear system over the 8 real coordinates of a 2x2 matrix
        cols = [np.concatenate([g.real.ravel(), g.imag.ravel()]) for g in self.generators]
        M = np.stack(cols, axis=1)
        y = np.concatenate([X.real.ravel(), X.imag.ravel()])
        coef, *_ = np.linalg.lstsq(M, y, rcond=None)
        c, d = float(coef[0]), float(coef[1])
        res = qcore.max_abs(X - c * self.generator_a - d * self.generator_b)
        return c, d, res

    def contains(self, X, tol: float = MEMBERSHIP_TOL) -> bool:
        return self.coefficients(X)[2] <= tol

    def conjugated(self, W, label: Optional[str] = None) -> "ObservableClass":
        """The class W^dagger X W."""
        W = qcore.check_unitary(W)
        return ObservableClass(
            dagger(W) @ self.generator_a @ W,
            dagger(W) @ self.generator_b @ W,
            label if label is not None else f"W^dag ({self.label}) W",
        )

    def is_pauli_pair(self, tol: float = 1e-10) -> bool:
        """Generators square to I and anticommute (unitarily equivalent to sigma_1, sigma_2)."""
        a, b = self.generators
        return (
            qcore.allclose(a @ a, qcore.I2, tol)
            and qcore.allclose(b @ b, qcore.I2, tol)
            and qcore.max_abs(a @ b + b @ a) <= tol
        )


X_NC = ObservableClass(pauli(1), pauli(2), "x1 s1 + x2 s2")
X_COMMUTING = ObservableClass(pauli(3), pauli(3), "x s3")


@dataclass(frozen=True, eq=False)
class CloningMachineSpec:
    """A machine (U, probe, class) together with its predicted added noises.

    ``predicted_g1``/``predicted_g2`` are ``None`` when no prediction exists.
    """

    unitary: np.ndarray
    probe: np.ndarray
    klass: ObservableClass
    predicted_g1: Optional[float] = None
    predicted_g2: Optional[float] = None
    name: str = ""
    theta: Optional[float] = None
    notes: dict = field(default_factory=dict)

    def __post_init__(self):
        U = qcore.check_unitary(self.unitary).copy()
        if U.shape != (4, 4):
            raise DomainError("a cloning machine needs a 4x4 unitary")
        U.setflags(write=False)
        object.__setattr__(self, "unitary", U)
        p = qcore.check_density(self.probe).copy()
        if p.shape != (2, 2):
            raise DomainError("probe must be a single-qubit state")
        p.setflags(write=False)
        object.__setattr__(self, "probe", p)
        for g in (self.predicted_g1, self.predicted_g2):
            if g is not None and abs(g) < 1:
                raise DomainError(f"added noise must satisfy |g| >= 1, got {g}")


@dataclass(frozen=True)
class MarginalCloneModel:
    shrink_factor: float
    description: str = ""

    def __post_init__(self):
        if not 0 < self.shrink_factor <= 1:
            raise DomainError(f"shrink factor must lie in (0, 1], got {self.shrink_factor}")

    def apply(self, s) -> np.ndarray:
        return self.shrink_factor * qcore.check_bloch(s)


UNIVERSAL_CLONER = MarginalCloneModel(2 / 3, "symmetric universal 1->2 state cloner, per-clone marginal")


def _check_theta(theta: float) -> float:
    theta = float(theta)
    if not math.isfinite(theta) or not 0 < theta < math.pi / 2:
        raise DomainError(
            f"theta = {theta!r} outside (0, pi/2): added noise diverges at the boundary "
            "(g1 = 1/cos(theta), g2 = 1/sin(theta))"
        )
    return theta


def predicted_noises(theta: float) -> tuple[float, float]:
    theta = _check_theta(theta)
    return 1 / math.cos(theta), 1 / math.sin(theta)


def nc_unitary(theta: float) -> np.ndarray:
    """T = (I x F) exp[i theta/2 (s1 x s1 - s2 x s2)]."""
    return tensor(qcore.I2, FLIP) @ qcore.cartan_kernel((theta, -theta, 0.0))


def machine_nc(theta: float) -> CloningMachineSpec:
    g1, g2 = predicted_noises(theta)
    return CloningMachineSpec(
        nc_unitary(theta), qcore.KET0, X_NC, g1, g2, name="nc", theta=float(theta)
    )


def machine_conjugated(V, theta: float) -> CloningMachineSpec:
    """U_V = (V^dag x V^dag)(I x F) U_nc (V x I) on the class V^dag X_nc V."""
    V = qcore.check_unitary(V)
    if V.shape != (2, 2):
        raise DomainError("V must be a 2x2 unitary")
    g1, g2 = predicted_noises(theta)
    Vd = dagger(V)
    U = tensor(Vd, Vd) @ nc_unitary(theta) @ tensor(V, qcore.I2)
    klass = X_NC.conjugated(V, "c V^dag s1 V + d V^dag s2 V")
    return CloningMachineSpec(U, qcore.KET0, klass, g1, g2, name="conjugated", theta=float(theta))


def phase_covariant_unitary(theta: float) -> np.ndarray:
    """|00> -> |00>, |10> -> cos|10> + sin|01>, |01> -> -sin|10> + cos|01>, |11> -> |11>."""
    c, s = math.cos(theta), math.sin(theta)
    U = np.eye(4, dtype=complex)
    # basis index = 2*signal + probe: |01> = 1, |10> = 2
    U[2, 2], U[1, 2] = c, s
    U[2, 1], U[1, 1] = -s, c
    return U


def machine_phase_covariant(theta: float) -> CloningMachineSpec:
    g1, g2 = predicted_noises(theta)
    return CloningMachineSpec(
        phase_covariant_unitary(theta), qcore.KET0, X_NC, g1, g2,
        name="phase-covariant", theta=float(theta),
    )


def machine_sign_flipped(theta: float) -> CloningMachineSpec:
    """(s3 x s3) T: both clones get negated equatorial means."""
    g1, g2 = predicted_noises(theta)
    Z = pauli(3)
    U = tensor(Z, Z) @ nc_unitary(theta)
    return CloningMachineSpec(
        U, qcore.KET0, X_NC, -g1, -g2, name="sign-flipped", theta=float(theta)
    )


def machine_commuting() -> CloningMachineSpec:
    """CNOT with the signal as control clones the commuting class {x s3} perfectly."""
    return CloningMachineSpec(qcore.CNOT, qcore.KET0, X_COMMUTING, 1.0, 1.0, name="commuting")


def universal_clone_marginal(s) -> dict:
    """Per-clone means and raw variances of s1, s2 after the 2/3 Bloch shrink."""
    s = qcore.check_bloch(s)
    out = UNIVERSAL_CLONER.apply(s)
    means = (float(out[0]), float(out[1]))
    return {
        "shrink_factor": UNIVERSAL_CLONER.shrink_factor,
        "clone_bloch": out,
        "clone_means": means,
        "clone_variances": tuple(1 - m * m for m in means),
    }


def is_phase_covariant_state_cloner(spec: CloningMachineSpec, theta: float, tol: float = 1e-12) -> bool:
    """Does U map |10> to cos|10> + sin|01> and |00> to |00>?"""
    U = spec.unitary
    want_10 = np.zeros(4, dtype=complex)
    want_10[2], want_10[1] = math.cos(theta), math.sin(theta)
    want_00 = np.array([1, 0, 0, 0], dtype=complex)
    return qcore.allclose(U[:, 2], want_10, tol) and qcore.allclose(U[:, 0], want_00, tol)


# stable names used by the command line
CATALOG = {
    "nc": {
        "class": X_NC.label,
        "noise": "g1 = 1/cos(theta), g2 = 1/sin(theta)",
        "needs_theta": True,
    },
    "conjugated": {
        "class": "c V^dag s1 V + d V^dag s2 V",
        "noise": "g1 = 1/cos(theta), g2 = 1/sin(theta)",
        "needs_theta": True,
    },
    "phase-covariant": {
        "class": X_NC.label,
        "noise": "g1 = 1/cos(theta), g2 = 1/sin(theta)",
        "needs_theta": True,
    },
    "sign-flipped": {
        "class": X_NC.label,
        "noise": "g1 = -1/cos(theta), g2 = -1/sin(theta)",
        "needs_theta": True,
    },
    "commuting": {
        "class": X_COMMUTING.label,
        "noise": "g1 = g2 = 1",
        "needs_theta": False,
    },
    "universal-marginal": {
        "class": "all states (Bloch shrink 2/3 per clone)",
        "noise": "g1 = g2 = 3/2",
        "needs_theta": False,
    },
}


def build(name: str, theta: Optional[float] = None, V=None) -> CloningMachineSpec:
    """Construct a catalog machine by its stable name."""
    if name == "nc":
        return machine_nc(theta)
    if name == "conjugated":
        return machine_conjugated(V if V is not None else FLIP, theta)
    if name == "phase-covariant":
        return machine_phase_covariant(theta)
    if name == "sign-flipped":
        return machine_sign_flipped(theta)
    if name == "commuting":
        return machine_commuting()
    if name == "universal-marginal":
        raise DomainError("universal-marginal is a marginal model, not a two-qubit unitary")
    raise DomainError(f"unknown machine {name!r}; choose from {', '.join(CATALOG)}")
