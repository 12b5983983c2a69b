"""Empirical checks of cloning machines: means, noise fits, covariance, no-go search."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import _serial, kernels, qcore
from .machines import (
    FLIP,
    ClassMembershipError,
    CloningMachineSpec,
    MarginalCloneModel,
)
from .qcore import DomainError, I2, dagger, pauli, tensor

# fitted shrink factors below this are treated as destroyed information
MIN_SHRINK = 1e-9

FIDUCIAL_BLOCH = np.array([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])

NOGO_CAVEAT = (
    "numerical evidence only: a positive floor found by restarted local search "
    "does not prove that no perfect cloner exists"
)
PROBE_NOTE = (
    "search restricted to the pure probe |0><0|; mixed probes give output means "
    "in the convex hull of pure-probe means"
)


class InformationDestroyedError(DomainError):
    """A clone carries no information about the class (shrink factor ~ 0)."""


@dataclass
class NoiseReport:
    g1_fit: float
    g2_fit: float
    residual_max: float
    samples_used: int
    state_independent: bool

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return _serial.dumps(self.to_dict())


@dataclass
class NoGoResult:
    best_residual: float
    best_parameters: list
    restarts: int
    evaluations: int
    seed: int
    best_by_restart: list = field(default_factory=list)
    generators: str = "sigma_1, sigma_2"
    backend: str = kernels.BACKEND
    parameter_layout: str = qcore.SU4_LAYOUT
    probe_restriction: str = PROBE_NOTE
    caveat: str = NOGO_CAVEAT

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return _serial.dumps(self.to_dict())


def sample_bloch(n_states: int, seed: int) -> np.ndarray:
    """Seeded Bloch vectors uniform in the ball."""
    return qcore.random_bloch(np.random.default_rng(seed), n_states)


def _as_state(rho_or_s) -> np.ndarray:
    a = np.asarray(rho_or_s)
    if a.shape == (3,):
        return qcore.bloch_to_state(a)
    return qcore.check_density(a)


def output_means(spec: CloningMachineSpec, rho, X, force: bool = False) -> tuple[float, float, float]:
    """Input mean and the two output means of X.

    ``rho`` may be a density matrix or a Bloch vector. With ``force=True`` the
    class-membership check is skipped (diagnostic use).
    """
    X = qcore.check_hermitian(X)
    if not force:
        c, d, res = spec.klass.coefficients(X)
        if res > 1e-10:
            raise ClassMembershipError(
                f"observable not in class {spec.klass.label!r} (residual {res:.3e})"
            )
    rho = _as_state(rho)
    R = qcore.evolve(rho, spec.probe, spec.unitary)
    return (
        qcore.expectation(rho, X),
        float(np.trace(R @ tensor(X, I2)).real),
        float(np.trace(R @ tensor(I2, X)).real),
    )


def _mean_table(spec: CloningMachineSpec, bloch: np.ndarray) -> np.ndarray:
    """Rows (xbar, x1, x2) for every (state, generator) pair."""
    rows = []
    for s in bloch:
        for X in spec.klass.generators:
            rows.append(output_means(spec, s, X))
    return np.array(rows)


@dataclass
class CloningCheck:
    ok: bool
    residual: float

    def __bool__(self):
        return self.ok


def check_cloning(spec: CloningMachineSpec, tol: float, states=100, seed: int = 0) -> CloningCheck:
    """Do both outputs reproduce the generator means on every sampled state?

    ``states`` is an array of Bloch vectors or a sample count (seeded).
    """
    if not tol > 0:
        raise DomainError("tol must be positive")
    bloch = sample_bloch(states, seed) if np.isscalar(states) else np.asarray(states, dtype=float)
    t = _mean_table(spec, bloch)
    res = float(np.max(np.abs(t[:, 1:] - t[:, :1])))
    return CloningCheck(res <= tol, res)


def _fit_noises(t: np.ndarray, n_samples: int, tol: float) -> NoiseReport:
    xbar = t[:, 0]
    den = float(np.dot(xbar, xbar))
    if den == 0:
        raise InformationDestroyedError("all sampled input means vanish; nothing to fit")
    gs = []
    for k in (1, 2):
        eta = float(np.dot(xbar, t[:, k])) / den
        if abs(eta) < MIN_SHRINK:
            raise InformationDestroyedError(
                f"output {k} shrink factor {eta:.3e}: information destroyed, added noise undefined"
            )
        gs.append(1.0 / eta)
    res = max(float(np.max(np.abs(xbar - g * t[:, k]))) for k, g in zip((1, 2), gs))
    return NoiseReport(gs[0], gs[1], res, n_samples, res <= tol)


def estimate_noises(
    spec: CloningMachineSpec, n_states: int = 50, seed: int = 0, tol: float = 1e-10, states=None
) -> NoiseReport:
    """Least-squares fit of the added noises g1, g2.

    The fit is done on the shrink factors 1/g, then inverted. ``states``
    (Bloch vectors) replaces the seeded sample when given.
    """
    if states is None:
        if n_states < 4:
            raise DomainError("n_states must be >= 4 (four affinely independent states)")
        bloch = sample_bloch(n_states, seed)
    else:
        bloch = np.asarray(states, dtype=float).reshape(-1, 3)
    return _fit_noises(_mean_table(spec, bloch), len(bloch), tol)


def estimate_marginal_noises(model: MarginalCloneModel, n_states: int = 50, seed: int = 0, tol: float = 1e-10) -> NoiseReport:
    """Noise fit for a per-clone shrink model on sigma_1, sigma_2."""
    if n_states < 4:
        raise DomainError("n_states must be >= 4 (four affinely independent states)")
    bloch = sample_bloch(n_states, seed)
    rows = []
    for s in bloch:
        out = model.apply(s)
        for j in (0, 1):
            rows.append((s[j], out[j], out[j]))
    return _fit_noises(np.array(rows), n_states, tol)


def conjugate_machine(spec: CloningMachineSpec, W) -> CloningMachineSpec:
    """(W^dag x W^dag) U (W x I) on the class W^dag X W."""
    W = qcore.check_unitary(W)
    if W.shape != (2, 2):
        raise DomainError("W must be a 2x2 unitary")
    Wd = dagger(W)
    return CloningMachineSpec(
        tensor(Wd, Wd) @ spec.unitary @ tensor(W, I2),
        spec.probe,
        spec.klass.conjugated(W),
        spec.predicted_g1,
        spec.predicted_g2,
        name=f"{spec.name} (conjugated)",
        theta=spec.theta,
    )


def check_covariance(spec: CloningMachineSpec, W, n_states: int = 50, seed: int = 0, tol: float = 1e-9) -> bool:
    base = estimate_noises(spec, n_states, seed, tol)
    moved = estimate_noises(conjugate_machine(spec, W), n_states, seed, tol)
    return bool(
        base.state_independent
        and moved.state_independent
        and abs(moved.g1_fit - base.g1_fit) <= tol
        and abs(moved.g2_fit - base.g2_fit) <= tol
    )


def nccm_residual(p, g1: float, g2: float) -> float:
    """Largest operator-norm violation of the four operator equations

        g1 Tr_2[(I x rho_p) U^dag (s_k x I) U] = s_k
        g2 Tr_2[(I x rho_p) U^dag (I x s_k) U] = s_k     (k = 1, 2)

    for U = (I x F) U_E(p) and rho_p = |0><0|.
    """
    U = tensor(I2, FLIP) @ qcore.cartan_kernel(p)
    Ud = dagger(U)
    probe = tensor(I2, qcore.KET0)

    def heis(O):
        return qcore.partial_trace(probe @ Ud @ O @ U, keep="signal")

    worst = 0.0
    for k in (1, 2):
        s = pauli(k)
        for g, O in ((g1, tensor(s, I2)), (g2, tensor(I2, s))):
            worst = max(worst, float(np.linalg.norm(g * heis(O) - s, 2)))
    return worst


def machine_objective(U, generators=None) -> float:
    """No-go objective evaluated by full density-matrix simulation of a 4x4 unitary."""
    gens = (pauli(1), pauli(2)) if generators is None else generators
    total = 0.0
    for s in FIDUCIAL_BLOCH:
        rho = qcore.bloch_to_state(s)
        R = qcore.evolve(rho, qcore.KET0, U)
        for X in gens:
            m = qcore.expectation(rho, X)
            m1 = float(np.trace(R @ tensor(X, I2)).real)
            m2 = float(np.trace(R @ tensor(I2, X)).real)
            total += (m1 - m) ** 2 + (m2 - m) ** 2
    return total


SWAP_PARAMETERS = np.array([math.pi / 2] * 3 + [0.0] * 12)


def nogo_search(
    restarts: int = 200,
    seed: int = 0,
    step: float = 0.5,
    maxiter: int = 2000,
    xtol: float = 1e-9,
    generators: Optional[Sequence] = None,
    start=None,
    workers: int = 1,
) -> NoGoResult:
    """Restarted simplex descent for a perfect cloner over all of SU(4).

    Restart ``r`` starts uniformly in [-pi, pi]^15 from the stream seeded with
    ``seed + r``; ``start`` overrides the first restart's starting point.
    """
    if restarts < 1:
        raise DomainError("restarts must be >= 1")
    gens = np.array([pauli(1), pauli(2)] if generators is None else generators, dtype=complex)
    if generators is None:
        label = "sigma_1, sigma_2"
    elif all(qcore.allclose(g, pauli(3)) for g in gens):
        label = "sigma_3, sigma_3 (commuting diagnostic)"
    else:
        label = "custom"

    def run(r):
        if r == 0 and start is not None:
            x0 = np.asarray(start, dtype=float)
        else:
            x0 = np.random.default_rng(seed + r).uniform(-math.pi, math.pi, 15)
        x, f, _, nfev = kernels.nelder_mead(x0, gens, step, maxiter, xtol)
        if not math.isfinite(f):
            raise RuntimeError(f"non-finite objective in restart {r}")
        return x, f, nfev

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(run, range(restarts)))
    else:
        results = [run(r) for r in range(restarts)]

    best_x, best_f, history, evals = None, math.inf, [], 0
    for x, f, nfev in results:
        evals += nfev
        if f < best_f:
            best_x, best_f = x, f
        history.append(best_f)
    return NoGoResult(
        best_residual=float(best_f),
        best_parameters=[float(v) for v in best_x],
        restarts=restarts,
        evaluations=int(evals),
        seed=int(seed),
        best_by_restart=history,
        generators=label,
    )
