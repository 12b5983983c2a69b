"""Joint measurement of two noncommuting observables through a cloner.

Measure generator A on clone 1 and generator B on clone 2, rescale each
outcome by its added noise g, and look at the variances of the rescaled
estimators.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from . import _serial, qcore
from .machines import CloningMachineSpec, machine_nc, universal_clone_marginal
from .qcore import DomainError, I2, tensor
from .verify import estimate_noises

# |product - bound| tolerance for the saturation flag
SATURATION_TOL = 1e-9
THETA_CLIP = 1e-6
PAPER_UNIVERSAL_PRODUCT = 4.5

CSV_COLUMNS = ("theta", "g1", "g2", "dm1", "dm2", "product", "bound", "saturated")


@dataclass
class UncertaintyReport:
    dm1: float
    dm2: float
    product: float
    bound: Optional[float]
    saturated: bool
    theta: Optional[float]
    bloch: list
    g1: float
    g2: float
    di1: float
    di2: float

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return _serial.dumps(self.to_dict())

    def csv_row(self) -> str:
        cells = [
            "" if self.theta is None else _serial.fmt_float(self.theta),
            _serial.fmt_float(self.g1),
            _serial.fmt_float(self.g2),
            _serial.fmt_float(self.dm1),
            _serial.fmt_float(self.dm2),
            _serial.fmt_float(self.product),
            "" if self.bound is None else _serial.fmt_float(self.bound),
            "true" if self.saturated else "false",
        ]
        return ",".join(cells)


def csv_text(reports) -> str:
    """Header plus one row per report, LF line endings."""
    return "\n".join([",".join(CSV_COLUMNS)] + [r.csv_row() for r in reports]) + "\n"


def measured_variance(g: float, clone_mean: float) -> float:
    """Variance of the rescaled estimator g * (+-1 outcome on the clone)."""
    if abs(clone_mean) > 1 + qcore.ATOL:
        raise DomainError(f"clone mean {clone_mean} is not the mean of a +-1 observable")
    if abs(g) < 1 - qcore.ATOL:
        raise DomainError(f"added noise must satisfy |g| >= 1, got {g}")
    return g * g * max(0.0, 1.0 - clone_mean * clone_mean)


def joint_bound(di1: float, di2: float) -> float:
    """(sqrt(di1 di2) + 1)^2."""
    return (math.sqrt(di1 * di2) + 1.0) ** 2


def product_formula(theta: float, di1: float, di2: float) -> float:
    """(tan^2 + di1)(cot^2 + di2) for the nc machine."""
    t2 = math.tan(theta) ** 2
    return (t2 + di1) * (1.0 / t2 + di2)


def optimal_theta(di1: float, di2: float) -> float:
    """Angle with tan^4 = di1/di2, where the uncertainty product meets its bound."""
    if not (di1 > 0 and di2 > 0):
        raise DomainError(
            f"degenerate intrinsic variances ({di1}, {di2}): an eigenstate of a generator "
            "has no finite optimal trade-off"
        )
    return math.atan((di1 / di2) ** 0.25)


def uncertainty_product(
    spec: CloningMachineSpec,
    rho,
    n_states: int = 50,
    seed: int = 0,
    diagnostic: bool = False,
) -> UncertaintyReport:
    """Measured variances of A on clone 1 and B on clone 2 after rescaling by fitted g.

    Without ``diagnostic`` the class must be generated by an anticommuting
    Pauli-like pair; with it, any class is accepted and no bound is reported
    for commuting generators.
    """
    pauli_pair = spec.klass.is_pauli_pair()
    if not pauli_pair and not diagnostic:
        raise DomainError(
            f"class {spec.klass.label!r} is not generated by a noncommuting Pauli-equivalent pair"
        )
    a = np.asarray(rho)
    rho = qcore.bloch_to_state(a) if a.shape == (3,) else qcore.check_density(a)
    noise = estimate_noises(spec, n_states, seed)
    A, B = spec.klass.generators
    R = qcore.evolve(rho, spec.probe, spec.unitary)
    m1 = float(np.trace(R @ tensor(A, I2)).real)
    m2 = float(np.trace(R @ tensor(I2, B)).real)
    dm1 = measured_variance(noise.g1_fit, m1)
    dm2 = measured_variance(noise.g2_fit, m2)
    di1, di2 = qcore.variance(rho, A), qcore.variance(rho, B)
    product = dm1 * dm2
    bound = joint_bound(di1, di2) if pauli_pair else None
    return UncertaintyReport(
        dm1=dm1,
        dm2=dm2,
        product=product,
        bound=bound,
        saturated=bound is not None and abs(product - bound) <= SATURATION_TOL,
        theta=spec.theta,
        bloch=[float(v) for v in qcore.state_to_bloch(rho)],
        g1=noise.g1_fit,
        g2=noise.g2_fit,
        di1=di1,
        di2=di2,
    )


def theta_grid(theta_min: float, theta_max: float, steps: int) -> np.ndarray:
    if steps < 1:
        raise DomainError("steps must be >= 1")
    lo, hi = THETA_CLIP, math.pi / 2 - THETA_CLIP
    if not (lo <= theta_min <= hi and lo <= theta_max <= hi) or theta_max < theta_min:
        raise DomainError(
            f"theta grid [{theta_min}, {theta_max}] must lie inside [{lo:g}, pi/2 - {lo:g}]: "
            "added noise diverges at the boundary"
        )
    if steps == 1:
        return np.array([float(theta_min)])
    return np.linspace(theta_min, theta_max, steps)


def sweep(build, thetas, rho, n_states: int = 50, seed: int = 0) -> list:
    """One report per angle, sorted by angle."""
    return [uncertainty_product(build(t), rho, n_states, seed) for t in sorted(float(t) for t in thetas)]


@dataclass
class Comparison:
    bloch: list
    di1: float
    di2: float
    theta_opt: float
    observable_product: float
    observable_shrink: tuple
    universal_product: float
    universal_shrink: float
    paper_universal_product: float
    universal_discrepancy: bool

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return _serial.dumps(self.to_dict())

    def table(self) -> str:
        f = _serial.fmt_float
        rows = [
            ("input Bloch vector", ", ".join(f(v) for v in self.bloch)),
            ("intrinsic variances", f"{f(self.di1)}, {f(self.di2)}"),
            ("optimal theta", f(self.theta_opt)),
            ("observable cloner product", f(self.observable_product)),
            ("observable cloner shrink (s1, s2)", ", ".join(f(v) for v in self.observable_shrink)),
            ("universal cloner product (marginal model)", f(self.universal_product)),
            ("universal cloner shrink", f(self.universal_shrink)),
            ("universal cloner product (published claim)", f(self.paper_universal_product)),
            ("universal discrepancy flag", "set" if self.universal_discrepancy else "clear"),
        ]
        width = max(len(k) for k, _ in rows)
        return "".join(f"{k.ljust(width)}  {v}\n" for k, v in rows)


def compare_with_universal(rho, n_states: int = 50, seed: int = 0) -> Comparison:
    """Observable cloner at its optimal angle vs. the universal state cloner.

    Both universal numbers are reported: the marginal-estimator product and the
    published 9/2; the flag is set when they differ.
    """
    a = np.asarray(rho)
    rho = qcore.bloch_to_state(a) if a.shape == (3,) else qcore.check_density(a)
    s = qcore.state_to_bloch(rho)
    di1, di2 = qcore.variance(rho, qcore.pauli(1)), qcore.variance(rho, qcore.pauli(2))
    if abs(di1 * di2 - 1) > 1e-9:
        raise DomainError(
            f"input is not minimum-uncertainty: intrinsic variance product {di1 * di2:.12g} != 1"
        )
    th = optimal_theta(di1, di2)
    rep = uncertainty_product(machine_nc(th), rho, n_states, seed)
    uni = universal_clone_marginal(s)
    g_uni = 1.0 / uni["shrink_factor"]
    uprod = measured_variance(g_uni, uni["clone_means"][0]) * measured_variance(g_uni, uni["clone_means"][1])
    return Comparison(
        bloch=[float(v) for v in s],
        di1=di1,
        di2=di2,
        theta_opt=th,
        observable_product=rep.product,
        observable_shrink=(1.0 / rep.g1, 1.0 / rep.g2),
        universal_product=uprod,
        universal_shrink=uni["shrink_factor"],
        paper_universal_product=PAPER_UNIVERSAL_PRODUCT,
        universal_discrepancy=abs(uprod - PAPER_UNIVERSAL_PRODUCT) > SATURATION_TOL,
    )
