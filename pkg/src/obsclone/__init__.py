"""Cloning machines for qubit observables.

Two-qubit machines that copy the mean values of a class of observables onto
both outputs, fits of their added noises, joint-measurement uncertainty
products, and a numerical search showing that perfect cloning of a
noncommuting class is out of reach.
"""
from .kernels import BACKEND
from .machines import (
    CloningMachineSpec,
    MarginalCloneModel,
    ObservableClass,
    machine_commuting,
    machine_conjugated,
    machine_nc,
    machine_phase_covariant,
    machine_sign_flipped,
    universal_clone_marginal,
)
from .qcore import CartanParams, DomainError
from .verify import NoGoResult, NoiseReport, estimate_noises, nogo_search
from .jointmeas import UncertaintyReport, compare_with_universal, optimal_theta, uncertainty_product

__version__ = "0.1.0"
