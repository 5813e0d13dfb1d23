"""Fermionic linear optics with noisy ancillas.

Dense and correlation-matrix simulators for adaptive fermionic linear optics,
plus an exact certifier deciding whether a four-mode ancilla state is a convex
mixture of pure Gaussian states.
"""
from . import certifier, densekit, fock, gaussian, simulator
from .certifier import (
    CertificateReport,
    ConcurrenceCertificate,
    GaussianDecomposition,
    certify,
    concurrence_mixed,
    concurrence_pure,
    distance_bounds,
    fidelity_gauss,
    optimal_decomposition,
    schmidt_pure,
    theta,
)
from .errors import FloError, NotConvexGaussian
from .settings import Tolerances, get_tolerances, tolerances
from .simulator import (
    Ancilla,
    Circuit,
    Conditional,
    Evolve,
    Measure,
    outcome_distribution,
    run_cov,
    run_dense,
    run_with_ancilla,
)

__version__ = "0.1.0"

__all__ = [
    "Ancilla",
    "CertificateReport",
    "Circuit",
    "ConcurrenceCertificate",
    "Conditional",
    "Evolve",
    "FloError",
    "GaussianDecomposition",
    "Measure",
    "NotConvexGaussian",
    "Tolerances",
    "certifier",
    "certify",
    "concurrence_mixed",
    "concurrence_pure",
    "densekit",
    "distance_bounds",
    "fidelity_gauss",
    "fock",
    "gaussian",
    "get_tolerances",
    "optimal_decomposition",
    "outcome_distribution",
    "run_cov",
    "run_dense",
    "run_with_ancilla",
    "schmidt_pure",
    "simulator",
    "theta",
    "tolerances",
]
