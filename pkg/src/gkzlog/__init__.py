"""Logarithmic series solutions of regular A-hypergeometric systems."""
from .exceptions import (AssumptionViolated, GKZError, MathematicalPreconditionError,
                         NonGenericWeight, NotABasis, QNotInPerp)
from .families import FamilySpec, family, fixture, make_aomoto, make_fc
from .indicial import fake_exponents, standard_pairs
from .lattice import AMatrix, kernel_basis
from .logseries import (LogSeries, fundamental_system, series_solution, starting_term,
                        verify_annihilation)
from .perturb import exponent_test, perturbation_data
from .polycore import SparsePoly
from .toricgb import toric_groebner

__version__ = "0.1.0"


def __getattr__(name):
    # keep scikit-learn off the import path unless the estimator is used
    if name == "GKZSeriesSolver":
        from .estimator import GKZSeriesSolver
        return GKZSeriesSolver
    raise AttributeError(name)


__all__ = [
    "AMatrix", "AssumptionViolated", "FamilySpec", "GKZError", "GKZSeriesSolver", "LogSeries",
    "MathematicalPreconditionError", "NonGenericWeight", "NotABasis", "QNotInPerp",
    "SparsePoly", "exponent_test", "fake_exponents", "family", "fixture",
    "fundamental_system", "kernel_basis", "make_aomoto", "make_fc", "perturbation_data",
    "series_solution", "standard_pairs", "starting_term", "toric_groebner",
    "verify_annihilation",
]
