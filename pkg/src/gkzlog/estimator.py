"""Estimator-style facade: configure, ``fit`` on a matrix, read fitted attributes."""
from __future__ import annotations

from sklearn.base import BaseEstimator

from .lattice import AMatrix
from .logseries import fundamental_system
from .toricgb import toric_groebner
from .validation import check_int_matrix


class GKZSeriesSolver(BaseEstimator):
    """Fundamental system of logarithmic series for H_A(beta).

    ``fit(A)`` takes the integer matrix A (nested lists or an AMatrix) and
    sets ``groebner_``, ``fundamental_system_``, ``exponents_``,
    ``solutions_`` and ``verified_``. Parameters follow the estimator
    conventions, so ``get_params``/``set_params``/``clone`` work.
    """

    def __init__(self, beta=None, weight=None, truncation=None, radius=None, B=None):
        self.beta = beta
        self.weight = weight
        self.truncation = truncation
        self.radius = radius
        self.B = B

    def fit(self, X, y=None):
        A = X if isinstance(X, AMatrix) else AMatrix(check_int_matrix(X, "A"))
        if self.beta is None or self.weight is None:
            raise ValueError("beta and weight must be set before fit")
        self.A_ = A
        self.groebner_ = toric_groebner(A, self.weight)
        self.fundamental_system_ = fundamental_system(
            A, self.beta, self.weight, self.truncation, self.radius, self.B, self.groebner_)
        self.exponents_ = [e.v for e in self.fundamental_system_.exponents]
        self.solutions_ = self.fundamental_system_.solutions
        self.verified_ = self.fundamental_system_.passed
        return self

    def transform(self, X=None):
        """JSON-ready description of every fitted solution."""
        return [e.to_json() for e in self.fundamental_system_.exponents]

    def score(self, X=None, y=None):
        """Fraction of emitted series whose annihilation check passed."""
        reports = [r for e in self.fundamental_system_.exponents for r in e.verification]
        return sum(r.passed for r in reports) / len(reports) if reports else 0.0
