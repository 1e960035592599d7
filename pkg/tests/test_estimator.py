from sklearn.base import clone

from gkzlog import GKZSeriesSolver
from gkzlog.families import fixture


def test_fit_attributes():
    spec = fixture("sst352")
    est = GKZSeriesSolver(beta=spec.beta, weight=spec.w, truncation=4, B=spec.B)
    assert est.fit(spec.A.tolist()) is est
    assert est.exponents_ == [(0, 0, 0, 0, 1)]
    assert len(est.solutions_) == 4 and est.verified_ and est.score() == 1.0
    assert len(est.transform()[0]["solutions"]) == 4


def test_params_and_clone():
    est = GKZSeriesSolver(beta=(1, 0, 0), weight=(1, 1, 1, 1, 0))
    assert est.get_params()["weight"] == (1, 1, 1, 1, 0)
    other = clone(est).set_params(truncation=6)
    assert other.truncation == 6 and est.truncation is None
