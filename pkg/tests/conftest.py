import warnings

import pytest
from hypothesis import HealthCheck, settings

from gkzlog.families import fixture, make_aomoto, make_fc
from gkzlog.logseries import fundamental_system
from gkzlog.perturb import perturbation_data
from gkzlog.toricgb import toric_groebner

settings.register_profile("ci", max_examples=60, deadline=None, derandomize=True,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("ci")

_cache = {}


def _memo(key, build):
    if key not in _cache:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            _cache[key] = build()
    return _cache[key]


def spec_for(name):
    if name.startswith("aomoto"):
        m, l = map(int, name[len("aomoto"):].split("x"))
        return make_aomoto(m, l)
    if name.startswith("fc"):
        return make_fc(int(name[2:]))
    return fixture(name)


def groebner_for(name):
    spec = spec_for(name)
    return _memo(("gb", name), lambda: toric_groebner(spec.A, spec.w))


def data_for(name):
    spec = spec_for(name)
    return _memo(("data", name), lambda: perturbation_data(
        spec.A, spec.beta, groebner_for(name), spec.v, spec.B))


def system_for(name):
    spec = spec_for(name)
    return _memo(("fs", name), lambda: fundamental_system(
        spec.A, spec.beta, spec.w, B=spec.B, gb=groebner_for(name)))


@pytest.fixture(scope="session")
def get_spec():
    return spec_for


@pytest.fixture(scope="session")
def get_gb():
    return groebner_for


@pytest.fixture(scope="session")
def get_data():
    return data_for


@pytest.fixture(scope="session")
def get_system():
    return system_for
