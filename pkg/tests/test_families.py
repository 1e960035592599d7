import pytest

from gkzlog.exceptions import UnknownFixture
from gkzlog.families import (aomoto_weight, family, fixture, is_staircase_weight, make_aomoto,
                             make_fc)
from gkzlog.lattice import kernel_basis
from gkzlog.perturb import is_lattice_basis


@pytest.mark.parametrize("m,l", [(2, 2), (2, 3), (2, 4), (3, 3), (3, 4)])
def test_aomoto_shape(m, l):
    spec = make_aomoto(m, l)
    assert spec.A.n == m * l and spec.A.d == m + l - 1
    assert len(spec.B) == (m - 1) * (l - 1)
    assert is_lattice_basis(spec.B, kernel_basis(spec.A))
    assert is_staircase_weight(aomoto_weight(m, l))
    assert spec.A.labels[0] == f"(1,{m + 1})"


def test_staircase_check_rejects_additive_ties():
    w = {(1, 3): 2, (1, 4): 1, (2, 3): 1, (2, 4): 1}
    assert not is_staircase_weight(w)


@pytest.mark.parametrize("m", [2, 3, 4, 5])
def test_fc_shape(m):
    spec = make_fc(m)
    assert spec.A.n == 2 * m and spec.A.d == m + 1
    assert is_lattice_basis(spec.B, kernel_basis(spec.A))
    sums = [spec.w[i] + spec.w[m + i] for i in range(m)]
    assert sums == sorted(sums, reverse=True) and len(set(sums)) == m
    assert spec.expected["dim"] == 2 ** (m - 1)


def test_fixture_lookup():
    assert fixture("sst352").A.n == 5
    assert family("aomoto", 2, 4).params == {"m": 2, "l": 4}
    assert family("fc", 3).name == "fc"
    with pytest.raises(UnknownFixture):
        fixture("nope")
    with pytest.raises(ValueError):
        family("aomoto", 2)


@pytest.mark.parametrize("name", ["sst352", "noncm", "sst363"])
def test_fixture_data_consistent(name, get_gb):
    spec = fixture(name)
    assert spec.A.apply(spec.v) == tuple(spec.beta)
    for b in spec.B:
        assert not any(spec.A.apply(b))
    assert get_gb(name).generic


@pytest.mark.parametrize("name", ["aomoto2x2", "aomoto2x3", "aomoto2x4", "aomoto3x3",
                                  "fc2", "fc3", "fc4"])
def test_family_expectations(name, get_spec, get_gb, get_data):
    spec, gb, data = get_spec(name), get_gb(name), get_data(name)
    assert gb.generic
    assert len(data.PB_perp) == spec.expected["dim"]
    leads = sorted(g.lead_monomial(data.P_B.order) for g in data.P_B.gb)
    assert leads == sorted(map(tuple, spec.expected["P_B_monomials"]))
    assert all(len(g.terms) == 1 for g in data.P_B.gb)
    assert sorted(data.PB_perp.exponents) == sorted(map(tuple, spec.expected["PB_perp_monomials"]))
    if "groebner_size" in spec.expected:
        assert len(gb) == spec.expected["groebner_size"]


def test_bundle_json():
    out = make_aomoto(2, 4).to_json()
    assert out["family"] == "aomoto" and out["beta"] == ["0"] * 5
    assert out["expected"]["dim"] == 4
