import numpy as np
import pytest

from sliceconf.errors import CatalogError, ConfigError
from sliceconf.oracle import frame_geometry
from sliceconf.presets import build_scenario, describe_preset, list_presets, load_preset, pole_margin

NAMES = ["de_sitter_slice", "einstein_negrho", "flat", "hyperbolic", "lemma_slice", "ltb_like", "unit_s3"]


def test_catalog_listing():
    assert list_presets() == NAMES
    d = describe_preset("unit_s3")
    assert d["tags"] == ["compact", "einstein", "physical", "time_symmetric"]
    with pytest.raises(CatalogError):
        describe_preset("torus")
    with pytest.raises(CatalogError):
        load_preset("torus")


@pytest.mark.parametrize("name", NAMES)
def test_every_preset_loads_with_consistent_tags(name):
    p = load_preset(name, n=201)
    print(name, sorted(p.tags))
    assert p.grid.n == 201
    assert sorted(p.tags) == describe_preset(name)["tags"]


@pytest.mark.parametrize("name", ["unit_s3", "flat", "hyperbolic", "de_sitter_slice", "einstein_negrho"])
def test_state_formulas_agree_with_metric(name):
    p = load_preset(name, n=401)
    fg = frame_geometry(p.metric)
    r = p.ricci()
    err = max((r.alpha - fg.alpha).max_abs(), (r.beta - fg.beta).max_abs(),
              (p.state.phi - fg.phi_sheet).max_abs())
    print(name, err)
    assert err < 1e-6


def test_overrides_rederive_tags():
    p = load_preset("unit_s3", n=101, overrides={"state": {"Theta": 1.0}})
    print(sorted(p.tags))
    assert "time_symmetric" not in p.tags and "physical" not in p.tags


def test_pole_margin_from_environment(monkeypatch):
    monkeypatch.setenv("SLICECONF_EPS", "0.1")
    assert pole_margin() == 0.1
    assert load_preset("unit_s3", n=64).grid.chi_min == pytest.approx(0.1)
    monkeypatch.setenv("SLICECONF_EPS", "lots")
    with pytest.raises(ConfigError):
        pole_margin()
    monkeypatch.setenv("SLICECONF_EPS", "2")
    with pytest.raises(ConfigError):
        pole_margin()
    assert pole_margin(0.2) == 0.2


def test_custom_scenario():
    p = build_scenario("mine", {"domain": [0.5, 1.5], "state": {"rho": 1.0, "phi": "1/chi"}}, n=64)
    assert p.grid.chi_min == 0.5 and p.metric is None
    assert np.allclose(p.phi_sheet().values, 1 / p.grid.chi)
    with pytest.raises(CatalogError):
        build_scenario("empty", {}, n=64)
    with pytest.raises(CatalogError):
        build_scenario("open", {"metric": {"F": "1 + chi", "compact": True}}, n=64)
