import math

import pytest

import ssflab

SMALL = {"L": [6.0, 8.0], "t": [0.5], "mc": {"n_samples": 4000}}


def test_config_round_trip():
    cfg = ssflab.default_config()
    assert ssflab.normalize_config(cfg) == cfg
    assert ssflab.config_hash(cfg) == ssflab.config_hash(None)
    assert ssflab.config_hash({"h": 0.25}) != ssflab.config_hash(None)


def test_bad_config_raises_value_error():
    with pytest.raises(ValueError, match="h"):
        ssflab.count(8.0, 1.0, {"h": -1})
    with pytest.raises(ssflab.ConfigError):
        ssflab.count(8.0, 1.0, {"no_such_key": 1})


def test_count_matches_spectra():
    s = ssflab.spectra(8.0, SMALL)
    assert s["H0"] == sorted(s["H0"])
    for E in (0.3, 1.7, 3.1):
        c = ssflab.count(8.0, E, SMALL)
        assert c["count_H0"] == sum(1 for x in s["H0"] if x <= E)
        assert c["count_H1"] == sum(1 for x in s["H1"] if x <= E)
        assert c["xi"] == c["count_H0"] - c["count_H1"]


def test_ssf_curve_vanishes_without_perturbation():
    curve = ssflab.ssf_curve(8.0, {"V": {"amplitude": 0.0}})
    assert all(v == 0 for v in curve["values"])


def test_laplace_mc_agrees_with_trace():
    t = 0.5
    est = ssflab.laplace_mc(t, SMALL, L=8.0)
    exact = ssflab.trace_laplace(8.0, t, SMALL)
    assert est["source"] == "mc-finite"
    assert abs(est["mean"] - exact) < 5 * est["std_error"] + 1e-3
    inf = ssflab.laplace_mc(t, SMALL)
    assert math.isinf(inf["L"])


def test_kolmogorov_tail_limits():
    assert ssflab.kolmogorov_tail(0.0, 1.0) == pytest.approx(1.0)
    assert ssflab.kolmogorov_tail(10.0, 1.0) < 1e-20


def test_run_writes_tables(tmp_path):
    assert "ssf" in ssflab.subcommands()
    assert ssflab.run("count", tmp_path, SMALL) == 0
    assert (tmp_path / "count.csv").exists()
    assert (tmp_path / "manifest.json").exists()


def test_validate_single_criterion(tmp_path):
    rows = ssflab.validate(tmp_path, only=[8])
    assert [r["id"] for r in rows] == [8]
    assert rows[0]["passed"]
