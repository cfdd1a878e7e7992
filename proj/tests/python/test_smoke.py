"""Smoke tests for the python bindings: catalog, solve, metrics, simulator."""

import math

import pytest

import mfgepi


def short(name, horizon=20.0):
    s = mfgepi.builtin_scenario(name)
    s.horizon = horizon
    return s


def test_catalog_is_complete():
    names = mfgepi.catalog_scenario_names()
    assert len(names) == 14
    assert "permissive" in names
    assert "sird-baseline" in names
    pairs = mfgepi.catalog_pair_names()
    assert len(pairs) == 13
    assert "permissive-vs-strict" in pairs


def test_unknown_names_raise_config_error():
    with pytest.raises(mfgepi.ConfigError):
        mfgepi.builtin_scenario("no-such-scenario")
    with pytest.raises(mfgepi.ConfigError):
        mfgepi.builtin_pair("no-such-pair")
    assert issubclass(mfgepi.ConfigError, ValueError)


def test_scenario_overrides_round_trip():
    s = short("permissive")
    assert s.variant == "sir"
    assert s.n_groups == 6
    assert s.group_labels == ["LF", "LI", "MF", "MI", "HF", "HI"]
    assert s.group_index("HI") == 5
    s.dt = 0.5
    s.epsilon = 1e-5
    s.integrator = "rk4"
    assert s.dt == 0.5
    assert s.integrator == "rk4"
    assert s.patch_length is None
    s.patch_length = 10.0
    assert s.patch_length == 10.0
    text = s.to_json()
    clone = mfgepi.scenario_from_json(text)
    assert clone.to_json() == text


def test_solve_permissive_short():
    s = short("permissive")
    sol = mfgepi.solve(s)
    assert sol.converged
    assert sol.n_nodes == 201
    assert sol.group_labels == s.group_labels

    # each (node, group) distribution stays a simplex
    for g in range(s.n_groups):
        series = [sol.proportion(g, c) for c in ("S", "I", "R", "D")]
        for i in range(sol.n_nodes):
            total = sum(path[i] for path in series)
            assert math.isclose(total, 1.0, abs_tol=1e-8)

    # label and index access agree, and the epidemic actually moves
    inf = sol.infected("LI")
    assert inf == sol.infected(1)
    assert max(inf) > inf[0] > 0.0
    soc = sol.socialization("LF")
    assert min(soc) < 1.0
    assert all(0.0 <= a <= 1.0 for a in soc)
    assert len(sol.times()) == sol.n_nodes
    assert sol.times()[-1] == pytest.approx(20.0)


def test_metrics_dict_shape():
    s = short("permissive")
    sol = mfgepi.solve(s)
    rep = mfgepi.run_metrics(s, sol)
    assert rep["scenario"] == "permissive"
    assert rep["variant"] == "sir"
    assert rep["converged"] is True
    li = rep["groups"]["LI"]["infected"]
    assert li["peak"] == pytest.approx(max(sol.infected("LI")))
    assert "LI-HF" in rep["disparities"]["infected"]


def test_comparison_report_shape():
    pair = mfgepi.builtin_pair("permissive-vs-strict")
    pair.baseline.horizon = 20.0
    pair.treatment.horizon = 20.0
    base = mfgepi.solve(pair.baseline)
    treat = mfgepi.solve(pair.treatment)
    rep = mfgepi.comparison_report(pair, base, treat)
    assert rep["pair"] == "permissive-vs-strict"
    assert ["LF", "LF"] in rep["group_map"]
    assert rep["peak_differences"]["infected"]["LF"] >= 0.0


def test_finite_population_smoke():
    s = short("permissive")
    sol = mfgepi.solve(s)
    rep = mfgepi.simulate_finite_n(sol, s, n_agents=2000, n_replicas=4, seed=7)
    assert rep.n_agents == 2000
    assert sum(rep.group_sizes) == 2000
    assert rep.majorant_violations == 0
    assert rep.total_events > 0
    assert 0.0 < rep.sup_deviation < 0.2
    again = mfgepi.simulate_finite_n(sol, s, n_agents=2000, n_replicas=4, seed=7)
    assert again.sup_deviation == rep.sup_deviation


def test_artifacts_written(tmp_path):
    s = short("permissive")
    sol = mfgepi.solve(s)
    files = mfgepi.write_run_artifacts(str(tmp_path), s, sol, "pytest")
    assert "trajectories.csv" in files
    assert "metrics.json" in files
    assert "manifest.json" in files
    for name in files:
        assert (tmp_path / name).is_file()
