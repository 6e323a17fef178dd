"""Tests of scenario handling, sweep execution, and serialization."""

import csv
import json
import math

import numpy as np
import pytest

from shelvesim.sweep import (
    GridSpec,
    ScenarioValidationError,
    SweepResult,
    emit_results,
    load_scenario,
    preset_names,
    run_sweep,
    scenario_from_dict,
    scenario_to_dict,
    default_worker_count,
)

TINY_SCENARIO = {
    "name": "tiny",
    "model": "lambda",
    "fixed": {"omega": 10.0},
    "sweep": [
        {"param": "kappa", "scale": "log", "min": 0.1, "max": 10.0, "count": 3},
        {"param": "omega_r", "scale": "log", "min": 0.01, "max": 0.1, "count": 2},
    ],
    "quantities": ["g2"],
    "solver": {"n_max": 3},
}


class TestScenarioValidation:
    def test_all_presets_load(self):
        expected = {
            "fig2a", "fig2b", "fig2cd", "fig3", "fig3a", "fig3c", "fig4",
            "fig5b", "fig5c", "fig5e", "fig5f", "fig6a", "fig6b", "fig6c", "fig7",
        }
        assert set(preset_names()) == expected
        for name in preset_names():
            load_scenario(name)

    def test_fig4_contents(self):
        s = load_scenario("fig4")
        assert s.model == "lambda"
        assert s.fixed_map == {"omega": 100.0, "omega_r": 0.1}
        assert [p for p, _ in s.sweep_axes] == ["kappa"]
        assert s.sweep_axes[0][1].scale == "log"
        assert set(s.quantities) == {"g2", "g3", "g4"}

    def test_fig7_contents_and_grid_hits_sidebands(self):
        s = load_scenario("fig7")
        assert s.fixed_map["omega"] == 1e4 and s.fixed_map["omega_r"] == 10.0
        assert [p for p, _ in s.sweep_axes] == ["delta_b"]
        pts = s.sweep_axes[0][1].points()
        obar = math.sqrt(1e8 + 100.0)
        for target in (-obar, 0.0, obar):
            assert np.min(np.abs(pts - target)) < 1e-9 * obar

    def test_unknown_parameter_named_in_error(self):
        bad = dict(TINY_SCENARIO, fixed={"omega": 1.0, "omega_r": 0.1})
        with pytest.raises(ScenarioValidationError, match="omega_r"):
            scenario_from_dict(bad)

    def test_errors_are_exhaustive_not_first_failure(self):
        bad = {
            "name": "",
            "model": "nope",
            "fixed": {"bogus": 1.0},
            "sweep": [{"param": "kappa", "scale": "sideways", "min": 1.0, "max": 0.1, "count": 0}],
            "quantities": ["g1", "mystery"],
        }
        with pytest.raises(ScenarioValidationError) as err:
            scenario_from_dict(bad)
        text = str(err.value)
        for fragment in ("name", "model", "bogus", "sideways", "exceeds", "count",
                         "g1", "mystery", "omega"):
            assert fragment in text, fragment

    def test_axis_must_differ_from_fixed(self):
        bad = dict(TINY_SCENARIO)
        bad["sweep"] = [{"param": "omega", "scale": "log", "min": 1, "max": 10, "count": 2}]
        bad["fixed"] = {"omega": 10.0, "omega_r": 0.1}
        with pytest.raises(ScenarioValidationError, match="also fixed"):
            scenario_from_dict(bad)

    def test_curve_and_point_quantities_do_not_mix(self):
        bad = dict(TINY_SCENARIO, quantities=["g2", "g2_tau"])
        with pytest.raises(ScenarioValidationError, match="mixed"):
            scenario_from_dict(bad)

    def test_cavity_needs_coupling(self):
        bad = dict(TINY_SCENARIO, model="cavity")
        with pytest.raises(ScenarioValidationError, match="g_c"):
            scenario_from_dict(bad)

    def test_three_axes_rejected(self):
        bad = dict(TINY_SCENARIO)
        bad["sweep"] = TINY_SCENARIO["sweep"] + [
            {"param": "delta_b", "scale": "linear", "min": 0, "max": 1, "count": 2}
        ]
        with pytest.raises(ScenarioValidationError, match="at most 2"):
            scenario_from_dict(bad)

    def test_file_round_trip(self, tmp_path):
        s = load_scenario("fig2a")
        path = tmp_path / "fig2a.json"
        path.write_text(json.dumps(scenario_to_dict(s)))
        again = load_scenario(path)
        assert again == s

    def test_missing_source_lists_presets(self, tmp_path):
        with pytest.raises(ScenarioValidationError, match="fig2a"):
            load_scenario(tmp_path / "nope.json")


class TestGridSpec:
    def test_log_points(self):
        g = GridSpec("log", 1e-2, 1e2, 5)
        np.testing.assert_allclose(g.points(), [1e-2, 1e-1, 1, 10, 100], rtol=1e-12)

    def test_single_point(self):
        assert GridSpec("linear", 3.0, 9.0, 1).points().tolist() == [3.0]


class TestRunSweep:
    def test_row_count_is_grid_product(self):
        result = run_sweep(scenario_from_dict(TINY_SCENARIO), workers=1)
        assert len(result.rows) == 6
        assert result.columns[:2] == ["kappa", "omega_r"]
        assert len(result.wall_times) == 6

    def test_worker_count_does_not_change_bytes(self, tmp_path):
        s = scenario_from_dict(TINY_SCENARIO)
        paths = []
        for i, workers in enumerate((1, 2)):
            result = run_sweep(s, workers=workers)
            p = tmp_path / f"run{i}.csv"
            emit_results(result, "csv", p)
            paths.append(p.read_bytes())
        assert paths[0] == paths[1]

    def test_superbunching_value_in_expected_window(self):
        s = scenario_from_dict({
            "name": "point",
            "model": "lambda",
            "fixed": {"omega": 10.0, "omega_r": 0.1, "kappa": 1.0},
            "sweep": [],
            "quantities": ["g2", "rho_ee", "Q"],
        })
        result = run_sweep(s, workers=1)
        row = dict(zip(result.columns, result.rows[0]))
        assert 1e3 <= row["g2"] <= 2.5e4  # within a factor 5 of 5.0e3
        assert row["rho_ee"] == pytest.approx(1.99959e-4, rel=1e-4)
        assert row["Q"] == pytest.approx(row["g2"] * row["rho_ee"])
        assert row["converged"] == 1

    def test_failing_point_is_flagged_not_fatal(self):
        # zero magnetic mixing leaves a degenerate stationary manifold: that
        # grid point must carry the failure reason while the sweep completes
        s = scenario_from_dict({
            "name": "partial",
            "model": "rb87",
            "fixed": {"v_eg": 10.0, "kappa": 1.0},
            "sweep": [{"param": "omega_b_field", "scale": "linear",
                       "min": 0.0, "max": 0.5, "count": 2}],
            "quantities": ["g2"],
            "solver": {"n_max": 3},
        })
        result = run_sweep(s, workers=1)
        assert len(result.rows) == 2
        first = dict(zip(result.columns, result.rows[0]))
        second = dict(zip(result.columns, result.rows[1]))
        assert first["converged"] == 0 and "Degenerate" in first["error"]
        assert math.isnan(first["g2"])
        assert second["converged"] == 1 and second["g2"] > 0

    def test_curve_scenario_rows(self):
        result = run_sweep(load_scenario("fig2cd"), workers=1)
        assert result.columns[:3] == ["tau", "g2_sigma", "rho_ee_c"]
        assert len(result.rows) == 400
        taus = [r[0] for r in result.rows]
        assert taus == sorted(taus)
        # conditional excitation stays in [0, 1]; all rows converged
        for row in result.rows:
            assert 0.0 <= row[2] <= 1.0
            assert row[3] == 1

    def test_invalid_worker_count(self):
        with pytest.raises(ValueError):
            run_sweep(scenario_from_dict(TINY_SCENARIO), workers=0)

    def test_env_var_default(self, monkeypatch):
        monkeypatch.setenv("SHELVESIM_WORKERS", "7")
        assert default_worker_count() == 7
        monkeypatch.setenv("SHELVESIM_WORKERS", "garbage")
        assert default_worker_count() == 1
        monkeypatch.delenv("SHELVESIM_WORKERS")
        assert default_worker_count() == 1


class TestEmitResults:
    def test_empty_result_writes_header_only(self, tmp_path):
        result = SweepResult(scenario="empty", columns=["kappa", "g2"], rows=[], meta={})
        path = tmp_path / "empty.csv"
        emit_results(result, "csv", path)
        assert path.read_text() == "kappa,g2\n"

    def test_csv_round_trip_is_exact(self, tmp_path):
        result = run_sweep(scenario_from_dict(TINY_SCENARIO), workers=1)
        path = tmp_path / "out.csv"
        emit_results(result, "csv", path)
        with open(path, newline="") as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == len(result.rows)
        for parsed, original in zip(rows, result.rows):
            row = dict(zip(result.columns, original))
            for col in ("kappa", "omega_r", "g2"):
                assert float(parsed[col]) == row[col]  # bit-exact round trip

    def test_csv_uses_lf_line_endings(self, tmp_path):
        result = run_sweep(scenario_from_dict(TINY_SCENARIO), workers=1)
        path = tmp_path / "out.csv"
        emit_results(result, "csv", path)
        raw = path.read_bytes()
        assert b"\r" not in raw

    def test_json_meta_carries_provenance(self, tmp_path):
        result = run_sweep(scenario_from_dict(TINY_SCENARIO), workers=1)
        path = tmp_path / "out.json"
        emit_results(result, "json", path)
        payload = json.loads(path.read_text())
        meta = payload["meta"]
        assert meta["scenario"]["name"] == "tiny"
        assert meta["schema_version"] == "1"
        assert meta["toolkit_version"]
        assert meta["solver"]["n_max_requested"] == 3
        assert len(payload["rows"]) == 6
        # per-row provenance records the solver settings actually used
        assert payload["rows"][0]["n_max_used"] == 3
        assert payload["rows"][0]["g_c_used"] == pytest.approx(1e-3)

    def test_unknown_format_rejected(self, tmp_path):
        result = SweepResult(scenario="x", columns=["a"], rows=[], meta={})
        with pytest.raises(ValueError):
            emit_results(result, "xml", tmp_path / "x.xml")

    def test_write_failure_carries_path(self, tmp_path):
        from shelvesim.operators import ShelvesimError

        result = SweepResult(scenario="x", columns=["a"], rows=[], meta={})
        bad = tmp_path / "missing_dir" / "x.csv"
        with pytest.raises(ShelvesimError, match="missing_dir"):
            emit_results(result, "csv", bad)
