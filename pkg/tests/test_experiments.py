import json
import math
import os

import pytest

from mixedfrac import ConfigError, DegenerateData, ExperimentConfig, fit_rate
from mixedfrac import experiments
from mixedfrac.cli import main as cli_main


def base_config(**overrides):
    cfg = {
        "schema": 1,
        "order": {"dimension": 1, "s": 0.5},
        "omega": {"a": -1.0, "b": 1.0},
        "family": {"kind": "explicit",
                   "params": {"neumann": [[1.0, 2.0]], "dirichlet": "rest"},
                   "k_list": [0, 1, 2]},
        "discretization": {"h": 0.1, "L": 8.0, "scheme": "P1"},
        "solver": {"tol": 1e-12, "max_iter": 500},
        "outputs": {},
        "verify": {"gauss": True, "conditionC": True, "measures": True},
    }
    cfg.update(overrides)
    return cfg


class TestConfig:
    def test_round_trip(self):
        cfg = ExperimentConfig.from_dict(base_config())
        assert cfg.s == 0.5
        assert cfg.k_list == (0, 1, 2)

    def test_unknown_top_level_key_rejected(self):
        with pytest.raises(ConfigError):
            ExperimentConfig.from_dict(base_config(extra=1))

    def test_unknown_nested_key_rejected(self):
        bad = base_config()
        bad["discretization"]["compression"] = "low-rank"
        with pytest.raises(ConfigError):
            ExperimentConfig.from_dict(bad)

    def test_schema_version_checked(self):
        with pytest.raises(ConfigError):
            ExperimentConfig.from_dict(base_config(schema=2))

    def test_validate_catches_mesh_violations(self):
        bad = base_config()
        bad["discretization"]["h"] = 0.3    # does not divide |Omega|
        cfg = ExperimentConfig.from_dict(bad)
        with pytest.raises(ConfigError):
            cfg.validate()

    def test_validate_catches_p0_scheme_conflict(self):
        bad = base_config()
        bad["discretization"]["scheme"] = "P0"   # s = 0.5
        cfg = ExperimentConfig.from_dict(bad)
        with pytest.raises(ConfigError):
            cfg.validate()


class TestFitRate:
    def test_exact_power_law(self):
        recs = [{"x": x, "y": 3.0 * x ** 2} for x in (1.0, 2.0, 3.0, 4.0, 5.0)]
        slope, intercept, r2 = fit_rate(recs, "x", "y")
        assert abs(slope - 2.0) < 1e-12
        assert abs(math.exp(intercept) - 3.0) < 1e-12
        assert abs(r2 - 1.0) < 1e-12

    def test_degenerate_data(self):
        with pytest.raises(DegenerateData):
            fit_rate([{"x": 1.0, "y": 1.0}], "x", "y")
        with pytest.raises(DegenerateData):
            fit_rate([{"x": -1.0, "y": 1.0}] * 6, "x", "y")


@pytest.fixture(scope="module")
def fixed_interval_run():
    cfg = ExperimentConfig.from_dict(base_config())
    return experiments.run(cfg), cfg


class TestRun:
    def test_fixed_set_records_identical(self, fixed_interval_run):
        result, _ = fixed_interval_run
        lams = {r.lambda1 for r in result.records}
        assert len(lams) == 1       # k-independent family, bitwise identical
        assert result.n_failed == 0

    def test_record_invariants(self, fixed_interval_run):
        from mixedfrac import make_order, tail_mass
        result, _ = fixed_interval_run
        bound = 3.0 * tail_mass(8.0, make_order(1, 0.5))
        for r in result.records:
            assert 0.0 <= r.lambda1 <= r.baseline * (1 + 1e-8)
            assert r.gap >= -1e-12
            # Gauss defect is only the far-field Dirichlet tail
            assert r.gauss_res <= bound

    def test_determinism_bitwise(self, fixed_interval_run):
        result, cfg = fixed_interval_run
        again = experiments.run(cfg)
        for a, b in zip(result.records, again.records):
            assert a.lambda1 == b.lambda1
            assert a.baseline == b.baseline

    def test_jobs_do_not_change_results(self, fixed_interval_run):
        result, cfg = fixed_interval_run
        threaded = experiments.run(cfg, jobs=3)
        for a, b in zip(result.records, threaded.records):
            assert a.lambda1 == b.lambda1

    def test_per_record_failure_tagged(self, fixed_interval_run, monkeypatch):
        _, cfg = fixed_interval_run
        from mixedfrac import errors

        real = experiments.solve_mixed
        calls = {"n": 0}

        def flaky(*args, **kwargs):
            calls["n"] += 1
            if calls["n"] == 2:
                raise errors.SingularExteriorBlock("injected")
            return real(*args, **kwargs)

        monkeypatch.setattr(experiments, "solve_mixed", flaky)
        result = experiments.run(cfg)
        assert result.n_failed == 1
        failed = [r for r in result.records if r.error]
        assert len(failed) == 1
        assert "SingularExteriorBlock" in failed[0].error
        assert math.isnan(failed[0].lambda1)


class TestEmit:
    def test_csv_header_and_rows(self, fixed_interval_run, tmp_path):
        result, cfg0 = fixed_interval_run
        cfg = ExperimentConfig.from_dict(
            base_config(outputs={"csv": "out.csv", "json": "out.json",
                                 "plotdata": "out.dat"}))
        paths = experiments.emit(result, cfg, out_dir=str(tmp_path))
        lines = open(paths["csv"]).read().splitlines()
        assert lines[0] == experiments.CSV_HEADER
        assert len(lines) == 1 + len(result.records)
        payload = json.load(open(paths["json"]))
        assert payload["n_records"] == 3
        assert payload["config"]["schema"] == 1
        assert "farfield_slopes" in payload
        dat = open(paths["plotdata"]).read().splitlines()
        assert dat[0].startswith("#")

    def test_empty_records_header_only(self, tmp_path):
        cfg = ExperimentConfig.from_dict(base_config(outputs={"csv": "e.csv",
                                                              "json": "e.json"}))
        empty = experiments.RunResult(records=(), baseline=0.0, fits={}, n_failed=0)
        paths = experiments.emit(empty, cfg, out_dir=str(tmp_path))
        lines = open(paths["csv"]).read().splitlines()
        assert lines == [experiments.CSV_HEADER]
        assert json.load(open(paths["json"]))["n_records"] == 0

    def test_rerun_byte_identical_except_ms(self, tmp_path):
        cfg = ExperimentConfig.from_dict(
            base_config(outputs={"csv": "d.csv"}))
        r1 = experiments.run(cfg)
        r2 = experiments.run(cfg)
        p1 = experiments.emit(r1, cfg, out_dir=str(tmp_path / "a"))
        os.makedirs(tmp_path / "b", exist_ok=True)
        p2 = experiments.emit(r2, cfg, out_dir=str(tmp_path / "b"))

        def strip_ms(path):
            return ["," .join(line.split(",")[:-1])
                    for line in open(path).read().splitlines()]

        assert strip_ms(p1["csv"]) == strip_ms(p2["csv"])


class TestCli:
    def _write_cfg(self, tmp_path,**overrides):
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps(base_config(**overrides)))
        return str(path)

    def test_sweep_writes_outputs(self, tmp_path, capsys):
        cfg = self._write_cfg(tmp_path, outputs={"csv": "s.csv", "json": "s.json"})
        code = cli_main(["sweep", "--config", cfg, "--out", str(tmp_path)])
        assert code == 0
        assert (tmp_path / "s.csv").exists()
        assert "lambda1" in capsys.readouterr().out

    def test_solve_single(self, tmp_path, capsys):
        cfg = self._write_cfg(tmp_path)
        assert cli_main(["solve", "--config", cfg]) == 0
        assert "k=0" in capsys.readouterr().out

    def test_baseline_richardson(self, tmp_path, capsys):
        cfg = self._write_cfg(tmp_path)
        code = cli_main(["baseline", "--config", cfg,
                         "--richardson", "0.2,0.1,0.05"])
        assert code == 0
        assert "extrapolated" in capsys.readouterr().out

    def test_verify_passes(self, capsys):
        assert cli_main(["verify"]) == 0
        out = capsys.readouterr().out
        assert "PASS" in out and "FAIL" not in out

    def test_efr(self, capsys):
        assert cli_main(["efr", "--s", "0.6", "--rmin-exp", "3",
                         "--rmax-exp", "6"]) == 0
        assert "slope" in capsys.readouterr().out

    def test_efr_divergent(self, capsys):
        assert cli_main(["efr", "--s", "0.8"]) == 0
        assert "DivergentIntegral" in capsys.readouterr().out

    def test_dini(self, capsys):
        assert cli_main(["dini", "--omega0", "power:0.6",
                         "--kernel", "power:0.3"]) == 0
        out = capsys.readouterr().out
        assert "Finite" in out
        assert cli_main(["dini", "--omega0", "log_spine",
                         "--kernel", "power:0.5"]) == 0
        assert "Divergent" in capsys.readouterr().out

    def test_config_error_exit_code(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(base_config(schema=9)))
        assert cli_main(["sweep", "--config", str(path)]) == 1

    def test_partial_failure_exit_code(self, tmp_path, monkeypatch):
        cfg = self._write_cfg(tmp_path)
        bad = experiments.RunResult(records=(), baseline=1.0, fits={}, n_failed=1)
        monkeypatch.setattr(experiments, "run", lambda *a, **k: bad)
        assert cli_main(["sweep", "--config", cfg]) == 2

    def test_seed_accepted_and_ignored(self, tmp_path):
        cfg = self._write_cfg(tmp_path)
        assert cli_main(["solve", "--config", cfg, "--seed", "123"]) == 0
