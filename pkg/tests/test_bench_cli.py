import json

import pytest

from fluxheat import cli
from fluxheat.bench import convergence, run_case, sweep
from fluxheat.catalog import case_ids, load_case
from fluxheat.problem import SchemaError


def base_case(m=1, kind="linear_x"):
    return {
        "phi": {"kind": kind, "lambda": 1.0, "mu": 1.0} if kind != "linear_x" else {"kind": kind, "lambda": 1.0},
        "flux": {"kind": "linear", "nu": 1.0},
        "h": {"kind": "monomial", "eta": 1.0, "m": m},
        "variant": "P",
    }


class TestRunCase:
    def test_catalog_case_passes(self):
        cfg = load_case("ir-phi1-m3")
        result = run_case(cfg["case"], case_id="ir-phi1-m3", extra_checks=tuple(cfg.get("checks", ())))
        assert result.passed
        names = {r.name for r in result.records}
        assert "volterra_residual" in names and "pde_residual" in names

    def test_whole_catalog_passes(self):
        for cid in case_ids():
            cfg = load_case(cid)
            result = run_case(cfg["case"], case_id=cid, extra_checks=tuple(cfg.get("checks", ())))
            failing = [r.name for r in result.records if not r.passed]
            assert result.passed, (cid, failing)

    def test_even_m_closed_form_is_validation_failure(self):
        result = run_case(base_case(m=2), case_id="even")
        assert not result.passed
        assert result.violations and any("odd" in v for v in result.violations)

    def test_stationary_runs_reduced_checks(self):
        case = {
            "phi": {"kind": "linear_x", "lambda": 1.0},
            "flux": {"kind": "zero"},
            "h": {"kind": "monomial", "eta": 2.0, "m": 1},
            "variant": "P",
        }
        result = run_case(case, case_id="stat")
        assert result.passed
        assert "volterra_residual" not in {r.name for r in result.records}

    def test_every_record_carries_tolerance(self):
        result = run_case(base_case(m=3), case_id="t")
        assert all(r.tolerance >= 0.0 for r in result.records)

    def test_tol_scale_loosens(self):
        result = run_case(base_case(m=3), case_id="t", tol_scale=100.0)
        base = run_case(base_case(m=3), case_id="t")
        for loose, tight in zip(result.records, base.records):
            if tight.tolerance > 0:
                assert loose.tolerance == pytest.approx(100.0 * tight.tolerance)

    def test_schema_error_raised(self):
        bad = base_case()
        bad["bogus"] = 1
        with pytest.raises(SchemaError):
            run_case(bad)


class TestSweep:
    def sweep_config(self):
        return {"id": "s", "base": base_case(), "grid": {"h.m": [1, 3, 5, 7], "phi.kind": ["linear_x", "neg_sinh", "neg_sin"]}}

    def test_cartesian_count(self):
        lines, ok = sweep(self.sweep_config())
        assert ok
        assert len(lines) == 1 + 12

    def test_deterministic_output(self):
        a, _ = sweep(self.sweep_config())
        b, _ = sweep(self.sweep_config())
        assert a == b

    def test_parallel_matches_serial(self):
        a, _ = sweep(self.sweep_config())
        b, _ = sweep(self.sweep_config(), jobs=3)
        assert a == b

    def test_empty_grid_header_only(self):
        lines, ok = sweep({"id": "s", "base": base_case(), "grid": {}})
        assert ok and len(lines) == 1

    def test_delta_zero_row_routes_to_resonant_form(self):
        # a lambda sweep through delta = 0 for the sine shape
        cfg = {
            "id": "dz",
            "base": base_case(kind="neg_sin"),
            "grid": {"phi.lambda": [0.5, 1.0, 2.0]},
        }
        lines, ok = sweep(cfg)
        assert ok  # the lambda = 1 row (delta = 0) passes via its own branch

    def test_failure_sets_flag(self):
        cfg = {"id": "f", "base": base_case(), "grid": {"h.m": [2]}}
        lines, ok = sweep(cfg)
        assert not ok
        assert lines[1].split(",")[2] == "0"


class TestConvergence:
    def conv_config(self, nxs=(64, 128, 256)):
        return {
            "id": "c",
            "case": base_case(),
            "ladder": {"L": 8.0, "t_end": 1.0, "theta": 0.5, "nx": list(nxs), "nt0": 64},
        }

    def test_ladder_runs(self):
        lines, ok = convergence(self.conv_config())
        assert ok
        assert len(lines) == 4
        header = lines[0].split(",")
        assert "order_max" in header and "error_l2" in header

    def test_short_ladder_rejected(self):
        with pytest.raises(SchemaError):
            convergence(self.conv_config(nxs=(64,)))

    def test_diffusion_smoke_order_two(self):
        # m = 5 keeps a live fourth x-derivative (the m = 3 baseline is cubic
        # in x and linear in t, which Crank-Nicolson reproduces exactly)
        cfg = {
            "id": "diff",
            "case": {
                "phi": {"kind": "linear_x", "lambda": 1.0},
                "flux": {"kind": "zero"},
                "h": {"kind": "monomial", "eta": 1.0, "m": 5},
                "variant": "P",
            },
            "ladder": {"L": 8.0, "t_end": 0.5, "theta": 0.5, "nx": [32, 64, 128], "nt0": 32},
        }
        lines, ok = convergence(cfg)
        order = float(lines[-1].split(",")[5])
        assert ok
        assert order == pytest.approx(2.0, abs=0.3)


class TestCli:
    def write(self, tmp_path, name, payload):
        p = tmp_path / name
        p.write_text(json.dumps(payload), encoding="utf-8")
        return str(p)

    def test_run_exit_zero_and_outputs(self, tmp_path, capsys):
        cfg = self.write(tmp_path, "case.json", {"id": "ok", "case": base_case(m=3)})
        code = cli.main(["run", cfg, "--out", str(tmp_path / "out")])
        assert code == 0
        assert (tmp_path / "out" / "ok.json").exists()
        assert (tmp_path / "out" / "ok.csv").exists()
        assert "PASS" in capsys.readouterr().out

    def test_run_check_failure_exit_one(self, tmp_path):
        cfg = self.write(tmp_path, "case.json", {"id": "bad", "case": base_case(m=2)})
        code = cli.main(["run", cfg, "--out", str(tmp_path / "out")])
        assert code == 1
        report = json.loads((tmp_path / "out" / "bad.json").read_text())
        assert report["violations"]

    def test_config_error_exit_two(self, tmp_path, capsys):
        case = base_case()
        case["mystery"] = True
        cfg = self.write(tmp_path, "case.json", {"id": "x", "case": case})
        assert cli.main(["run", cfg, "--out", str(tmp_path / "out")]) == 2
        assert "configuration error" in capsys.readouterr().err

    def test_missing_file_exit_two(self, tmp_path):
        assert cli.main(["run", str(tmp_path / "nope.json")]) == 2

    def test_byte_identical_reruns(self, tmp_path):
        cfg = self.write(
            tmp_path,
            "sweep.json",
            {"id": "sw", "base": base_case(), "grid": {"h.m": [1, 3]}},
        )
        cli.main(["sweep", cfg, "--out", str(tmp_path / "a")])
        cli.main(["sweep", cfg, "--out", str(tmp_path / "b")])
        a = (tmp_path / "a" / "sw.csv").read_bytes()
        b = (tmp_path / "b" / "sw.csv").read_bytes()
        assert a == b

    def test_convergence_command(self, tmp_path):
        cfg = self.write(
            tmp_path,
            "conv.json",
            {
                "id": "c",
                "case": base_case(),
                "ladder": {"L": 8.0, "t_end": 1.0, "nx": [64, 128, 256], "nt0": 64},
            },
        )
        assert cli.main(["convergence", cfg, "--out", str(tmp_path / "out")]) == 0
        assert (tmp_path / "out" / "c-convergence.csv").exists()

    def test_tol_scale_flag(self, tmp_path):
        cfg = self.write(tmp_path, "case.json", {"id": "ok", "case": base_case(m=3)})
        assert cli.main(["run", cfg, "--out", str(tmp_path / "out"), "--tol-scale", "10"]) == 0
