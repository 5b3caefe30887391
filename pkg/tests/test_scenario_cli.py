"""Scenario files and the command-line runner: round-trips, CSV, exit codes."""

import json
from pathlib import Path

import pytest

from subtrial import scenario as scenario_mod
from subtrial.cli import main
from subtrial.exceptions import ScenarioError
from subtrial.solver import joint_optimum

SCENARIOS = Path(__file__).resolve().parents[1] / "scenarios"


def read_rows(path):
    lines = Path(path).read_text().splitlines()
    assert lines[0].startswith("# ")
    header = lines[1].split(",")
    return [dict(zip(header, line.split(","))) for line in lines[2:]]


class TestScenarioRoundTrip:
    @pytest.mark.parametrize("name", [p.stem for p in sorted(SCENARIOS.glob("*.json"))])
    def test_parse_emit_parse_is_idempotent(self, name):
        sc = scenario_mod.load(SCENARIOS / f"{name}.json")
        text = sc.dumps()
        again = scenario_mod.from_dict(json.loads(text))
        assert again == sc
        assert again.dumps() == text

    def test_missing_field_rejected(self):
        record = json.loads((SCENARIOS / "baseline_uniform.json").read_text())
        del record["distribution"]
        with pytest.raises(ScenarioError):
            scenario_mod.from_dict(record)

    def test_unknown_sweep_param_rejected(self):
        record = json.loads((SCENARIOS / "baseline_uniform.json").read_text())
        record["sweep"]["param"] = "delta"
        with pytest.raises(ScenarioError):
            scenario_mod.from_dict(record)

    def test_unsorted_grid_rejected(self):
        record = json.loads((SCENARIOS / "baseline_uniform.json").read_text())
        record["sweep"]["grid"] = [3.0, 1.0, 2.0]
        with pytest.raises(ScenarioError):
            scenario_mod.from_dict(record)

    def test_contract_required_for_contract_sweep(self):
        record = json.loads((SCENARIOS / "baseline_uniform.json").read_text())
        del record["contract"]
        with pytest.raises(ScenarioError):
            scenario_mod.from_dict(record)


class TestCliSolve:
    def test_row_matches_library_solve(self, tmp_path):
        out = tmp_path / "solve.csv"
        code = main(["solve", "--scenario", str(SCENARIOS / "baseline_uniform.json"), "--out", str(out)])
        assert code == 0
        (row,) = read_rows(out)
        sc = scenario_mod.load(SCENARIOS / "baseline_uniform.json")
        opt = joint_optimum(sc.distribution, sc.attention, sc.solver)
        assert row["scenario"] == "baseline_uniform"
        assert float(row["P_star"]) == pytest.approx(opt.contract.P, rel=1e-11)
        assert float(row["profit"]) == pytest.approx(opt.outcome.profit, rel=1e-11)
        assert row["flags"] == "T_at_zero"
        assert row["participation_satisfied"] == "false"

    def test_deterministic_output(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for out in (a, b):
            assert main(["solve", "--scenario", str(SCENARIOS / "interior_uniform.json"), "--out", str(out)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_round_T_flag(self, tmp_path):
        out = tmp_path / "r.csv"
        main([
            "solve", "--scenario", str(SCENARIOS / "interior_uniform.json"),
            "--out", str(out), "--round-T",
        ])
        (row,) = read_rows(out)
        assert float(row["T_star"]) == round(float(row["T_star"]))

    def test_mode_override(self, tmp_path):
        out = tmp_path / "m.csv"
        main([
            "solve", "--scenario", str(SCENARIOS / "baseline_uniform.json"),
            "--out", str(out), "--mode", "binding_ir",
        ])
        (row,) = read_rows(out)
        assert row["mode"] == "binding_ir"
        assert row["participation_satisfied"] == "true"

    def test_validation_failure_exit_code(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{\"name\": \"x\"}")
        out = tmp_path / "x.csv"
        assert main(["solve", "--scenario", str(bad), "--out", str(out)]) == 1

    def test_solver_failure_exit_code(self, tmp_path):
        # competing price-root branches make the joint iteration cycle
        record = json.loads((SCENARIOS / "baseline_uniform.json").read_text())
        record["name"] = "cycling"
        record["distribution"] = {"family": "iso_elastic", "kappa": 0.05, "eps": 0.4, "v0": 0.1}
        record["attention"] = {"lambda0": 12.0, "beta": 0.5, "gamma": 1.02}
        record["price_window"] = {"p_lo": 0.15, "p_hi": 0.95}
        path = tmp_path / "cycling.json"
        path.write_text(json.dumps(record))
        out = tmp_path / "x.csv"
        assert main(["solve", "--scenario", str(path), "--out", str(out)]) == 2


class TestCliSweep:
    def test_one_row_per_grid_point(self, tmp_path):
        out = tmp_path / "sweep.csv"
        assert main(["sweep", "--scenario", str(SCENARIOS / "baseline_uniform.json"), "--out", str(out)]) == 0
        rows = read_rows(out)
        sc = scenario_mod.load(SCENARIOS / "baseline_uniform.json")
        assert [float(r["value"]) for r in rows] == list(sc.sweep.grid)
        ir = [float(r["inattentive_revenue"]) for r in rows]
        assert all(b > a for a, b in zip(ir, ir[1:]))

    def test_deterministic_across_runs(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for out in (a, b):
            main(["sweep", "--scenario", str(SCENARIOS / "baseline_uniform.json"), "--out", str(out)])
        assert a.read_bytes() == b.read_bytes()

    def test_gamma_sweep_improves_monitoring(self, tmp_path):
        record = json.loads((SCENARIOS / "baseline_uniform.json").read_text())
        record["sweep"] = {"param": "gamma", "grid": [1.0, 1.5, 2.0, 4.0]}
        path = tmp_path / "gamma_sweep.json"
        path.write_text(json.dumps(record))
        out = tmp_path / "g.csv"
        assert main(["sweep", "--scenario", str(path), "--out", str(out)]) == 0
        rows = read_rows(out)
        qs = [float(r["q_star"]) for r in rows]
        utils = [float(r["utility"]) for r in rows]
        assert all(b > a for a, b in zip(qs, qs[1:]))
        assert all(b > a for a, b in zip(utils, utils[1:]))

    def test_price_sweep_rows(self, tmp_path):
        record = json.loads((SCENARIOS / "baseline_uniform.json").read_text())
        record["sweep"] = {"param": "P", "grid": [0.2, 0.4, 0.6, 0.8]}
        path = tmp_path / "price_sweep.json"
        path.write_text(json.dumps(record))
        out = tmp_path / "p.csv"
        assert main(["sweep", "--scenario", str(path), "--out", str(out)]) == 0
        rows = read_rows(out)
        assert [float(r["P"]) for r in rows] == [0.2, 0.4, 0.6, 0.8]


class TestCliPolicyPaidHetero:
    def test_policy_row(self, tmp_path):
        out = tmp_path / "policy.csv"
        assert main(["policy", "--scenario", str(SCENARIOS / "policy_iso_elastic.json"), "--out", str(out)]) == 0
        (row,) = read_rows(out)
        assert float(row["epsilon_used"]) == pytest.approx(0.4)
        assert row["sign_rule_holds"] in {"true", "false"}
        assert float(row["profit_shocked"]) < float(row["profit_base"])

    def test_paid_row(self, tmp_path):
        out = tmp_path / "paid.csv"
        assert main(["paid", "--scenario", str(SCENARIOS / "paid_trial.json"), "--out", str(out)]) == 0
        (row,) = read_rows(out)
        assert row["corner"] == "interior"
        assert float(row["profit"]) == pytest.approx(
            float(row["signup_rate"]) * (float(row["P0_star"]) + float(row["p_aug"])), rel=1e-9
        )

    def test_hetero_row(self, tmp_path):
        out = tmp_path / "het.csv"
        assert main(["hetero", "--scenario", str(SCENARIOS / "hetero_spread.json"), "--out", str(out)]) == 0
        (row,) = read_rows(out)
        assert int(row["n_atoms"]) == 2
        assert float(row["mean_z"]) == pytest.approx(0.5)

    def test_paid_requires_signup_block(self, tmp_path):
        out = tmp_path / "x.csv"
        assert main(["paid", "--scenario", str(SCENARIOS / "baseline_uniform.json"), "--out", str(out)]) == 1

    def test_hetero_requires_mixture_block(self, tmp_path):
        out = tmp_path / "x.csv"
        assert main(["hetero", "--scenario", str(SCENARIOS / "baseline_uniform.json"), "--out", str(out)]) == 1


class TestCliVerify:
    @pytest.mark.parametrize(
        "name", ["baseline_uniform", "iso_elastic_curve", "paid_trial", "monopoly_limit"]
    )
    def test_clean_scenarios_pass(self, name, tmp_path, capsys):
        out = tmp_path / "verify.csv"
        code = main(["verify", "--scenario", str(SCENARIOS / f"{name}.json"), "--out", str(out)])
        assert code == 0
        rows = read_rows(out)
        assert rows and all(r["status"] == "pass" for r in rows)

    def test_violation_exit_code(self, tmp_path, monkeypatch):
        from subtrial import cli as cli_mod
        from subtrial.verify import CheckResult

        monkeypatch.setattr(
            cli_mod,
            "run_invariant_checks",
            lambda sc: [CheckResult("demo", "forced_failure", False, "synthetic")],
        )
        out = tmp_path / "verify.csv"
        code = main(["verify", "--scenario", str(SCENARIOS / "baseline_uniform.json"), "--out", str(out)])
        assert code == 3
