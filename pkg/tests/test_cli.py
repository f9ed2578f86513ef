"""End-to-end tests of the command-line interface: flags, exit codes,
manifest/CSV formats, and rerun determinism."""

import json
import math

import pytest

from piterbarg.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestPlan:
    def test_brownian_hand_values(self, capsys):
        code, out, _ = run_cli(capsys, "plan", "--alpha", "1", "--delta", "0.01")
        assert code == 0
        budget = json.loads(out)["results"]["budget"]
        assert budget["horizon"] == pytest.approx(21.2076, abs=1e-3)
        assert budget["disc_bound"] == pytest.approx(0.214597, abs=1e-5)
        assert budget["trunc_bound"] == pytest.approx(
            math.exp(-math.log(100.0) ** 2), rel=1e-6
        )
        assert budget["trunc_bound"] == pytest.approx(6.2e-10, rel=0.05)
        assert budget["stat_error"] is None
        assert budget["up_to_constant"] is True

    def test_writes_out_file(self, capsys, tmp_path):
        target = tmp_path / "plan.json"
        code, out, _ = run_cli(capsys, "plan", "--alpha", "0.5", "--delta", "0.1",
                               "--out", str(target))
        assert code == 0
        assert out == ""
        blob = json.loads(target.read_text())
        assert blob["command"] == "plan"

    def test_coarse_delta_is_usage_error(self, capsys):
        code, _, err = run_cli(capsys, "plan", "--alpha", "1", "--delta", "1.5")
        assert code == 2
        assert "error" in err


class TestEstimate:
    ARGS = ["estimate", "--alpha", "1", "--d", "1", "--domain", "half",
            "--delta", "0.05", "--reps", "400", "--seed", "7"]

    def test_manifest_contents(self, capsys):
        code, out, _ = run_cli(capsys, *self.ARGS)
        assert code == 0
        manifest = json.loads(out)
        assert manifest["command"] == "estimate"
        config = manifest["config"]
        # omitted --horizon defaults to the planning rule
        assert config["horizon"] == pytest.approx(math.log(20.0) ** 2, rel=1e-9)
        est = manifest["results"]["estimate"]
        assert est["method"] == "median-of-means"  # d = 1 forces the fallback
        assert est["estimate"] >= 1.0
        assert manifest["results"]["budget"]["up_to_constant"] is True

    def test_missing_required_flag_exits_2(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["estimate", "--alpha", "1", "--domain", "half",
                  "--delta", "0.05", "--reps", "10", "--seed", "1"])
        assert exc.value.code == 2

    def test_invalid_value_exits_2(self, capsys):
        code, _, err = run_cli(capsys, "estimate", "--alpha", "3", "--d", "1",
                               "--domain", "half", "--delta", "0.05",
                               "--reps", "10", "--seed", "1")
        assert code == 2
        assert "alpha" in err

    def test_rerun_reproduces_results_fields(self, capsys):
        _, out1, _ = run_cli(capsys, *self.ARGS)
        _, out2, _ = run_cli(capsys, *self.ARGS, "--threads", "3")
        r1, r2 = json.loads(out1), json.loads(out2)
        assert r1["results"] == r2["results"]  # timestamps excluded by design
        assert r1["config"] == r2["config"]

    def test_floats_round_trip_bit_exactly(self, capsys):
        _, out, _ = run_cli(capsys, *self.ARGS)
        manifest = json.loads(out)
        assert json.loads(json.dumps(manifest)) == manifest


class TestValidate:
    def test_small_run_is_inconclusive_but_ok(self, capsys):
        code, out, err = run_cli(capsys, "validate", "--d", "1", "--domain", "half",
                                 "--delta", "0.05", "--reps", "10", "--seed", "3")
        assert code == 0
        manifest = json.loads(out)
        validation = manifest["results"]["validation"]
        assert validation["status"] == "inconclusive"
        assert "warning" in err

    def test_decisive_run_passes(self, capsys):
        code, out, err = run_cli(capsys, "validate", "--d", "2", "--domain", "half",
                                 "--delta", "0.05", "--reps", "20000",
                                 "--seed", "3", "--threads", "2")
        assert code == 0
        validation = json.loads(out)["results"]["validation"]
        assert validation["status"] == "pass", validation
        assert validation["exact"] == 1.5


class TestRate:
    def test_emits_csv(self, capsys):
        code, out, _ = run_cli(capsys, "rate", "--d", "2", "--domain", "half",
                               "--deltas", "0.2,0.05", "--reps", "500",
                               "--seed", "11")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "delta,p_hat,stderr,gap,gap_stderr,empirical_rate"
        assert len(lines) == 3

    def test_non_nested_deltas_exit_2(self, capsys):
        code, _, err = run_cli(capsys, "rate", "--d", "2", "--domain", "half",
                               "--deltas", "0.01,0.003", "--reps", "10",
                               "--seed", "1")
        assert code == 2
        assert "power of two" in err


class TestThreadsEnvFallback:
    def test_env_variable_sets_default(self, monkeypatch):
        from piterbarg.cli import build_parser

        monkeypatch.setenv("PITERBARG_THREADS", "3")
        args = build_parser().parse_args(
            ["estimate", "--alpha", "1", "--d", "1", "--domain", "half",
             "--delta", "0.1", "--reps", "10", "--seed", "1"]
        )
        assert args.threads == 3
        monkeypatch.setenv("PITERBARG_THREADS", "junk")
        args = build_parser().parse_args(
            ["validate", "--d", "1", "--domain", "half", "--delta", "0.1",
             "--reps", "10", "--seed", "1"]
        )
        assert args.threads == 1

    def test_flag_overrides_env(self, monkeypatch, capsys):
        monkeypatch.setenv("PITERBARG_THREADS", "2")
        code, out, _ = run_cli(capsys, "estimate", "--alpha", "1", "--d", "2",
                               "--domain", "half", "--delta", "0.1",
                               "--reps", "60", "--seed", "4", "--threads", "1")
        assert code == 0
        assert json.loads(out)["results"]["estimate"]["replications"] == 60


class TestCheckManifest:
    def test_accepts_own_json(self, capsys, tmp_path):
        target = tmp_path / "m.json"
        run_cli(capsys, "estimate", "--alpha", "1", "--d", "2", "--domain", "half",
                "--delta", "0.1", "--reps", "50", "--seed", "2",
                "--out", str(target))
        code, out, _ = run_cli(capsys, "check-manifest", str(target))
        assert code == 0
        assert "[ok]" in out

    def test_accepts_own_csv(self, capsys, tmp_path):
        target = tmp_path / "r.csv"
        run_cli(capsys, "rate", "--d", "2", "--domain", "half",
                "--deltas", "0.2,0.05", "--reps", "200", "--seed", "5",
                "--out", str(target))
        code, out, _ = run_cli(capsys, "check-manifest", str(target))
        assert code == 0
        assert "[ok]" in out

    def test_rejects_garbage(self, capsys, tmp_path):
        target = tmp_path / "bad.csv"
        target.write_text("delta,p_hat\n0.1,not-a-number\n")
        code, _, err = run_cli(capsys, "check-manifest", str(target))
        assert code == 1

    def test_missing_file_exits_2(self, capsys, tmp_path):
        code, _, _ = run_cli(capsys, "check-manifest", str(tmp_path / "nope.json"))
        assert code == 2
