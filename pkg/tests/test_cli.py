"""Command-line behavior: outputs, exit codes, and report determinism."""

import json
import subprocess
import sys

import pytest

from fockcalc.cli import main

PHI_JSON = '{"terms":[{"set":[],"coef":[2,0]},{"set":[0,2],"coef":[3,0]}]}'


@pytest.fixture()
def phi_file(tmp_path):
    path = tmp_path / "phi.json"
    path.write_text(PHI_JSON)
    return str(path)


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestLambdaCommand:
    def test_subset_weight(self, capsys):
        code, out, _ = run_cli(capsys, "lambda", "[1,3]")
        assert code == 0
        assert float(out) == 8.0

    def test_truncated_sum(self, capsys):
        code, out, _ = run_cli(capsys, "lambda", "--sum", "--p", "2", "--n", "4")
        assert code == 0
        assert float(out) == pytest.approx(2.951388888888889, rel=1e-13)

    def test_series_bound(self, capsys):
        code, out, _ = run_cli(capsys, "lambda", "--bound", "--p", "2")
        assert code == 0
        assert float(out) == pytest.approx(5.180668317897116, abs=1e-6)

    def test_negative_entry_is_usage_error(self, capsys):
        code, _, err = run_cli(capsys, "lambda", "[0,-1]")
        assert code == 2
        assert "error" in err

    def test_missing_arguments(self, capsys):
        code, _, err = run_cli(capsys, "lambda")
        assert code == 2


class TestNormCommand:
    def test_plain_norm(self, capsys, phi_file):
        code, out, _ = run_cli(capsys, "norm", phi_file, "--p", "0")
        assert code == 0
        assert float(out) == pytest.approx(13**0.5)

    def test_dual_norm(self, capsys, phi_file):
        # weight({0,2}) = 1 * 3, so the level-1 dual norm is sqrt(4 + 9/9)
        code, out, _ = run_cli(capsys, "norm", phi_file, "--p", "1", "--dual")
        assert code == 0
        assert float(out) == pytest.approx(5**0.5)

    def test_stdin(self, capsys, monkeypatch):
        import io

        monkeypatch.setattr(sys, "stdin", io.StringIO(PHI_JSON))
        code, out, _ = run_cli(capsys, "norm", "-", "--p", "0")
        assert code == 0
        assert float(out) == pytest.approx(13**0.5)

    def test_schema_error_exit(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{"terms":[{"set":[2,0],"coef":[1,0]}]}')
        code, _, err = run_cli(capsys, "norm", str(bad))
        assert code == 2


class TestApplyCommand:
    def test_site_round_trip(self, capsys, phi_file):
        code, out, _ = run_cli(capsys, "apply", phi_file, "--pipeline", "annihilate:2,create:2")
        assert code == 0
        assert json.loads(out) == {"terms": [{"set": [0, 2], "coef": [3.0, 0.0]}]}

    def test_expect(self, capsys, phi_file):
        code, out, _ = run_cli(capsys, "apply", phi_file, "--pipeline", "expect")
        assert code == 0
        assert json.loads(out) == {"terms": [{"set": [], "coef": [2.0, 0.0]}]}

    def test_condexp_drops_high_terms(self, capsys, tmp_path):
        f = tmp_path / "f.json"
        f.write_text('{"terms":[{"set":[0,2],"coef":[3,0]}]}')
        code, out, _ = run_cli(capsys, "apply", str(f), "--pipeline", "condexp:1")
        assert code == 0
        assert json.loads(out) == {"terms": []}

    def test_bad_tag_is_usage_error(self, capsys, phi_file):
        code, _, err = run_cli(capsys, "apply", phi_file, "--pipeline", "explode:3")
        assert code == 2


class TestDecomposeCommand:
    def test_report_shape(self, capsys, phi_file):
        code, out, _ = run_cli(capsys, "decompose", phi_file, "--q", "0", "--q", "1")
        assert code == 0
        obj = json.loads(out)
        assert obj["termination_index"] == 2
        assert {r["q"] for r in obj["residuals"]} == {0.0, 1.0}


class TestCovCommand:
    def test_self_covariance(self, capsys, phi_file):
        code, out, _ = run_cli(capsys, "cov", phi_file, phi_file, "--p", "0")
        assert code == 0
        obj = json.loads(out)
        assert obj["lhs"] == [9.0, 0.0]
        assert obj["gap"] == 0.0


class TestVerifyCommand:
    def test_small_suite_passes(self, capsys, tmp_path):
        out_file = tmp_path / "report.json"
        code, _, _ = run_cli(
            capsys, "verify", "--suite", "car", "--trials", "20", "--seed", "5",
            "--out", str(out_file),
        )
        assert code == 0
        report = json.loads(out_file.read_text())
        assert report["pass"] is True
        assert report["checks"][0]["check"] == "car"

    def test_zero_tolerance_flags_rounding(self, capsys):
        code, out, _ = run_cli(
            capsys, "verify", "--suite", "bounds", "--trials", "10", "--seed", "0",
            "--tolerance", "0",
        )
        assert code == 1
        assert json.loads(out)["pass"] is False

    def test_reports_identical_across_threads(self, capsys, tmp_path):
        paths = []
        for threads in ("1", "3"):
            out_file = tmp_path / f"r{threads}.json"
            code, _, _ = run_cli(
                capsys, "verify", "--suite", "all", "--trials", "15", "--seed", "2",
                "--threads", threads, "--out", str(out_file),
            )
            assert code == 0
            paths.append(out_file)
        a, b = (json.loads(p.read_text()) for p in paths)
        for r in (a, b):
            r.pop("created")
            r["config"].pop("threads")
        assert a == b

    def test_repeat_runs_identical_modulo_timestamp(self, capsys):
        reports = []
        for _ in range(2):
            code, out, _ = run_cli(
                capsys, "verify", "--suite", "commutation", "--trials", "10", "--seed", "4"
            )
            assert code == 0
            r = json.loads(out)
            r.pop("created")
            reports.append(r)
        assert reports[0] == reports[1]


class TestBridgeCommand:
    def test_checks_pass(self, capsys):
        code, out, _ = run_cli(
            capsys, "bridge", "--horizon", "6", "--trials", "20", "--seed", "6"
        )
        assert code == 0
        report = json.loads(out)
        names = {c["check"] for c in report["checks"]}
        assert names == {"orthonormality", "clark_ocone_pathwise", "intertwining", "plancherel"}

    def test_single_site_restriction(self, capsys):
        code, out, _ = run_cli(
            capsys, "bridge", "--horizon", "5", "--trials", "10", "--seed", "6", "--k", "2"
        )
        assert code == 0
        report = json.loads(out)
        assert report["checks"][0]["k"] == 2

    def test_eval_exhaustive_with_csv(self, capsys, phi_file, tmp_path):
        csv_path = tmp_path / "obs.csv"
        code, out, _ = run_cli(
            capsys, "bridge", "--horizon", "4", "--eval", phi_file, "--csv", str(csv_path)
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["expectation"] == [2.0, 0.0]
        assert csv_path.read_text().startswith("path_index,re,im")

    def test_eval_sampled_mc(self, capsys, phi_file):
        code, out, _ = run_cli(
            capsys, "bridge", "--horizon", "4", "--eval", phi_file,
            "--mode", "sampled", "--paths", "2000", "--seed", "13",
        )
        assert code == 0
        payload = json.loads(out)
        mean = complex(*payload["mean"])
        assert abs(mean - 2.0) <= 5 * payload["stderr"]


class TestInstalledEntryPoint:
    def test_console_script(self):
        proc = subprocess.run(
            [sys.executable, "-m", "fockcalc.cli", "lambda", "[1,3]"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert float(proc.stdout) == 8.0
