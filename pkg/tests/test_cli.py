"""End-to-end tests for the command line: exit codes, deterministic output,
formats, and configuration precedence.  Everything runs in-process through
main(argv)."""

import json
import os

import pytest

from quasifolds.cli import (EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_PASS,
                            EXIT_USAGE, main)

pytestmark = pytest.mark.usefixtures("clean_env")


@pytest.fixture
def clean_env(monkeypatch):
    for key in list(os.environ):
        if key.startswith("QUASIFOLD_"):
            monkeypatch.delenv(key)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    return code, json.loads(out), err


class TestExitCodes:
    def test_passing_command(self, capsys):
        code, report, _ = run_json(capsys, "groupoid", "--atlas", "t-alpha")
        assert code == EXIT_PASS
        assert report["summary"]["fail"] == 0

    def test_failing_command(self, capsys):
        code, report, _ = run_json(capsys, "lift", "construct", "--biatlas",
                                   "duplicated", "--r", "0", "--rp", "1/2")
        assert code == EXIT_FAIL
        assert report["summary"]["fail"] >= 1

    def test_inconclusive_command(self, capsys):
        code, report, _ = run_json(capsys, "lift", "construct", "--biatlas",
                                   "duplicated", "--r", "0", "--rp", "5+α*5",
                                   "--bound", "2")
        assert code == EXIT_INCONCLUSIVE
        assert report["summary"]["inconclusive"] >= 1
        assert report["summary"]["fail"] == 0

    def test_unknown_command_is_usage_error(self, capsys):
        code, _, _ = run(capsys, "transmogrify")
        assert code == EXIT_USAGE

    def test_malformed_input_file(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json", encoding="utf-8")
        code, _, err = run(capsys, "groupoid", "--atlas", str(bad))
        assert code == EXIT_USAGE
        assert "error" in err

    def test_unknown_atlas_name(self, capsys):
        code, _, _ = run(capsys, "groupoid", "--atlas", "not-a-thing")
        assert code == EXIT_USAGE

    def test_bad_bound(self, capsys):
        code, _, _ = run(capsys, "groupoid", "--atlas", "t-alpha",
                         "--bound", "-2")
        assert code == EXIT_USAGE

    def test_bad_alpha(self, capsys):
        code, _, _ = run(capsys, "rotation", "--alpha", "not-a-number")
        assert code == EXIT_USAGE

    def test_help_exits_cleanly(self, capsys):
        assert run(capsys, "--help")[0] == 0


class TestReportShape:
    def test_schema_and_summary(self, capsys):
        code, report, _ = run_json(capsys, "rotation")
        assert code == EXIT_PASS
        assert report["schema"] == "quasifold-report/1"
        assert report["command"] == "rotation"
        statuses = [c["status"] for c in report["checks"]]
        assert report["summary"]["pass"] == statuses.count("pass")
        assert report["summary"]["fail"] == statuses.count("fail")
        for c in report["checks"]:
            assert set(c) == {"name", "status", "detail"}

    def test_timing_goes_to_stderr_not_stdout(self, capsys):
        _, out, err = run(capsys, "rotation")
        assert "elapsed" in err
        assert "elapsed" not in out

    def test_global_flags_work_in_both_positions(self, capsys):
        a = run_json(capsys, "--seed", "5", "groupoid", "--atlas", "t-alpha")
        b = run_json(capsys, "groupoid", "--atlas", "t-alpha", "--seed", "5")
        assert a[1] == b[1]


class TestDeterminism:
    @pytest.mark.parametrize("argv", [
        ("groupoid", "--atlas", "t-alpha"),
        ("rotation",),
        ("algebra", "check", "--trials", "5"),
        ("morita", "--biatlas", "two-scale", "--word-length", "1"),
        ("lift", "flipdemo", "--n-max", "2", "--samples", "25"),
    ])
    def test_stdout_is_byte_identical(self, capsys, argv):
        _, out1, _ = run(capsys, *argv)
        _, out2, _ = run(capsys, *argv)
        assert out1 == out2

    def test_seed_changes_corpus_not_validity(self, capsys):
        c1, r1, _ = run_json(capsys, "algebra", "check", "--trials", "5",
                             "--seed", "1")
        c2, r2, _ = run_json(capsys, "algebra", "check", "--trials", "5",
                             "--seed", "2")
        assert c1 == c2 == EXIT_PASS
        assert r1["config"]["seed"] == 1
        assert r2["config"]["seed"] == 2


class TestFormats:
    def test_table(self, capsys):
        code, out, _ = run(capsys, "rotation", "--format", "table")
        assert code == EXIT_PASS
        with pytest.raises(json.JSONDecodeError):
            json.loads(out)
        assert "pass" in out

    def test_csv(self, capsys):
        code, out, _ = run(capsys, "rotation", "--format", "csv")
        assert code == EXIT_PASS
        header = out.splitlines()[0]
        assert "," in header

    def test_unknown_format(self, capsys):
        code, _, _ = run(capsys, "rotation", "--format", "yaml")
        assert code == EXIT_USAGE


class TestConfigPrecedence:
    def test_config_file_sets_defaults(self, capsys, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"bound": 4, "seed": 9}), encoding="utf-8")
        _, report, _ = run_json(capsys, "groupoid", "--atlas", "t-alpha",
                                "--config", str(cfg))
        assert report["config"]["bound"] == 4
        assert report["config"]["seed"] == 9

    def test_flag_beats_config_file(self, capsys, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"bound": 4}), encoding="utf-8")
        _, report, _ = run_json(capsys, "groupoid", "--atlas", "t-alpha",
                                "--config", str(cfg), "--bound", "2")
        assert report["config"]["bound"] == 2

    def test_env_beats_config_file(self, capsys, tmp_path, monkeypatch):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"bound": 4}), encoding="utf-8")
        monkeypatch.setenv("QUASIFOLD_BOUND", "5")
        _, report, _ = run_json(capsys, "groupoid", "--atlas", "t-alpha",
                                "--config", str(cfg))
        assert report["config"]["bound"] == 5

    def test_flag_beats_env(self, capsys, monkeypatch):
        monkeypatch.setenv("QUASIFOLD_BOUND", "5")
        _, report, _ = run_json(capsys, "groupoid", "--atlas", "t-alpha",
                                "--bound", "2")
        assert report["config"]["bound"] == 2

    def test_missing_config_file(self, capsys):
        code, _, _ = run(capsys, "rotation", "--config", "/no/such/file.json")
        assert code == EXIT_USAGE


class TestCommandContent:
    def test_groupoid_assembly_table(self, capsys):
        _, report, _ = run_json(capsys, "groupoid", "--atlas", "t-alpha",
                                "--bound", "2")
        assert "assembly" in report
        assert report["assembly"]["blocks"]

    def test_atlas_from_file(self, capsys, tmp_path):
        from quasifolds.catalog import get_atlas
        from quasifolds.serialize import atlas_to_json, save_json
        p = tmp_path / "atlas.json"
        save_json(p, atlas_to_json(get_atlas("t-alpha")))
        code, report, _ = run_json(capsys, "groupoid", "--atlas", str(p))
        assert code == EXIT_PASS

    def test_repr_reports_reversed_order(self, capsys):
        _, report, _ = run_json(capsys, "repr", "--p", "2,3", "--pairs", "3",
                                "--z-samples", "3")
        order = next(c for c in report["checks"]
                     if c["name"] == "product-order-constant")
        assert order["detail"]["value"] == "reversed"
        assert order["status"] == "pass"

    def test_rotation_negate(self, capsys):
        code, report, _ = run_json(capsys, "rotation", "--negate")
        assert code == EXIT_PASS

    def test_lift_construct_success_payload(self, capsys):
        code, report, _ = run_json(capsys, "lift", "construct", "--biatlas",
                                   "two-scale", "--r", "2", "--rp", "1")
        assert code == EXIT_PASS
        assert any(c["status"] == "pass" for c in report["checks"])

    def test_lift_detect_control_has_zero_coverage(self, capsys):
        code, report, _ = run_json(capsys, "lift", "detect", "--control",
                                   "--samples", "20")
        assert code == EXIT_PASS
        ctrl = next(c for c in report["checks"] if "control" in c["name"])
        assert ctrl["detail"]["coverage"] == 0.0

    def test_morita_reports_axioms(self, capsys):
        code, report, _ = run_json(capsys, "morita", "--biatlas", "duplicated",
                                   "--word-length", "1")
        assert code == EXIT_PASS
        names = {c["name"] for c in report["checks"]}
        assert any("unit" in n for n in names)
        assert any("commute" in n for n in names)
