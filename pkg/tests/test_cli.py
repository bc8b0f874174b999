"""End-to-end command-line behaviour: exit codes, determinism, round trips."""

import json

import pytest

from fcone.cli import (
    EXIT_OK,
    EXIT_REFUTED,
    EXIT_UNDECIDED,
    EXIT_USAGE,
    main,
    parse_bounds_spec,
    parse_combo_spec,
)
from fcone.kmaps import canonical_class, k_build, pullback_alpha
from fcone.mcurves import MDivisor


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestParsers:
    def test_combo_spec(self):
        combo = parse_combo_spec("a4=1,a2=1/4", 5)
        assert combo.get(4) == 1 and combo.get(2).denominator == 4

    def test_combo_spec_without_prefix(self):
        assert parse_combo_spec("4=1", 4).get(4) == 1

    def test_bounds_spec(self):
        bounds = parse_bounds_spec("a4>=0,a6<=1")
        assert bounds.lower == ((4, 0),) and bounds.upper == ((6, 1),)

    def test_malformed_tokens(self):
        from fcone.cli import CliError

        with pytest.raises(CliError):
            parse_combo_spec("a4:1", 5)
        with pytest.raises(CliError):
            parse_bounds_spec("a4=0")
        with pytest.raises(CliError):
            parse_combo_spec("a4=0.5", 5)  # decimals are not exact input


class TestVerifyCommand:
    def test_verified_exit_zero(self, capsys):
        code, out, _ = run(capsys, "verify", "--n", "4", "--combo", "a4=1")
        assert code == EXIT_OK
        assert "VERIFIED" in out and "-6" in out

    def test_refuted_exit_one(self, capsys):
        code, out, _ = run(capsys, "verify", "--n", "4", "--combo", "")
        assert code == EXIT_REFUTED
        assert "REFUTED" in out

    def test_json_output(self, capsys):
        code, out, _ = run(capsys, "verify", "--n", "4", "--combo", "a4=1", "--json")
        assert code == EXIT_OK
        report = json.loads(out)
        assert report["command"] == "verify"
        assert report["result"]["beta_degree"] == "-6"
        assert report["exit"] == 0

    def test_small_n_usage_error(self, capsys):
        code, _, err = run(capsys, "verify", "--n", "2", "--combo", "a2=1")
        assert code == EXIT_USAGE and "error" in err

    def test_bad_rational_usage_error(self, capsys):
        code, _, _ = run(capsys, "verify", "--n", "4", "--combo", "a4=x")
        assert code == EXIT_USAGE


class TestSearchCommand:
    def test_infeasible_exit_one(self, capsys):
        code, out, _ = run(capsys, "search", "--n", "6", "--bounds", "a4>=0,a6<=1")
        assert code == EXIT_REFUTED
        assert "INFEASIBLE" in out and "certificate check: ok" in out

    def test_feasible_exit_zero(self, capsys):
        code, out, _ = run(
            capsys, "search", "--n", "5",
            "--bounds", "a2>=0,a2<=1,a3>=0,a3<=1,a4>=0,a4<=1,a5>=0,a5<=1",
        )
        assert code == EXIT_OK
        assert "FEASIBLE" in out and "VERIFIED" in out

    def test_json_certificate(self, capsys):
        code, out, _ = run(
            capsys, "search", "--n", "6", "--bounds", "a4>=0,a6<=1", "--json"
        )
        assert code == EXIT_REFUTED
        payload = json.loads(out)
        assert payload["result"]["feasibility"]["status"] == "infeasible"
        assert payload["result"]["feasibility"]["multipliers"]


class TestFcurvesCommand:
    def test_negative_scan(self, tmp_path, capsys):
        H = pullback_alpha(canonical_class(4) + k_build(4, combo={4: 1}))
        path = tmp_path / "divisor.json"
        path.write_text(json.dumps(H.to_json_dict()))
        code, out, _ = run(capsys, "fcurves", "--divisor", str(path), "--sense", "negative")
        assert code == EXIT_OK and "positive" in out

    def test_violation_exit_one(self, tmp_path, capsys):
        H = pullback_alpha(canonical_class(4))
        path = tmp_path / "divisor.json"
        path.write_text(json.dumps(H.to_json_dict()))
        code, out, _ = run(
            capsys, "fcurves", "--divisor", str(path), "--sense", "negative",
            "--all-witnesses",
        )
        assert code == EXIT_REFUTED
        assert out.count("also:") == 5  # six violations, first shown separately

    def test_undecided_exit_two(self, tmp_path, capsys):
        # all-ones divisor: every F-value is -1, but 8 markings sit outside
        # the range where the scan decides ampleness
        from fcone.combinat import Subset

        H = MDivisor(8, {Subset(mask, 8): 1 for mask in range(1, (1 << 8) - 1)})
        path = tmp_path / "divisor.json"
        path.write_text(json.dumps(H.to_json_dict()))
        code, _, _ = run(capsys, "fcurves", "--divisor", str(path), "--sense", "negative")
        assert code == EXIT_UNDECIDED

    def test_missing_file_usage_error(self, tmp_path, capsys):
        code, _, err = run(capsys, "fcurves", "--divisor", str(tmp_path / "nope.json"))
        assert code == EXIT_USAGE and "error" in err


class TestPullbackCommand:
    def test_beta_of_canonical_class(self, capsys):
        code, out, _ = run(capsys, "pullback", "beta", "--n", "7", "--K")
        assert code == EXIT_OK
        assert out.count("-11") == 7

    def test_alpha_output_reparses_to_same_divisor(self, capsys):
        code, out, _ = run(
            capsys, "pullback", "alpha", "--n", "4", "--K", "--combo", "a4=1"
        )
        assert code == EXIT_OK
        parsed = MDivisor.from_json_dict(json.loads(out))
        assert parsed == pullback_alpha(canonical_class(4) + k_build(4, combo={4: 1}))

    def test_divisor_file_with_combo_shorthand(self, tmp_path, capsys):
        path = tmp_path / "divisor.json"
        path.write_text(json.dumps({"n": 4, "K": True, "a": {"4": "1"}}))
        code, out, _ = run(capsys, "pullback", "beta", "--divisor", str(path))
        assert code == EXIT_OK and out.count("-6") == 4

    def test_empty_divisor_usage_error(self, capsys):
        code, _, _ = run(capsys, "pullback", "alpha", "--n", "4")
        assert code == EXIT_USAGE


class TestStrataCommand:
    def test_tsv(self, capsys):
        code, out, _ = run(capsys, "strata", "--n", "2")
        assert code == EXIT_OK
        assert out.splitlines() == ["S\tDeltaKey\tBKey", "1,2\t1,2\t1,2"]

    def test_json(self, capsys):
        code, out, _ = run(capsys, "strata", "--n", "4", "--json")
        assert code == EXIT_OK
        assert json.loads(out)["result"]["count"] == 11


class TestLemmasCommand:
    def test_exit_zero_and_table(self, capsys):
        code, out, _ = run(capsys, "lemmas")
        assert code == EXIT_OK
        assert "n=4" in out and "VERIFIED" in out
        assert "beta -33/4" in out
        assert "INFEASIBLE" in out

    def test_conclusion_marked_as_cited(self, capsys):
        _, out, _ = run(capsys, "lemmas")
        assert "cited" in out and "not recomputed" in out

    def test_deterministic_output(self, capsys):
        _, first, _ = run(capsys, "lemmas", "--json")
        _, second, _ = run(capsys, "lemmas", "--json")
        assert first == second

    def test_corrupted_expectations_exit_three(self, tmp_path, capsys):
        bad = tmp_path / "expect.json"
        bad.write_text("{ not json")
        code, _, err = run(capsys, "lemmas", "--expectations", str(bad))
        assert code == EXIT_USAGE and "error" in err

    def test_wrong_expectations_exit_one(self, tmp_path, capsys):
        wrong = tmp_path / "expect.json"
        data = {
            "log_fano_witness_4": {
                "n": 4, "combo": {"4": "1"}, "verdict": "verified",
                "f_min": "-1", "f_max": "-1", "beta_degree": "-7",
            },
            "log_fano_witness_5": {
                "n": 5, "combo": {"2": "1/4", "4": "1/4", "5": "1"},
                "verdict": "verified", "f_min": "-1/4", "f_max": "-1/4",
                "beta_degree": "-33/4",
            },
            "no_witness_6": {
                "n": 6, "bounds": {"lower": {"4": "0"}, "upper": {"6": "1"}},
                "status": "infeasible",
            },
        }
        wrong.write_text(json.dumps(data))
        code, out, _ = run(capsys, "lemmas", "--expectations", str(wrong))
        assert code == EXIT_REFUTED
        assert "MISMATCHES" in out and "expected -7, got -6" in out


class TestUsageErrors:
    def test_unknown_command(self, capsys):
        assert run(capsys, "frobnicate")[0] == EXIT_USAGE

    def test_unknown_flag(self, capsys):
        assert run(capsys, "verify", "--n", "4", "--weird")[0] == EXIT_USAGE

    def test_threads_env(self, capsys, monkeypatch):
        monkeypatch.setenv("FCONE_THREADS", "3")
        code, out, _ = run(capsys, "verify", "--n", "4", "--combo", "a4=1")
        assert code == EXIT_OK and "VERIFIED" in out

    def test_bad_threads_env(self, capsys, monkeypatch):
        monkeypatch.setenv("FCONE_THREADS", "lots")
        assert run(capsys, "verify", "--n", "4", "--combo", "a4=1")[0] == EXIT_USAGE
