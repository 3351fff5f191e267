import json

import pytest

from tricount.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestCount:
    def test_plain(self, capsys):
        code, out, _ = run_cli(capsys, "count", "--m", "5", "--n", "2")
        assert code == 0
        assert "result: 182132" in out
        assert "capacity: 1.7474625" in out

    def test_json_schema(self, capsys):
        code, out, _ = run_cli(capsys, "--output", "json",
                               "count", "--m", "3", "--n", "2")
        assert code == 0
        report = json.loads(out)
        assert report["command"] == "count"
        assert report["inputs"] == {"m": 3, "n": 2, "mode": "bigint"}
        assert report["result"] == "852"
        assert isinstance(report["result"], str)
        assert "seconds" in report
        assert "capacity" in report

    def test_one_wide_binomial(self, capsys):
        code, out, _ = run_cli(capsys, "count", "--m", "1", "--n", "10")
        assert code == 0
        assert "result: 184756" in out

    def test_empty_column(self, capsys):
        code, out, _ = run_cli(capsys, "count", "--m", "3", "--n", "0")
        assert code == 0
        assert "result: 1" in out

    def test_modular_mode(self, capsys):
        code, out, _ = run_cli(capsys, "count", "--m", "4", "--n", "2",
                               "--mode", "modular")
        assert code == 0
        assert "result: 12170" in out

    def test_explicit_primes_too_small(self, capsys):
        code, _, err = run_cli(capsys, "count", "--m", "4", "--n", "2",
                               "--mode", "modular", "--primes", "101,103")
        assert code == 2
        assert "prime" in err

    def test_long_run_gate(self, capsys):
        code, _, err = run_cli(capsys, "count", "--m", "20", "--n", "20")
        assert code == 2
        assert "allow-long" in err

    def test_cache_flag(self, capsys, tmp_path):
        code, _, _ = run_cli(capsys, "--cache-dir", str(tmp_path),
                             "count", "--m", "2", "--n", "2")
        assert code == 0
        lines = (tmp_path / "counts.tsv").read_text().splitlines()
        assert lines == ["2\t2\t64"]
        # second run hits the cache and reports the same value
        code, out, _ = run_cli(capsys, "--cache-dir", str(tmp_path),
                               "count", "--m", "2", "--n", "2")
        assert code == 0
        assert "result: 64" in out

    def test_csv_output(self, capsys):
        code, out, _ = run_cli(capsys, "--output", "csv",
                               "count", "--m", "2", "--n", "1")
        assert code == 0
        header, row = out.strip().splitlines()
        assert header.split(",")[:3] == ["command", "inputs", "result"]
        assert "6" in row


class TestConstants:
    def test_c2(self, capsys):
        code, out, _ = run_cli(capsys, "c2")
        assert code == 0
        assert "2.05256897" in out

    def test_c3_small(self, capsys):
        code, out, _ = run_cli(capsys, "--output", "json",
                               "c3", "--nodes", "48", "--digits", "16")
        assert code == 0
        report = json.loads(out)
        assert report["result"].startswith("2.0838")
        assert "certified_error" in report
        assert "residual" in report

    def test_c3_long_gate(self, capsys):
        code, _, err = run_cli(capsys, "c3", "--nodes", "100",
                               "--digits", "200")
        assert code == 2
        assert "allow-long" in err

    def test_bound_np_default(self, capsys):
        code, out, _ = run_cli(capsys, "bound-np")
        assert code == 0
        assert "4.73582022" in out
        assert "0.83206855" in out

    def test_bound_np_explicit(self, capsys):
        code, out, _ = run_cli(capsys, "--output", "json", "bound-np",
                               "--c", "3.0")
        assert code == 0
        report = json.loads(out)
        assert float(report["result"]) == pytest.approx(4.7923373, abs=1e-5)


class TestVerify:
    def test_series_suite(self, capsys):
        code, out, _ = run_cli(capsys, "verify", "--suite", "series")
        assert code == 0
        assert "PASS" in out
        assert "FAIL" not in out

    def test_oracle_suite_with_budget(self, capsys):
        code, out, _ = run_cli(capsys, "verify", "--suite", "oracle",
                               "--max-seconds", "60")
        assert code == 0
        assert "checks passed" in out

    def test_convexity_suite(self, capsys):
        code, out, _ = run_cli(capsys, "verify", "--suite", "convexity")
        assert code == 0
        assert "log-convexity" in out

    def test_tables_suite_budget_trims(self):
        # an exhausted budget stops the suite before any further entry starts
        import time

        from tricount.cli import _Budget, _suite_tables

        expired = _Budget(0.0)
        time.sleep(0.001)
        assert expired.exceeded()
        assert _suite_tables(expired) == []
        assert not _Budget(None).exceeded()
