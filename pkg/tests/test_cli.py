import csv
import io
import json

import pytest

from heilbronn.cli import (EXIT_GOLDEN, EXIT_INVALID, EXIT_OK, main,
                           run_verify)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestSpectrumCommand:
    def test_csv_contract(self, capsys):
        code, out, _ = run(capsys, "spectrum", "-p", "7", "--csv")
        rows = list(csv.reader(io.StringIO(out)))
        assert code == EXIT_OK
        assert rows[0] == ["ell", "value", "err_bound"]
        assert len(rows) == 8

    def test_invalid_prime(self, capsys):
        code, _, err = run(capsys, "spectrum", "-p", "4")
        assert code == EXIT_INVALID
        assert "prime" in err

    def test_p3_value_matches_direct_sum(self, capsys):
        code, out, _ = run(capsys, "spectrum", "-p", "3", "--json")
        d = json.loads(out)
        # H_3(g^3) = H_3(1) = 2 cos(2 pi / 9) + ... over l = 1, 2
        import math
        expected = sum(math.cos(2 * math.pi * l ** 3 / 9) for l in (1, 2))
        assert d["values"][2] == pytest.approx(expected, abs=1e-10)

    def test_output_file(self, capsys, tmp_path):
        path = tmp_path / "spec.json"
        code, _, _ = run(capsys, "spectrum", "-p", "5", "--json",
                         "-o", str(path))
        assert code == EXIT_OK
        assert json.loads(path.read_text())["p"] == 5


class TestFermatCommand:
    def test_known_count(self, capsys):
        code, out, _ = run(capsys, "fermat", "-p", "7", "--json")
        d = json.loads(out)
        assert code == EXIT_OK
        assert d[0]["F"] == 2 and d[0]["solution_count"] == 4116

    def test_divisible_coefficient(self, capsys):
        code, _, err = run(capsys, "fermat", "-p", "7", "-a", "7")
        assert code == EXIT_INVALID

    def test_method_both_matches(self, capsys):
        code, out, _ = run(capsys, "fermat", "-p", "31", "--method", "both")
        assert code == EXIT_OK
        assert "match=true" in out

    def test_both_json_roundtrip(self, capsys):
        code, out, _ = run(capsys, "fermat", "-p", "13", "--method", "both",
                           "--json")
        d = json.loads(out)
        assert d["match"] is True
        assert {r["method"] for r in d["results"]} == {"naive", "spectral"}


class TestTableCommand:
    def test_pmax_100(self, capsys):
        code, out, _ = run(capsys, "table", "--pmax", "100", "--csv")
        rows = list(csv.DictReader(io.StringIO(out)))
        assert code == EXIT_OK
        assert len(rows) == 24
        assert next(r for r in rows if r["p"] == "59")["F"] == "12"
        assert all(r["match"] == "true" for r in rows)

    def test_pmax_3(self, capsys):
        code, out, _ = run(capsys, "table", "--pmax", "3", "--json")
        rows = json.loads(out)
        assert code == EXIT_OK
        assert rows == [{"p": 3, "F": 0, "golden": 0, "match": True}]

    def test_invalid_pmax(self, capsys):
        code, _, _ = run(capsys, "table", "--pmax", "2")
        assert code == EXIT_INVALID

    def test_mismatch_exit_code(self, capsys, monkeypatch):
        import heilbronn.fermat as fm
        monkeypatch.setattr(fm, "golden_table", lambda: [(3, 99)])
        code, _, err = run(capsys, "table", "--pmax", "10")
        assert code == EXIT_GOLDEN
        assert "mismatch" in err


class TestVerifyCommand:
    def test_full_p13(self, capsys):
        code, out, _ = run(capsys, "verify", "-p", "13", "--full")
        assert code == EXIT_OK
        assert "enumeration-agreement" in out
        assert "FAIL" not in out

    def test_quick_larger_prime(self, capsys):
        code, out, _ = run(capsys, "verify", "-p", "211", "--quick")
        assert code == EXIT_OK

    def test_not_prime(self, capsys):
        code, _, _ = run(capsys, "verify", "-p", "9")
        assert code == EXIT_INVALID

    def test_run_verify_names(self):
        names = [name for name, _, _ in run_verify(7, "full")]
        assert "spectrum-identities" in names
        assert "root-independence" in names
        assert "naive-agreement" in names


class TestBenchCommand:
    def test_reps_validation(self, capsys):
        code, _, _ = run(capsys, "bench", "--reps", "1",
                         "--pmin", "7", "--pmax", "13")
        assert code == EXIT_INVALID

    def test_bad_range(self, capsys):
        code, _, _ = run(capsys, "bench", "--pmin", "50", "--pmax", "40")
        assert code == EXIT_INVALID

    def test_small_run_csv(self, capsys):
        code, out, _ = run(capsys, "bench", "--pmin", "7", "--pmax", "17",
                           "--csv")
        rows = list(csv.DictReader(io.StringIO(out)))
        assert code == EXIT_OK
        assert {r["method"] for r in rows} == {"naive", "spectral"}

    def test_all_triples_gate(self, capsys):
        code, out, _ = run(capsys, "bench", "--task", "all-triples",
                           "--pmin", "7", "--pmax", "13", "--json")
        d = json.loads(out)
        assert code == EXIT_OK
        assert d["task"] == "all-triples"
