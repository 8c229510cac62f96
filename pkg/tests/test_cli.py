import json
import math
import subprocess
import sys

import numpy as np
import pytest

from qmiorder import io
from qmiorder.cli import main
from qmiorder.states import random_orthonormal


def strip_timestamp(text):
    doc = json.loads(text)
    doc.get("manifest", doc).pop("timestamp", None)
    return doc


@pytest.fixture
def ghz_analysis(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert main(["generate", "ghz", "--L", "4", "--out", "ghz.json"]) == 0
    assert main(["analyze", "ghz.json", "--out", "an", "--chi", "1,2"]) == 0
    return tmp_path


class TestGenerate:
    def test_ghz_file(self, tmp_path):
        out = tmp_path / "g.json"
        assert main(["generate", "ghz", "--L", "4", "--out", str(out)]) == 0
        doc = json.loads(out.read_text())
        amps = np.array(doc["amplitudes"])
        assert amps.shape == (16, 2)
        assert np.count_nonzero(np.abs(amps).sum(axis=1)) == 2
        manifest = json.loads((tmp_path / "g.json.manifest.json").read_text())
        assert manifest["command"] == "generate" and "timestamp" in manifest

    def test_random_mps_byte_identical(self, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        for out in (a, b):
            assert main(["generate", "random-mps", "--L", "6", "--chi", "2", "--seed", "7", "--out", str(out)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_all_kinds(self, tmp_path):
        coeffs = tmp_path / "c.csv"
        coeffs.write_text(io.csv_text(None, random_orthonormal(5, 2, seed=0)))
        runs = [
            ["product", "--L", "3", "--digits", "010"],
            ["product", "--L", "3", "--plus"],
            ["w", "--L", "5"],
            ["slater", "--coeffs", str(coeffs)],
            ["ground-state", "--model", "heisenberg", "--L", "4"],
            ["ground-state", "--model", "xxz", "--L", "4", "--delta", "0.5"],
        ]
        for n, extra in enumerate(runs):
            out = tmp_path / f"s{n}.json"
            assert main(["generate", *extra, "--out", str(out)]) == 0
            state = io.read_state(out)
            assert abs(np.linalg.norm(state.amplitudes) - 1) < 1e-12
        assert io.read_state(tmp_path / "s3.json").kind == "slater"

    def test_slater_non_orthonormal(self, tmp_path, capsys):
        coeffs = tmp_path / "c.csv"
        coeffs.write_text("1,1\n1,0\n0,1\n")
        assert main(["generate", "slater", "--coeffs", str(coeffs), "--out", str(tmp_path / "s.json")]) == 1
        err = capsys.readouterr().err.strip().splitlines()
        assert len(err) == 1 and "orthonormal" in err[0]

    def test_bad_digits(self, tmp_path):
        assert main(["generate", "product", "--L", "3", "--digits", "0120", "--out", str(tmp_path / "p.json")]) == 1

    def test_budget(self, tmp_path, monkeypatch):
        monkeypatch.setenv("QMIORDER_MAX_AMPLITUDES", "16")
        assert main(["generate", "ghz", "--L", "5", "--out", str(tmp_path / "g.json")]) == 1


class TestAnalyze:
    def test_ghz(self, ghz_analysis):
        ent = json.loads((ghz_analysis / "an/entropies.json").read_text())
        vn = next(p for p in ent["profiles"] if p["alpha"] == 1.0)
        np.testing.assert_allclose(vn["blocks"], [1, 1, 1], atol=1e-12)
        assert [p["alpha"] for p in ent["profiles"]] == [0.0, 0.5, 1.0, 2.0]
        trunc = json.loads((ghz_analysis / "an/truncation.json").read_text())
        totals = {p["chi"]: p["total"] for p in trunc["profiles"]}
        assert abs(totals[1] - 1.5) <= 1e-12 and totals[2] < 1e-20
        assert (ghz_analysis / "an/qmi.csv.manifest.json").exists()

    def test_product_zero_qmi(self, tmp_path):
        assert main(["generate", "product", "--L", "3", "--plus", "--out", str(tmp_path / "p.json")]) == 0
        assert main(["analyze", str(tmp_path / "p.json"), "--out", str(tmp_path / "an")]) == 0
        Q = io.read_matrix_csv(tmp_path / "an/qmi.csv")
        assert np.all(np.abs(Q) < 1e-12)

    def test_missing_and_malformed(self, tmp_path):
        assert main(["analyze", str(tmp_path / "nope.json")]) == 1
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        assert main(["analyze", str(bad)]) == 1
        bad.write_text('{"L": 2, "d": 2, "amplitudes": [[1, 0], [1, 0], [0, 0], [0, 0]]}')
        assert main(["analyze", str(bad)]) == 1


class TestCost:
    def test_ghz(self, ghz_analysis):
        assert main(["cost", "an/qmi.csv", "an/entropies.json", "--tree", "--out", "c.json"]) == 0
        doc = json.loads((ghz_analysis / "c.json").read_text())
        assert abs(doc["idist_value"] - 40.0) <= 1e-9
        assert abs(doc["i_mps"] - math.log2(6)) <= 1e-9
        assert abs(doc["tree_value"] - 2.0) <= 1e-9
        assert "manifest" in doc

    def test_csv_format(self, ghz_analysis):
        assert main(["cost", "an/qmi.json", "an/entropies.json", "--format", "csv", "--out", "c.csv"]) == 0
        lines = (ghz_analysis / "c.csv").read_text().splitlines()
        assert lines[0].startswith("idist,eta,sign")

    def test_zero_matrix(self, tmp_path):
        (tmp_path / "q.csv").write_text("0,0,0\n0,0,0\n0,0,0\n")
        (tmp_path / "s.csv").write_text("0,0,0\n")
        assert main(["cost", str(tmp_path / "q.csv"), str(tmp_path / "s.csv"), "--out", str(tmp_path / "c.json")]) == 0
        doc = json.loads((tmp_path / "c.json").read_text())
        assert doc["idist_value"] == 0.0
        assert abs(doc["i_mps"] - 1.0) <= 1e-12

    def test_tree_needs_power_of_two(self, tmp_path, capsys):
        Q = np.zeros((6, 6))
        (tmp_path / "q.csv").write_text(io.csv_text(None, Q))
        (tmp_path / "s.csv").write_text("0,0,0,0,0,0\n")
        code = main(["cost", str(tmp_path / "q.csv"), str(tmp_path / "s.csv"), "--tree", "--out", str(tmp_path / "c.json")])
        assert code == 1
        assert "L must be a power of two" in capsys.readouterr().err

    def test_length_mismatch(self, ghz_analysis, tmp_path):
        (tmp_path / "s.csv").write_text("0,0,0\n")
        assert main(["cost", "an/qmi.csv", str(tmp_path / "s.csv")]) == 1


class TestOptimize:
    @pytest.fixture
    def strong_pair(self, tmp_path):
        Q = np.zeros((5, 5))
        Q[0, 4] = Q[4, 0] = 1.0
        (tmp_path / "q.csv").write_text(io.csv_text(None, Q))
        (tmp_path / "s.csv").write_text("0,0,0,0,0\n")
        return tmp_path

    def test_exhaustive_adjacent(self, strong_pair):
        d = strong_pair
        args = ["optimize", str(d / "q.csv"), str(d / "s.csv"), "--method", "exhaustive", "--out", str(d / "o.json")]
        assert main(args) == 0
        doc = json.loads((d / "o.json").read_text())
        assert abs(doc["best"].index(0) - doc["best"].index(4)) == 1
        assert abs(doc["best_cost"] - 2.0) <= 1e-12

    def test_exhaustive_cap(self, strong_pair, capsys):
        d = strong_pair
        args = ["optimize", str(d / "q.csv"), str(d / "s.csv"), "--method", "exhaustive", "--max-sites", "4"]
        assert main(args) == 1
        assert "anneal" in capsys.readouterr().err

    def test_anneal_deterministic(self, ghz_analysis):
        docs = []
        for _ in range(2):
            args = ["optimize", "an/qmi.csv", "an/entropies.json", "--method", "anneal", "--seed", "1", "--out", "o.json"]
            assert main(args) == 0
            docs.append(strip_timestamp((ghz_analysis / "o.json").read_text()))
        assert docs[0] == docs[1]

    def test_two_opt_trajectory(self, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        assert main(["generate", "random-mps", "--L", "7", "--chi", "3", "--seed", "2", "--out", "s.json"]) == 0
        assert main(["analyze", "s.json", "--out", "an"]) == 0
        args = ["optimize", "an/qmi.csv", "an/entropies.json", "--method", "two-opt", "--start", "identity",
                "--restarts", "1", "--trajectory", "t.csv", "--out", "o.json"]
        assert main(args) == 0
        lines = (tmp_path / "t.csv").read_text().splitlines()
        assert lines[0] == "restart,step,cost"
        costs = [float(line.split(",")[2]) for line in lines[1:]]
        assert all(b < a for a, b in zip(costs, costs[1:]))


class TestVerify:
    def test_ssa_suite(self, tmp_path, capsys):
        out = tmp_path / "v.json"
        assert main(["verify", "--suite", "ssa", "--trials", "1000", "--seed", "3", "--out", str(out)]) == 0
        doc = json.loads(out.read_text())
        assert doc["passed"] and doc["results"][0]["worst_margin"] >= -1e-9
        assert "PASS ssa" in capsys.readouterr().out

    def test_efficacy_report_only(self, tmp_path, capsys):
        out = tmp_path / "v.json"
        assert main(["verify", "--suite", "efficacy", "--L", "5", "--out", str(out)]) == 0
        assert "spearman" in capsys.readouterr().out
        doc = json.loads(out.read_text())
        assert doc["diagnostics"][0]["report_only"]

    def test_csv_summary(self, tmp_path):
        out = tmp_path / "v.csv"
        assert main(["verify", "--suite", "sa,renyi", "--trials", "20", "--format", "csv", "--out", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "name,instances,worst_margin,passed" and len(lines) == 3

    def test_user_state(self, tmp_path):
        assert main(["generate", "w", "--L", "4", "--out", str(tmp_path / "w.json")]) == 0
        args = ["verify", "--suite", "qmi-gap", "--state", str(tmp_path / "w.json"), "--out", str(tmp_path / "v.json")]
        assert main(args) == 0

    def test_unknown_suite(self, tmp_path):
        assert main(["verify", "--suite", "bogus", "--out", str(tmp_path / "v.json")]) == 1

    def test_failing_suite_exits_two(self, tmp_path, monkeypatch):
        from qmiorder import verify
        from qmiorder.verify import CheckResult

        monkeypatch.setattr(verify, "run_suite", lambda name, **kw: CheckResult(name, False, -1.0, 1))
        assert main(["verify", "--suite", "sa", "--out", str(tmp_path / "v.json")]) == 2


class TestTruncate:
    def test_ghz(self, ghz_analysis):
        assert main(["truncate", "ghz.json", "--chi", "1", "--out", "t.json"]) == 0
        doc = json.loads((ghz_analysis / "t.json").read_text())
        assert abs(doc["profiles"][0]["total"] - 1.5) <= 1e-12
        assert doc["profiles"][0]["bond_dims"] == [1, 1, 1, 1, 1]

    def test_csv(self, ghz_analysis):
        assert main(["truncate", "ghz.json", "--chi", "1,2", "--format", "csv", "--out", "t.csv"]) == 0
        lines = (ghz_analysis / "t.csv").read_text().splitlines()
        assert lines[0] == "chi,cut,eps2" and len(lines) == 7


class TestRoundTrip:
    def test_manifest_reproduces(self, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        assert main(["generate", "random-mps", "--L", "5", "--chi", "3", "--seed", "9", "--out", "s.json"]) == 0
        first = (tmp_path / "s.json").read_bytes()
        manifest = json.loads((tmp_path / "s.json.manifest.json").read_text())
        (tmp_path / "s.json").unlink()
        assert main(manifest["argv"]) == 0
        assert (tmp_path / "s.json").read_bytes() == first

    def test_analysis_inputs_hashed(self, ghz_analysis):
        doc = json.loads((ghz_analysis / "an/qmi.json").read_text())
        assert doc["manifest"]["inputs"]["ghz.json"] == io.sha256_file(ghz_analysis / "ghz.json")


def test_usage_errors_exit_one():
    assert subprocess.run([sys.executable, "-m", "qmiorder", "bogus"], capture_output=True).returncode == 1
    assert subprocess.run([sys.executable, "-m", "qmiorder"], capture_output=True).returncode == 1
    ok = subprocess.run([sys.executable, "-m", "qmiorder", "--help"], capture_output=True, text=True)
    assert ok.returncode == 0 and "generate" in ok.stdout


def test_content_hash_ignores_embedded_manifest(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    io.write_json(a, {"x": 1.5}, {"timestamp": "one"})
    io.write_json(b, {"x": 1.5}, {"timestamp": "two"})
    assert io.sha256_file(a) != io.sha256_file(b)
    assert io.content_hash(a) == io.content_hash(b)
    (tmp_path / "c.csv").write_text("1,2\n")
    assert io.content_hash(tmp_path / "c.csv") == io.sha256_file(tmp_path / "c.csv")
