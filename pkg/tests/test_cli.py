import json
import subprocess
import sys
from pathlib import Path

import pytest

DATA = Path(__file__).parent / "data"


def run_cli(*args, stdin=None):
    return subprocess.run(
        [sys.executable, "-m", "mirauction.cli", *args],
        capture_output=True,
        text=True,
        input=stdin,
    )


class TestSolve:
    def test_half_on_tight_fixture(self):
        proc = run_cli("solve", "--input", str(DATA / "two_bidder_tight.json"), "--mechanism", "half")
        assert proc.returncode == 0
        report = json.loads(proc.stdout)
        assert report["welfare"] == 10
        assert report["mechanism"] == "half"

    def test_brute_on_tight_fixture(self):
        proc = run_cli("solve", "--input", str(DATA / "two_bidder_tight.json"), "--mechanism", "brute")
        assert proc.returncode == 0
        assert json.loads(proc.stdout)["welfare"] == 20

    def test_ptas_t0_is_pure_bundles(self):
        proc = run_cli(
            "solve", "--input", str(DATA / "onepoint_2_3_4.json"), "--mechanism", "ptas", "--t", "0"
        )
        assert proc.returncode == 0
        report = json.loads(proc.stdout)
        assert report["witness"]["T"] == []
        # b = max(9 // 9, 1) = 1 with a 9-bundle budget: the pure-bundle
        # optimum here is the unrestricted optimum.
        assert report["welfare"] == 3

    def test_payments_flag(self):
        proc = run_cli(
            "solve",
            "--input", str(DATA / "two_bidder_tight.json"),
            "--mechanism", "half",
            "--payments", "clarke",
        )
        report = json.loads(proc.stdout)
        assert report["payments"] is not None
        assert all(p >= 0 for p in report["payments"])

    def test_stdin_and_output_file(self, tmp_path):
        out = tmp_path / "report.json"
        proc = run_cli(
            "solve", "--input", "-", "--mechanism", "half", "--output", str(out),
            stdin=(DATA / "two_bidder_tight.json").read_text(),
        )
        assert proc.returncode == 0 and proc.stdout == ""
        assert json.loads(out.read_text())["welfare"] == 10

    def test_malformed_input_exits_2(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{"m": 8, "bidders": [{"kind": "table", "values": [0, 2, 1]}]}')
        proc = run_cli("solve", "--input", str(bad), "--mechanism", "half")
        assert proc.returncode == 2

    def test_kind_mismatch_exits_3(self, tmp_path):
        table = tmp_path / "table.json"
        table.write_text('{"m": 3, "bidders": [{"kind": "table", "values": [0, 1, 2, 3]}]}')
        proc = run_cli("solve", "--input", str(table), "--mechanism", "ptas", "--t", "1")
        assert proc.returncode == 3

    def test_size_guard_exits_4(self):
        proc = run_cli("solve", "--input", str(DATA / "onepoint_30_70.json"), "--mechanism", "brute")
        assert proc.returncode == 4

    def test_lift_capacity_mismatch_exits_3(self):
        proc = run_cli(
            "solve", "--input", str(DATA / "two_bidder_tight.json"),
            "--mechanism", "lift", "--inner", "single", "--t", "2",
        )
        assert proc.returncode == 3


class TestVerify:
    def test_half_tightness_passes(self):
        proc = run_cli("verify", "--input", str(DATA / "two_bidder_tight.json"), "--mechanism", "half")
        assert proc.returncode == 0
        verification = json.loads(proc.stdout)["verification"]
        assert verification == {"opt": 20, "ratio": "10/20", "guarantee": "1/2", "pass": True}

    def test_ptas_t1_tightness(self):
        proc = run_cli(
            "verify", "--input", str(DATA / "onepoint_2_3_4.json"), "--mechanism", "ptas", "--t", "1"
        )
        assert proc.returncode == 0
        verification = json.loads(proc.stdout)["verification"]
        assert verification["ratio"] == "2/3" and verification["pass"]

    def test_brute_ratio_is_one(self):
        proc = run_cli("verify", "--input", str(DATA / "two_bidder_tight.json"), "--mechanism", "brute")
        assert proc.returncode == 0
        verification = json.loads(proc.stdout)["verification"]
        assert verification["ratio"] == "20/20" and verification["guarantee"] == "1/1"

    def test_lift_verify(self):
        proc = run_cli(
            "verify", "--input", str(DATA / "onepoint_2_3_4.json"),
            "--mechanism", "lift", "--inner", "exhaustive", "--t", "1",
        )
        assert proc.returncode == 0
        assert json.loads(proc.stdout)["verification"]["pass"]


class TestGen:
    def test_onepoint_round_trips(self, tmp_path):
        out = tmp_path / "inst.json"
        proc = run_cli("gen", "onepoint", "--s", "30,70", "--m", "100", "--output", str(out))
        assert proc.returncode == 0
        record = json.loads(out.read_text())
        assert record["m"] == 100
        assert record["bidders"][0]["bids"] == [[30, 1]]
        assert out.read_text() == (DATA / "onepoint_30_70.json").read_text()

    def test_onepoint_oversubscribed_exits_2(self):
        proc = run_cli("gen", "onepoint", "--s", "60,60", "--m", "100")
        assert proc.returncode == 2

    def test_subadditive_hard(self):
        proc = run_cli("gen", "subadditive-hard", "--m", "10", "--s1", "4")
        assert proc.returncode == 0
        assert proc.stdout == (DATA / "subadditive_hard_10_4.json").read_text()

    def test_random_seeded_runs_are_byte_identical(self):
        a = run_cli("gen", "random", "--kind", "k_minded", "--n", "3", "--m", "12", "--seed", "7")
        b = run_cli("gen", "random", "--kind", "k_minded", "--n", "3", "--m", "12", "--seed", "7")
        assert a.returncode == b.returncode == 0
        assert a.stdout == b.stdout

    def test_random_bad_seed_exits_2(self):
        proc = run_cli("gen", "random", "--kind", "table", "--n", "2", "--m", "5", "--seed", "-1")
        assert proc.returncode == 2


class TestMisreport:
    def test_mir_mechanism_exits_0(self):
        proc = run_cli(
            "misreport", "--input", str(DATA / "two_bidder_tight.json"),
            "--mechanism", "half", "--bidder", "0", "--samples", "50", "--seed", "1",
        )
        assert proc.returncode == 0
        report = json.loads(proc.stdout)
        assert report["gain"] <= 0 and report["witness"] is None

    def test_greedy_baseline_exits_1_with_witness(self):
        proc = run_cli(
            "misreport", "--input", str(DATA / "greedy_manipulable.json"),
            "--mechanism", "greedy", "--bidder", "1", "--samples", "200", "--seed", "3",
        )
        assert proc.returncode == 1
        report = json.loads(proc.stdout)
        assert report["gain"] > 0 and report["witness"] is not None

    def test_zero_samples_exits_2(self):
        proc = run_cli(
            "misreport", "--input", str(DATA / "two_bidder_tight.json"),
            "--mechanism", "half", "--bidder", "0", "--samples", "0", "--seed", "1",
        )
        assert proc.returncode == 2


class TestDeterminism:
    @pytest.mark.parametrize(
        "args",
        [
            ("solve", "--input", "FIX", "--mechanism", "half", "--payments", "clarke"),
            ("solve", "--input", "FIX", "--mechanism", "ptas", "--t", "2"),
            ("solve", "--input", "FIX", "--mechanism", "lift", "--inner", "exhaustive", "--t", "1"),
            ("verify", "--input", "FIX", "--mechanism", "half"),
            ("misreport", "--input", "FIX", "--mechanism", "half", "--bidder", "1",
             "--samples", "25", "--seed", "11"),
        ],
    )
    def test_byte_identical_across_runs(self, args):
        resolved = [str(DATA / "two_bidder_tight.json") if a == "FIX" else a for a in args]
        first = run_cli(*resolved)
        second = run_cli(*resolved)
        assert first.stdout == second.stdout
        assert first.returncode == second.returncode
