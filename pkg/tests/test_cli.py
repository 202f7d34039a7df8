import json
import shutil
import subprocess

import pytest

from primecorr.cli import main
from primecorr.reports import COLUMNS, CONJECTURE_COLUMNS, THEOREM_COLUMNS, read_rows


def run(capsys, *argv):
    code = main(list(map(str, argv)))
    out, err = capsys.readouterr()
    return code, out, err


def _summary(err):
    start = err.index("{")
    depth = 0
    for i, ch in enumerate(err[start:], start):
        depth += {"{": 1, "}": -1}.get(ch, 0)
        if depth == 0:
            return json.loads(err[start : i + 1])
    raise AssertionError(err)


def test_sieve_writes_cache(capsys, tmp_path):
    path = tmp_path / "sieve.bin"
    code, out, _ = run(capsys, "sieve", "--limit", 100000, "--cache", path)
    assert code == 0
    assert "limit=100000" in out and "primes=9592" in out
    first = path.read_bytes()
    assert first[:4] == b"PCL1"
    code, out2, _ = run(capsys, "sieve", "--limit", "1e5", "--cache", path)
    assert code == 0 and out2 == out
    assert path.read_bytes() == first


def test_sieve_env_cache(capsys, tmp_path, monkeypatch):
    path = tmp_path / "env.bin"
    monkeypatch.setenv("PCL_CACHE", str(path))
    assert run(capsys, "sieve", "--limit", 1000)[0] == 0
    assert path.exists()


@pytest.mark.parametrize(
    "argv",
    [
        ["sieve", "--limit", "1"],
        ["sieve", "--limit", "abc"],
        ["eval", "0"],
        ["eval", "50", "--limit", "10"],
        ["correlate", "1"],
        ["sweep", "--lo", "8", "--hi", "100", "--limit", "50"],
        ["sweep", "--claims", "nonsense"],
        ["sweep", "--class", "odd"],
        ["frobnicate"],
        [],
        ["singular", "1"],
        # above the certified length of the FFT engine
        ["correlate", "1000002", "--engine", "convolution", "--weights", "lambda0"],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_io_error_exit_2(capsys, tmp_path):
    code, _, err = run(capsys, "sweep", "--lo", 8, "--hi", 20, "--out", tmp_path / "missing" / "x.csv")
    assert code == 2 and "error" in err


def test_bad_cache_file_is_rebuilt(capsys, tmp_path):
    path = tmp_path / "junk.bin"
    path.write_bytes(b"not a sieve")
    code, out, err = run(capsys, "eval", 9, "--cache", path)
    assert code == 0 and "ignoring cache" in err
    assert path.read_bytes()[:4] == b"PCL1"


def test_eval_values(capsys):
    code, out, _ = run(capsys, "eval", 9)
    assert code == 0
    assert json.loads(out) == pytest.approx(
        {"lambda": 1.098612, "lambda0": 0, "upsilon": 1.098612, "omega": 2, "phi": 6}, abs=1e-6
    )
    got = json.loads(run(capsys, "eval", 7)[1])
    assert got["lambda"] == got["lambda0"] == pytest.approx(1.945910, abs=1e-6)
    assert got["upsilon"] == 0
    got = json.loads(run(capsys, "eval", 1)[1])
    assert got == {"lambda": 0, "lambda0": 0, "upsilon": 0, "omega": 0, "phi": 1}


def test_correlate(capsys):
    code, out, _ = run(capsys, "correlate", 10, 12, 34, 7)
    assert code == 0
    rows = {r["N"]: r for r in map(json.loads, out.splitlines())}
    assert rows[10]["lambda0"] == pytest.approx(6.865892, abs=1e-6)
    assert rows[10]["ratio_K"] == pytest.approx(1.630930, abs=1e-6)
    assert rows[12]["per_prime"] == pytest.approx({"2": 1.206949, "3": 0.480453}, abs=1e-6)
    assert rows[34]["ratio_K"] is None and rows[34]["coprime"] == pytest.approx(3.536297, abs=1e-6)
    assert "ratio_K" not in rows[7]
    code, out2, _ = run(capsys, "correlate", 10, 12, 34, 7, "--engine", "convolution")
    assert code == 0
    rows2 = {r["N"]: r for r in map(json.loads, out2.splitlines())}
    for N in rows:
        for k in ("lambda", "lambda0", "upsilon"):
            assert rows2[N][k] == pytest.approx(rows[N][k], rel=1e-9, abs=1e-12)


def test_sweep_csv_rows(capsys):
    code, out, err = run(capsys, "sweep", "--lo", 8, "--hi", 1000, "--format", "csv")
    rows = read_rows(out, "csv")
    assert len(rows) == 497
    assert [r["N"] for r in rows] == list(range(8, 1001, 2))
    assert out.splitlines()[1] == ",".join(COLUMNS)
    summary = _summary(err)
    assert summary["reports"] == 497
    assert summary["counterexamples"]["relaxed"] == 0
    assert summary["counterexamples"]["goldbach"] == 0
    # 54 = 2*27 and 27 is not a sum of two primes; Conjecture 1 fails as stated
    assert summary["conjecture1_counterexamples"][0] == {"N": 54, "failing_primes": [2]}
    assert code == 1
    assert "conjecture1: first at N=54" in err


def test_sweep_general_8_100(capsys):
    code, out, err = run(capsys, "sweep", "--lo", 8, "--hi", 100, "--class", "general", "--no-timestamp")
    summary = _summary(err)
    assert {r["class"] for r in read_rows(out, "csv")} == {"general"}
    assert summary["counterexamples"] == {"goldbach": 0, "relaxed": 0, "conjecture1": 2, "bridge": 0}
    assert code == 1
    code, _, _ = run(capsys, "sweep", "--lo", 8, "--hi", 100, "--class", "general", "--claims", "goldbach,relaxed,bridge")
    assert code == 0


def test_sweep_empty_range(capsys):
    code, out, err = run(capsys, "sweep", "--lo", 9, "--hi", 9, "--no-timestamp")
    assert code == 0
    assert out == ",".join(COLUMNS) + "\n"
    assert _summary(err)["reports"] == 0


def test_fail_fast_names_n(capsys):
    code, out, err = run(capsys, "check-conjecture", "--lo", 8, "--hi", 1000, "--class", "general", "--fail-fast", "--format", "jsonl", "--no-timestamp")
    assert code == 1
    rows = read_rows(out, "jsonl")
    assert rows[-1]["N"] == 54
    assert "halted at N=54" in err


def test_check_theorem_columns(capsys, tmp_path):
    code, out, err = run(capsys, "check-theorem", "--lo", 8, "--hi", 300, "--no-timestamp")
    assert code == 0
    assert out.splitlines()[0] == ",".join(THEOREM_COLUMNS)
    assert _summary(err)["selected_claims"] == ["relaxed", "bridge"]
    code, out, _ = run(capsys, "check-conjecture", "--lo", 8, "--hi", 300, "--no-timestamp", "--class", "two_p")
    assert out.splitlines()[0] == ",".join(CONJECTURE_COLUMNS)
    assert code == 0  # Conjecture 1 is only claimed for the general class


def test_sweep_files_and_formats(capsys, tmp_path):
    out_path, sum_path = tmp_path / "rows.json", tmp_path / "summary.json"
    code, out, _ = run(capsys, "sweep", "--hi", 200, "--format", "json", "--out", out_path, "--summary-out", sum_path, "--claims", "relaxed")
    assert code == 0 and out == ""
    rows = json.loads(out_path.read_text())
    assert len(rows) == 97
    assert json.loads(sum_path.read_text())["reports"] == 97


def test_config_file_drives_sweep(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("lo = 8\nhi = 60\nformat = jsonl\ntimestamp = false\nclaims = relaxed\n")
    code, out, _ = run(capsys, "sweep", "--config", cfg)
    assert code == 0
    assert len(out.splitlines()) == 27
    code, out, _ = run(capsys, "sweep", "--config", cfg, "--hi", 20, "--format", "csv")
    assert len(read_rows(out, "csv")) == 7


def test_sweep_determinism(capsys, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for p in (a, b):
        run(capsys, "sweep", "--hi", 2000, "--no-timestamp", "--out", p, "--engine", "convolution")
    assert a.read_bytes() == b.read_bytes()


def test_singular(capsys):
    code, out, _ = run(capsys, "singular", 10, 15)
    assert code == 0
    got = json.loads(out)
    assert got["s_of_N"]["10"] == pytest.approx(1.760431, abs=1e-6)
    assert got["s_of_N"]["15"] == 0
    assert got["tail_bound"] <= 1e-6
    code, out, _ = run(capsys, "singular")
    assert set(json.loads(out)) == {"pi2", "tail_bound", "product_limit"}
    code, out, _ = run(capsys, "singular", "--product-limit", 5)
    assert json.loads(out)["pi2"] == pytest.approx(0.703125)


@pytest.mark.skipif(shutil.which("pcl") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(["pcl", "eval", "8"], capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["lambda"] == pytest.approx(0.693147, abs=1e-6)
    proc = subprocess.run(["pcl", "sieve", "--limit", "1"], capture_output=True, text=True, check=False)
    assert proc.returncode == 2
