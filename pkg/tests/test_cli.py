import csv
import json

import pytest

from pointspec.cli import main
from pointspec.geometry import Interval
from pointspec.sources import fibonacci_substitution


def write_cfg(path, doc):
    with open(path, "w") as fh:
        json.dump(doc, fh)
    return str(path)


def test_generate_fibonacci_matches_substitution_oracle(tmp_path):
    cfg = write_cfg(tmp_path / "cfg.json", {
        "source": {"type": "fibonacci"},
        "generate": {"region": [0, 100]},
    })
    out = tmp_path / "out"
    assert main(["generate", "--config", cfg, "--out", str(out)]) == 0
    doc = json.loads((out / "points.json").read_text())
    assert doc["coords"] == "exact"
    oracle = fibonacci_substitution().window(Interval(0, 100)).total_points
    assert len(doc["points"]) == oracle


def test_generate_lattice(tmp_path):
    cfg = write_cfg(tmp_path / "cfg.json", {
        "source": {"type": "lattice", "basis": [[1.0]]},
        "generate": {"region": [0, 5]},
    })
    out = tmp_path / "out"
    assert main(["generate", "--config", cfg, "--out", str(out)]) == 0
    doc = json.loads((out / "points.json").read_text())
    assert len(doc["points"]) == 6


def test_bad_spec_exits_2(tmp_path):
    cfg = write_cfg(tmp_path / "cfg.json", {
        "source": {"type": "nope"}, "generate": {"region": [0, 5]},
    })
    assert main(["generate", "--config", cfg, "--out", str(tmp_path / "o")]) == 2
    assert main(["generate", "--config", str(tmp_path / "missing.json"),
                 "--out", str(tmp_path / "o")]) == 2


def test_freq_ratio_column_converges(tmp_path):
    cfg = write_cfg(tmp_path / "cfg.json", {
        "source": {"type": "lattice", "basis": [[1.0]]},
        "van_hove": {"n0": 125, "doublings": 3},
        "freq": {"cluster": [[0.0]], "offsets": 1},
    })
    out = tmp_path / "out"
    assert main(["freq", "--config", cfg, "--out", str(out)]) == 0
    with open(out / "freq.csv") as fh:
        rows = list(csv.DictReader(fh))
    last = [r for r in rows if float(r["n"]) == 1000]
    assert all(abs(float(r["ratio"]) - 1.0) <= 5e-4 for r in last)
    summary = json.loads((out / "freq.json").read_text())
    assert abs(summary["value"] - 1.0) <= 5e-4


def test_diffract_lattice_integer_peaks(tmp_path):
    cfg = write_cfg(tmp_path / "cfg.json", {
        "source": {"type": "lattice", "basis": [[1.0]]},
        "diffract": {"k_min": -2, "k_max": 2, "resolution": 0.01,
                     "n_schedule": [500, 1000]},
    })
    out = tmp_path / "out"
    assert main(["diffract", "--config", cfg, "--out", str(out), "--plot-data"]) == 0
    with open(out / "diffract.csv") as fh:
        rows = [r for r in csv.DictReader(fh) if r["retained"] == "1"]
    ks = sorted(round(float(r["k"])) for r in rows)
    assert ks == [-2, -1, 0, 1, 2]
    assert (out / "diffract.dat").exists()


def test_metric_bracket_output(tmp_path):
    cfg = write_cfg(tmp_path / "cfg.json", {
        "source": {"type": "lattice", "basis": [[1.0]]},
        "metric": {"other_source": {"type": "lattice", "basis": [[1.0]], "offset": 0.1},
                   "eps_grid": 0.01},
    })
    out = tmp_path / "out"
    assert main(["metric", "--config", cfg, "--out", str(out)]) == 0
    doc = json.loads((out / "metric.json").read_text())
    assert doc["lower"] <= 0.05 <= doc["upper"]
    assert doc["upper"] - doc["lower"] <= 0.01


def test_partition_output(tmp_path):
    cfg = write_cfg(tmp_path / "cfg.json", {
        "source": {"type": "lattice", "basis": [[1.0]]},
        "partition": {"R": 1.0, "delta": 0.6, "scan_length": 200},
    })
    out = tmp_path / "out"
    assert main(["partition", "--config", cfg, "--out", str(out)]) == 0
    doc = json.loads((out / "partition.json").read_text())
    assert doc["n_cells"] == 2
    total = sum(c["interval"][1] - c["interval"][0] for c in doc["cells"])
    assert total == pytest.approx(1.0)


def test_autocorr_outputs_both_methods(tmp_path):
    cfg = write_cfg(tmp_path / "cfg.json", {
        "source": {"type": "lattice", "basis": [[1.0]], "colors": 2},
        "weights": [1, -1],
        "autocorr": {"radius": 3, "n": 500, "method": "both"},
    })
    out = tmp_path / "out"
    assert main(["autocorr", "--config", cfg, "--out", str(out)]) == 0
    with open(out / "autocorr.csv") as fh:
        rows = list(csv.DictReader(fh))
    methods = {r["method"] for r in rows}
    assert methods == {"direct", "from-frequencies"}
    c1 = [float(r["re_c"]) for r in rows if r["method"] == "direct"
          and abs(float(r["t"]) - 1.0) < 1e-9]
    assert c1 and c1[0] == pytest.approx(-1.0, abs=2e-3)


def test_byte_identical_reruns_and_manifest_roundtrip(tmp_path):
    cfg = write_cfg(tmp_path / "cfg.json", {
        "source": {"type": "poisson", "intensity": 1.0, "seed": 4},
        "generate": {"region": [0, 50]},
    })
    out1, out2, out3 = (tmp_path / d for d in ("o1", "o2", "o3"))
    assert main(["generate", "--config", cfg, "--out", str(out1)]) == 0
    assert main(["generate", "--config", cfg, "--out", str(out2)]) == 0
    assert (out1 / "points.json").read_bytes() == (out2 / "points.json").read_bytes()
    # re-run from the emitted manifest reproduces outputs
    assert main(["generate", "--config", str(out1 / "manifest.json"),
                 "--out", str(out3)]) == 0
    assert (out1 / "points.json").read_bytes() == (out3 / "points.json").read_bytes()
    assert (out1 / "manifest.json").read_bytes() == (out3 / "manifest.json").read_bytes()


def test_classes_command(tmp_path):
    cfg = write_cfg(tmp_path / "cfg.json", {
        "source": {"type": "lattice", "basis": [[1.0]]},
        "classes": {"R": 1.0, "scan": [0, 50]},
    })
    out = tmp_path / "out"
    assert main(["classes", "--config", cfg, "--out", str(out)]) == 0
    doc = json.loads((out / "classes.json").read_text())
    assert doc["n_classes"] == 1


def test_verify_unknown_suite_exits_2(capsys):
    assert main(["verify", "nonsense"]) == 2


def test_verify_lattice_suite_passes(capsys, tmp_path):
    rc = main(["verify", "lattice", "--fast", "--out", str(tmp_path)])
    outtext = capsys.readouterr().out
    assert rc == 0
    assert "[PASS] lattice_frequency" in outtext
    assert (tmp_path / "verify.txt").exists()


def test_threads_flag_validated(tmp_path):
    cfg = write_cfg(tmp_path / "cfg.json", {
        "source": {"type": "lattice", "basis": [[1.0]]},
        "generate": {"region": [0, 5]},
    })
    assert main(["generate", "--config", cfg, "--out", str(tmp_path / "o"),
                 "--threads", "0"]) == 2
