import json
import subprocess
import sys

import numpy as np
import pytest

from cs2dspec.cli import RunConfig, main, run
from cs2dspec.errors import InvalidArgumentError
from cs2dspec.io import read_peaks, read_signal_grid, read_spectrum

SMALL = ["--n-tau", "12", "--n-t", "10"]
SMALL_AXES = ["--n-omega-tau", "64", "--n-omega-t", "64"]


def test_synth_twice_bit_identical(tmp_path):
    a, b = tmp_path / "a.sig2d", tmp_path / "b.sig2d"
    args = ["synth", "--preset", "rb-sum", "--seed", "7", "--noise-sigma", "0.01"]
    assert main(args + ["-o", str(a)]) == 0
    assert main(args + ["-o", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    sig = read_signal_grid(a)
    assert sig.values.shape == (51, 50)
    meta = json.loads((tmp_path / "a.sig2d.meta.json").read_text())
    assert meta["config"]["seed"] == 7 and meta["config"]["argv"] == args + ["-o", str(a)]


def test_end_to_end_compare(tmp_path):
    sig = tmp_path / "s.sig2d"
    ft, cs = tmp_path / "ft.spec2d", tmp_path / "cs.spec2d"
    report = tmp_path / "cmp.json"
    assert main(["synth", "--damping", "0", "-o", str(sig)] + SMALL) == 0
    assert main(["transform", str(sig), "--kind", "ft", "-o", str(ft)] + SMALL_AXES) == 0
    assert main(["transform", str(sig), "--kind", "cs", "--eta", "1e-4", "--workers", "1",
                 "-o", str(cs)] + SMALL_AXES) == 0
    assert main(["compare", str(ft), str(cs), "-o", str(report)]) == 0
    data = json.loads(report.read_text())
    assert data["pairs"], data
    assert all(p["ratio_tau"] > 0 and p["ratio_t"] > 0 for p in data["pairs"])
    meta = json.loads((tmp_path / "cs.spec2d.meta.json").read_text())
    assert meta["config"]["eta"] == 1e-4
    assert meta["config"]["max_inner_iterations"] > 0
    assert [p["n_solves"] for p in meta["report"]["passes"]] == [12, 64]
    assert read_spectrum(cs).metadata["eta"] == 1e-4


def test_analyze_writes_lab_frame(tmp_path):
    sig, ft, peaks = tmp_path / "s.sig2d", tmp_path / "ft.spec2d", tmp_path / "p.tsv"
    assert main(["synth", "--preset", "rb-diff", "-o", str(sig)] + SMALL) == 0
    assert main(["transform", str(sig), "-o", str(ft)] + SMALL_AXES) == 0
    assert main(["analyze", str(ft), "-o", str(peaks)]) == 0
    text = peaks.read_text()
    assert "# frame_frequency=2.34" in text and "lab_omega_tau" in text
    assert read_peaks(peaks)


def test_rerun_from_metadata(tmp_path):
    sig = tmp_path / "s.sig2d"
    assert main(["synth", "--seed", "3", "--noise-sigma", "0.1", "-o", str(sig)] + SMALL) == 0
    first = sig.read_bytes()
    sig.unlink()
    assert main(["rerun", str(tmp_path / "s.sig2d.meta.json")]) == 0
    assert sig.read_bytes() == first


def test_unknown_flag_prints_usage(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["transform", "x.sig2d", "-o", "y", "--bogus"])
    assert exc.value.code != 0
    assert "usage:" in capsys.readouterr().err


def test_failure_is_one_line(tmp_path, capsys):
    code = main(["transform", str(tmp_path / "absent.sig2d"), "-o", str(tmp_path / "out")])
    err = capsys.readouterr().err
    assert code != 0
    assert err.count("\n") == 1 and "error" in err


def test_parse_error_reported(tmp_path, capsys):
    bad = tmp_path / "bad.sig2d"
    bad.write_text("# n_tau=1\n0 0 1 0\n")
    assert main(["transform", str(bad), "-o", str(tmp_path / "o")]) == 1
    assert "missing header key" in capsys.readouterr().err


def test_worker_env_override(tmp_path, monkeypatch):
    from cs2dspec.cli import build_parser, config_from_args
    monkeypatch.setenv("CS2DSPEC_WORKERS", "3")
    args = build_parser().parse_args(["transform", "a", "-o", "b"])
    assert config_from_args(args).worker_count == 3
    args = build_parser().parse_args(["transform", "a", "-o", "b", "--workers", "2"])
    assert config_from_args(args).worker_count == 2
    monkeypatch.delenv("CS2DSPEC_WORKERS")
    args = build_parser().parse_args(["transform", "a", "-o", "b"])
    assert config_from_args(args).worker_count == 0


def test_run_config_validation():
    with pytest.raises(InvalidArgumentError):
        RunConfig(mode="transform", output="o", inputs=["a"], n_omega_t=1)
    with pytest.raises(InvalidArgumentError):
        RunConfig(mode="compare", output="o", inputs=["a"])
    with pytest.raises(InvalidArgumentError):
        RunConfig(mode="synth", output="")
    with pytest.raises(InvalidArgumentError):
        RunConfig(mode="transform", output="o", inputs=["a"], worker_count=-1)


def test_run_returns_status(tmp_path):
    cfg = RunConfig(mode="synth", output=str(tmp_path / "x.sig2d"), n_tau=2, n_t=2)
    assert run(cfg) == 0
    assert RunConfig.from_dict(cfg.to_dict()) == cfg


def test_module_entry_point(tmp_path):
    out = subprocess.run([sys.executable, "-m", "cs2dspec", "--help"], capture_output=True, text=True)
    assert out.returncode == 0
    for cmd in ("synth", "transform", "analyze", "compare"):
        assert cmd in out.stdout
