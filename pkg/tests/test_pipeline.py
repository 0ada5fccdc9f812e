import numpy as np
import pytest

from cs2dspec import BpdnConfig, ExponentialMode, TimeGrid, cs2d, ft2d, make_frequency_grid, synthesize
from cs2dspec.errors import InvalidArgumentError, PipelineError
from cs2dspec.grids import SignalGrid2D
from cs2dspec.pipeline import WORKERS_ENV, cs_pass_t, parallel_map, resolve_workers

from oracles import naive_dft


def _small_signal(n_tau=12, n_t=10, n_w=64, bins=((40, 20), (10, 50)), delta=1.0):
    tau_grid, t_grid = TimeGrid(delta, n_tau), TimeGrid(delta, n_t)
    f_tau = make_frequency_grid(tau_grid, n_w).frequencies
    f_t = make_frequency_grid(t_grid, n_w).frequencies
    modes = [ExponentialMode(f_tau[i], f_t[k], 1.0 + 0.5j * n) for n, (i, k) in enumerate(bins)]
    return synthesize(modes, tau_grid, t_grid)


def test_ft2d_matches_nested_oracle():
    rng = np.random.default_rng(0)
    tg_tau, tg_t = TimeGrid(1.5, 5), TimeGrid(2.0, 4, 1)
    sig = SignalGrid2D(tg_tau, tg_t, 0.0, rng.standard_normal((5, 4)) + 1j * rng.standard_normal((5, 4)))
    spec = ft2d(sig, 7, 6)
    f_tau = make_frequency_grid(tg_tau, 7).frequencies
    f_t = make_frequency_grid(tg_t, 6).frequencies
    half = np.array([naive_dft(row, tg_t.times, f_t, tg_t.delta) for row in sig.values])
    ref = np.array([naive_dft(col, tg_tau.times, f_tau, tg_tau.delta) for col in half.T]).T
    assert np.linalg.norm(spec.values - ref) <= 1e-12 * np.linalg.norm(ref)
    other = ft2d(sig, 7, 6, axis_order="tau-first")
    np.testing.assert_allclose(other.values, spec.values, rtol=1e-12, atol=1e-12)


def test_cs2d_recovers_on_grid_modes():
    bins = ((40, 20), (10, 50))
    sig = _small_signal(bins=bins)
    spec, report = cs2d(sig, 64, 64, BpdnConfig(eta=1e-6))
    mag = np.abs(spec.values)
    top = np.argsort(mag.ravel())[::-1][:2]
    assert {tuple(map(int, np.unravel_index(j, mag.shape))) for j in top} == set(bins)
    assert report.n_solves == 12 + 64
    assert len(report.first.records) == 12 and len(report.second.records) == 64
    assert spec.provenance == "cs" and spec.metadata["eta"] == 1e-6


def test_cs2d_axis_orders_agree_on_peaks():
    sig = _small_signal()
    a, _ = cs2d(sig, 64, 64, BpdnConfig(eta=1e-6))
    b, rep = cs2d(sig, 64, 64, BpdnConfig(eta=1e-6), axis_order="tau-first")
    assert rep.first.axis == "tau"
    for spec in (a, b):
        mag = np.abs(spec.values)
        assert np.unravel_index(np.argmax(mag), mag.shape) in {(40, 20), (10, 50)}


def test_cs2d_worker_count_bit_identical():
    sig = _small_signal()
    a, _ = cs2d(sig, 64, 64, BpdnConfig(eta=1e-6), workers=1)
    b, _ = cs2d(sig, 64, 64, BpdnConfig(eta=1e-6), workers=2)
    assert np.array_equal(a.values, b.values)


def test_zero_rows_are_fine():
    sig = SignalGrid2D(TimeGrid(1.0, 4), TimeGrid(1.0, 5), 0.0, np.zeros((4, 5)))
    spec, report = cs2d(sig, 8, 8)
    assert np.all(spec.values == 0)
    assert set(report.first.statuses) == {"converged"}


def test_failed_row_is_named():
    values = np.zeros((3, 6), complex)
    values[1] = 1e200
    sig = SignalGrid2D(TimeGrid(1.0, 3), TimeGrid(1.0, 6), 0.0, values)
    with pytest.raises(PipelineError, match="row 1"):
        cs_pass_t(sig, make_frequency_grid(sig.t_grid, 12), BpdnConfig(normalized=False))


def test_bad_axis_order():
    with pytest.raises(InvalidArgumentError):
        ft2d(_small_signal(), 8, 8, axis_order="diagonal")


def test_report_dict():
    sig = _small_signal(n_tau=4, n_t=4, n_w=8, bins=((1, 2),))
    _, report = cs2d(sig, 8, 8)
    d = report.to_dict()
    assert d["eta"] == BpdnConfig().eta
    assert [p["n_solves"] for p in d["passes"]] == [4, 8]
    assert sum(d["passes"][0]["status_counts"].values()) == 4


def test_resolve_workers(monkeypatch):
    monkeypatch.delenv(WORKERS_ENV, raising=False)
    assert resolve_workers(None) == 1
    monkeypatch.setenv(WORKERS_ENV, "3")
    assert resolve_workers(None) == 3
    assert resolve_workers(2) == 2
    assert resolve_workers(0) >= 1
    with pytest.raises(InvalidArgumentError):
        resolve_workers(-1)


def test_parallel_map_order():
    assert parallel_map(abs, [-3, 1, -2, 5], 2) == [3, 1, 2, 5]
