"""Two-pass 2D compressed sensing and the baseline 2D discrete FT.

The 2D problem is reduced to independent 1D BPDN solves: first along the
waiting time ``t`` for every coherence-time row, then along ``tau`` for
every column of the half-transformed data. Solves are dispatched through
an order-preserving map, so the assembled spectrum does not depend on the
worker count.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .bpdn import BpdnConfig, solve_bpdn, solve_bpdn_normalized
from .errors import InvalidArgumentError, NumericalFailure, PipelineError
from .fourier import FourierOperator, dft_matrix
from .grids import HalfTransformed2D, Spectrum2D, make_frequency_grid

__all__ = [
    "WORKERS_ENV",
    "SolveRecord",
    "PassReport",
    "PipelineReport",
    "resolve_workers",
    "parallel_map",
    "cs_pass_t",
    "cs_pass_tau",
    "cs2d",
    "cs2d_batch",
    "ft2d",
]

WORKERS_ENV = "CS2DSPEC_WORKERS"
AXIS_ORDERS = ("t-first", "tau-first")


@dataclass(frozen=True)
class SolveRecord:
    index: int
    status: str
    outer_iterations: int
    inner_iterations: int
    residual_norm: float


@dataclass(frozen=True)
class PassReport:
    """Per-solve records of one pass, in index order."""

    axis: str
    records: tuple
    wall_clock: float

    @property
    def statuses(self):
        return [r.status for r in self.records]

    def count(self, status):
        return sum(r.status == status for r in self.records)


@dataclass(frozen=True)
class PipelineReport:
    first: PassReport
    second: PassReport
    eta: float
    axis_order: str
    config: dict = field(default_factory=dict)

    @property
    def n_solves(self):
        return len(self.first.records) + len(self.second.records)

    def to_dict(self):
        def pass_dict(p):
            return {
                "axis": p.axis,
                "wall_clock_s": p.wall_clock,
                "n_solves": len(p.records),
                "status_counts": {s: p.count(s) for s in sorted(set(p.statuses))},
                "records": [
                    [r.index, r.status, r.outer_iterations, r.inner_iterations, r.residual_norm]
                    for r in p.records
                ],
            }

        return {
            "eta": self.eta,
            "axis_order": self.axis_order,
            "solver": self.config,
            "passes": [pass_dict(self.first), pass_dict(self.second)],
        }


def resolve_workers(workers=None):
    """Worker count: explicit value, else the environment override, else 1.

    Zero means one worker per available processor.
    """
    if workers is None:
        env = os.environ.get(WORKERS_ENV)
        workers = int(env) if env else 1
    if workers < 0:
        raise InvalidArgumentError(f"worker count must be >= 0, got {workers}")
    if workers == 0:
        try:
            workers = len(os.sched_getaffinity(0))
        except AttributeError:
            workers = os.cpu_count() or 1
    return workers


def parallel_map(fn, items, workers=1):
    """``list(map(fn, items))`` spread over ``workers`` processes.

    Results are returned in input order whatever the completion order.
    """
    items = list(items)
    workers = resolve_workers(workers)
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    chunksize = max(1, len(items) // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=chunksize))


def _solve_one(job):
    h, time_grid, freq_grid, config = job
    try:
        if config.normalized:
            res = solve_bpdn_normalized(FourierOperator(time_grid, freq_grid, normalized=True), h, config)
        else:
            res = solve_bpdn(FourierOperator(time_grid, freq_grid, normalized=False), h, config)
    except NumericalFailure as exc:
        return None, str(exc)
    return res, None


def _cs_rows(matrix, time_grid, freq_grid, config, workers, axis):
    """BPDN on every row of ``matrix``; rows are time series on ``time_grid``."""
    start = time.perf_counter()
    jobs = [(row, time_grid, freq_grid, config) for row in matrix]
    results = parallel_map(_solve_one, jobs, workers)
    out = np.zeros((matrix.shape[0], freq_grid.count), dtype=np.complex128)
    records = []
    for i, (res, err) in enumerate(results):
        if res is None:
            raise PipelineError(f"{axis} pass: solve for row {i} failed: {err}")
        out[i] = res.coefficients
        records.append(SolveRecord(i, str(res.status), res.outer_iterations,
                                   res.inner_iterations, res.residual_norm))
    return out, PassReport(axis, tuple(records), time.perf_counter() - start)


def cs_pass_t(signal, freq_grid_t, config=BpdnConfig(), workers=1):
    """First pass: 1D CS along ``t`` for every coherence-time row.

    Returns
    -------
    (HalfTransformed2D, PassReport)
    """
    values, report = _cs_rows(signal.values, signal.t_grid, freq_grid_t, config, workers, "t")
    half = HalfTransformed2D(signal.tau_grid, freq_grid_t, signal.population_time, values)
    return half, report


def cs_pass_tau(half, freq_grid_tau, config=BpdnConfig(), workers=1):
    """Second pass: 1D CS along ``tau`` for every ``omega_t`` column.

    Returns
    -------
    (Spectrum2D, PassReport)
    """
    values, report = _cs_rows(half.values.T, half.tau_grid, freq_grid_tau, config, workers, "tau")
    spectrum = Spectrum2D(freq_grid_tau, half.omega_t_grid, half.population_time,
                          values.T, provenance="cs")
    return spectrum, report


def _check_order(axis_order):
    if axis_order not in AXIS_ORDERS:
        raise InvalidArgumentError(f"axis_order must be one of {AXIS_ORDERS}, got {axis_order!r}")


def cs2d(signal, n_omega_tau=1000, n_omega_t=1000, config=BpdnConfig(), workers=1,
         axis_order="t-first", inclusive=False):
    """2D spectrum by two passes of 1D BPDN.

    With the default ``axis_order="t-first"`` every coherence-time row is
    transformed along ``t`` and then every resulting ``omega_t`` column
    along ``tau``; ``"tau-first"`` swaps the roles.

    Returns
    -------
    (Spectrum2D, PipelineReport)
    """
    _check_order(axis_order)
    grid_tau = make_frequency_grid(signal.tau_grid, n_omega_tau, inclusive)
    grid_t = make_frequency_grid(signal.t_grid, n_omega_t, inclusive)
    if axis_order == "t-first":
        half, first = cs_pass_t(signal, grid_t, config, workers)
        spectrum, second = cs_pass_tau(half, grid_tau, config, workers)
        values = spectrum.values
    else:
        partial, first = _cs_rows(signal.values.T, signal.tau_grid, grid_tau, config, workers, "tau")
        values, second = _cs_rows(partial.T, signal.t_grid, grid_t, config, workers, "t")
    report = PipelineReport(first, second, config.eta, axis_order, config.to_dict())
    meta = {"eta": config.eta, "axis_order": axis_order, "solver": config.to_dict(),
            "inclusive": inclusive, "label": signal.label, **signal.metadata}
    spectrum = Spectrum2D(grid_tau, grid_t, signal.population_time, values, "cs", metadata=meta)
    return spectrum, report


def cs2d_batch(signals, n_omega_tau=1000, n_omega_t=1000, config=BpdnConfig(), workers=1,
               axis_order="t-first"):
    """Independent ``cs2d`` runs, one per population time."""
    return [cs2d(s, n_omega_tau, n_omega_t, config, workers, axis_order) for s in signals]


def ft2d(signal, n_omega_tau=1000, n_omega_t=1000, axis_order="t-first", inclusive=False):
    """2D direct Fourier sum on the same frequency grids as ``cs2d``."""
    _check_order(axis_order)
    grid_tau = make_frequency_grid(signal.tau_grid, n_omega_tau, inclusive)
    grid_t = make_frequency_grid(signal.t_grid, n_omega_t, inclusive)
    d_tau = dft_matrix(signal.tau_grid, grid_tau)
    d_t = dft_matrix(signal.t_grid, grid_t)
    if axis_order == "t-first":
        values = d_tau @ (signal.values @ d_t.T)
    else:
        values = (d_tau @ signal.values) @ d_t.T
    meta = {"axis_order": axis_order, "inclusive": inclusive, "label": signal.label,
            **signal.metadata}
    return Spectrum2D(grid_tau, grid_t, signal.population_time, values, "ft", metadata=meta)
