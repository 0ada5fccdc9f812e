"""Command-line front end.

Subcommands::

    cs2dspec synth     --preset rb-sum --seed 7 -o signal.sig2d
    cs2dspec transform signal.sig2d --kind cs -o cs.spec2d
    cs2dspec analyze   cs.spec2d -o peaks.tsv
    cs2dspec compare   ft.spec2d cs.spec2d -o comparison.json

Every run also writes ``<output>.meta.json`` with the full configuration
and the command line; ``cs2dspec rerun <meta.json>`` repeats a run from
that file alone.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .analysis import DEFAULT_THRESHOLD, WIDTH_METRIC, compare_resolution, find_peaks
from .bpdn import BpdnConfig
from .errors import InvalidArgumentError
from .grids import TimeGrid
from .io import read_signal_grid, read_spectrum, write_peaks, write_signal_grid, write_spectrum
from .pipeline import AXIS_ORDERS, WORKERS_ENV, cs2d, ft2d, resolve_workers
from .synth import (
    DEFAULT_DAMPING,
    DEFAULT_FRAME_FREQUENCY,
    PAPER_DELTA_FS,
    PAPER_N_T,
    PAPER_N_TAU,
    NoiseSpec,
    rb_signal,
)

__all__ = ["RunConfig", "build_parser", "config_from_args", "run", "rerun", "main"]

MODES = ("synth", "transform", "analyze", "compare")
PRESETS = {"rb-sum": "sum", "rb-diff": "diff"}

_DEFAULT_BPDN = BpdnConfig()


@dataclass
class RunConfig:
    """Everything needed to reproduce one CLI run."""

    mode: str
    output: str
    inputs: list = field(default_factory=list)
    # transform
    kind: str = "ft"
    n_omega_tau: int = 1000
    n_omega_t: int = 1000
    axis_order: str = "t-first"
    inclusive: bool = False
    eta: float = _DEFAULT_BPDN.eta
    max_outer_iterations: int = _DEFAULT_BPDN.max_outer_iterations
    max_inner_iterations: int = _DEFAULT_BPDN.max_inner_iterations
    pareto_tolerance: float = _DEFAULT_BPDN.pareto_tolerance
    optimality_tolerance: float = _DEFAULT_BPDN.optimality_tolerance
    history_window: int = _DEFAULT_BPDN.history_window
    step_min: float = _DEFAULT_BPDN.step_bounds[0]
    step_max: float = _DEFAULT_BPDN.step_bounds[1]
    normalized: bool = _DEFAULT_BPDN.normalized
    worker_count: int = 0
    # synth
    preset: str = "rb-sum"
    seed: int = 0
    noise_sigma: float = 0.0
    population_time: float = 140.0
    damping: float = DEFAULT_DAMPING
    frame_frequency: float = DEFAULT_FRAME_FREQUENCY
    delta_fs: float = PAPER_DELTA_FS
    n_tau: int = PAPER_N_TAU
    n_t: int = PAPER_N_T
    # analyze / compare
    threshold_fraction: float = DEFAULT_THRESHOLD
    matching_radius: float | None = None
    argv: list = field(default_factory=list)

    def __post_init__(self):
        if self.mode not in MODES:
            raise InvalidArgumentError(f"unknown mode {self.mode!r}")
        if not self.output:
            raise InvalidArgumentError("output path must be nonempty")
        needed = {"synth": 0, "transform": 1, "analyze": 1, "compare": 2}[self.mode]
        if len(self.inputs) != needed or not all(self.inputs):
            raise InvalidArgumentError(f"{self.mode} takes {needed} input path(s)")
        if self.kind not in ("ft", "cs"):
            raise InvalidArgumentError(f"kind must be ft or cs, got {self.kind!r}")
        if self.n_omega_tau < 2 or self.n_omega_t < 2:
            raise InvalidArgumentError("frequency axes need at least 2 points")
        if self.worker_count < 0:
            raise InvalidArgumentError("worker count must be >= 0")
        if self.preset not in PRESETS:
            raise InvalidArgumentError(f"unknown preset {self.preset!r}; choose from {sorted(PRESETS)}")
        if self.axis_order not in AXIS_ORDERS:
            raise InvalidArgumentError(f"axis order must be one of {AXIS_ORDERS}")

    def bpdn_config(self):
        return BpdnConfig(
            eta=self.eta,
            max_outer_iterations=self.max_outer_iterations,
            max_inner_iterations=self.max_inner_iterations,
            pareto_tolerance=self.pareto_tolerance,
            step_bounds=(self.step_min, self.step_max),
            optimality_tolerance=self.optimality_tolerance,
            history_window=self.history_window,
            normalized=self.normalized,
        )

    def to_dict(self):
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, data):
        names = {f.name for f in dataclasses.fields(cls)}
        return cls(**{k: v for k, v in data.items() if k in names})

    @property
    def metadata_path(self):
        return self.output + ".meta.json"


def build_parser():
    parser = argparse.ArgumentParser(
        prog="cs2dspec",
        description="2D spectra from sparse time-domain grids by compressed sensing.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="mode", required=True, metavar="COMMAND")

    def common(p):
        p.add_argument("-o", "--output", required=True, help="output file")

    p = sub.add_parser("synth", help="synthesize a Rb-like time-domain grid (SIG2D)")
    common(p)
    p.add_argument("--preset", choices=sorted(PRESETS), default="rb-sum")
    p.add_argument("--seed", type=int, default=0, help="noise seed")
    p.add_argument("--noise-sigma", type=float, default=0.0,
                   help="standard deviation of complex Gaussian noise")
    p.add_argument("--population-time", type=float, default=140.0, help="T in fs")
    p.add_argument("--damping", type=float, default=DEFAULT_DAMPING, help="decay rate in 1/fs")
    p.add_argument("--frame-frequency", type=float, default=DEFAULT_FRAME_FREQUENCY,
                   help="rotating-frame frequency in rad/fs")
    p.add_argument("--delta", dest="delta_fs", type=float, default=PAPER_DELTA_FS,
                   help="sampling step in fs for both delays")
    p.add_argument("--n-tau", type=int, default=PAPER_N_TAU)
    p.add_argument("--n-t", type=int, default=PAPER_N_T)

    p = sub.add_parser("transform", help="2D spectrum of a SIG2D file by FT or CS (SPEC2D)")
    p.add_argument("input", help="SIG2D file")
    common(p)
    p.add_argument("--kind", choices=("ft", "cs"), default="ft")
    p.add_argument("--n-omega-tau", type=int, default=1000)
    p.add_argument("--n-omega-t", type=int, default=1000)
    p.add_argument("--axis-order", choices=AXIS_ORDERS, default="t-first")
    p.add_argument("--inclusive", action="store_true",
                   help="place the last frequency point at +pi/delta")
    p.add_argument("--eta", type=float, default=_DEFAULT_BPDN.eta,
                   help="residual bound of each normalized 1D solve")
    p.add_argument("--max-outer", dest="max_outer_iterations", type=int,
                   default=_DEFAULT_BPDN.max_outer_iterations)
    p.add_argument("--max-inner", dest="max_inner_iterations", type=int,
                   default=_DEFAULT_BPDN.max_inner_iterations,
                   help="projected-gradient iterations per 1D solve")
    p.add_argument("--pareto-tol", dest="pareto_tolerance", type=float,
                   default=_DEFAULT_BPDN.pareto_tolerance)
    p.add_argument("--opt-tol", dest="optimality_tolerance", type=float,
                   default=_DEFAULT_BPDN.optimality_tolerance)
    p.add_argument("--history-window", type=int, default=_DEFAULT_BPDN.history_window)
    p.add_argument("--step-min", type=float, default=_DEFAULT_BPDN.step_bounds[0])
    p.add_argument("--step-max", type=float, default=_DEFAULT_BPDN.step_bounds[1])
    p.add_argument("--unnormalized", dest="normalized", action="store_false",
                   help="solve with the scaled operator and raw data")
    p.add_argument("--workers", dest="worker_count", type=int, default=None,
                   help=f"processes for the 1D solves; 0 = all processors "
                        f"(default: ${WORKERS_ENV} or 0)")

    p = sub.add_parser("analyze", help="peak table of a SPEC2D file (TSV)")
    p.add_argument("input", help="SPEC2D file")
    common(p)
    p.add_argument("--threshold", dest="threshold_fraction", type=float, default=DEFAULT_THRESHOLD)

    p = sub.add_parser("compare", help="FT vs CS peak widths (JSON)")
    p.add_argument("ft", help="SPEC2D file of the FT spectrum")
    p.add_argument("cs", help="SPEC2D file of the CS spectrum")
    common(p)
    p.add_argument("--threshold", dest="threshold_fraction", type=float, default=DEFAULT_THRESHOLD)
    p.add_argument("--matching-radius", type=float, default=None,
                   help="pairing radius in rad/fs (default: 3 bins)")
    return parser


def config_from_args(args, argv=None):
    values = vars(args).copy()
    mode = values.pop("mode")
    if mode == "compare":
        inputs = [values.pop("ft"), values.pop("cs")]
    elif "input" in values:
        inputs = [values.pop("input")]
    else:
        inputs = []
    if values.get("worker_count", 0) is None:
        env = os.environ.get(WORKERS_ENV)
        values["worker_count"] = int(env) if env else 0
    return RunConfig(mode=mode, inputs=inputs, argv=list(argv or []), **values)


def _write_json(path, payload):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _peak_dict(p):
    return dataclasses.asdict(p) | {"index": list(p.index)}


def _run_synth(cfg):
    grid_tau = TimeGrid(cfg.delta_fs, cfg.n_tau)
    grid_t = TimeGrid(cfg.delta_fs, cfg.n_t)
    noise = NoiseSpec(cfg.noise_sigma, cfg.seed) if cfg.noise_sigma > 0 else None
    signal = rb_signal(PRESETS[cfg.preset], population_time=cfg.population_time, noise=noise,
                       frame_frequency=cfg.frame_frequency, tau_grid=grid_tau, t_grid=grid_t,
                       damping=cfg.damping)
    write_signal_grid(signal, cfg.output)
    return {}


def _run_transform(cfg):
    signal = read_signal_grid(cfg.inputs[0])
    if cfg.kind == "ft":
        spectrum = ft2d(signal, cfg.n_omega_tau, cfg.n_omega_t, cfg.axis_order, cfg.inclusive)
        extra = {}
    else:
        workers = resolve_workers(cfg.worker_count)
        spectrum, report = cs2d(signal, cfg.n_omega_tau, cfg.n_omega_t, cfg.bpdn_config(),
                                workers, cfg.axis_order, cfg.inclusive)
        extra = {"report": report.to_dict(), "resolved_workers": workers}
    write_spectrum(spectrum, cfg.output)
    return extra


def _run_analyze(cfg):
    spectrum = read_spectrum(cfg.inputs[0])
    peaks = find_peaks(spectrum, cfg.threshold_fraction)
    write_peaks(peaks, cfg.output, spectrum.metadata.get("frame_frequency"),
                spectrum.metadata.get("label", "sum"))
    return {"n_peaks": len(peaks), "width_metric": WIDTH_METRIC}


def _run_compare(cfg):
    ft = read_spectrum(cfg.inputs[0])
    cs = read_spectrum(cfg.inputs[1])
    comp = compare_resolution(ft, cs, cfg.matching_radius, cfg.threshold_fraction)
    payload = {
        "width_metric": WIDTH_METRIC,
        "matching_radius": comp.matching_radius,
        "min_ratio": None if not comp.pairs else comp.min_ratio,
        "pairs": [
            {"ft": _peak_dict(p.ft), "cs": _peak_dict(p.cs),
             "ratio_tau": p.ratio_tau, "ratio_t": p.ratio_t}
            for p in comp.pairs
        ],
        "unmatched_ft": [_peak_dict(p) for p in comp.unmatched_ft],
        "unmatched_cs": [_peak_dict(p) for p in comp.unmatched_cs],
    }
    _write_json(cfg.output, payload)
    return {"n_pairs": len(comp.pairs)}


_DISPATCH = {
    "synth": _run_synth,
    "transform": _run_transform,
    "analyze": _run_analyze,
    "compare": _run_compare,
}


def run(config):
    """Execute one configured run and write its metadata file.

    Returns
    -------
    int
        0 on success, 1 on failure (after printing a one-line diagnostic
        to stderr).
    """
    try:
        extra = _DISPATCH[config.mode](config)
        _write_json(config.metadata_path, {
            "version": __version__,
            "config": config.to_dict(),
            "numpy": np.__version__,
            **extra,
        })
    except Exception as exc:  # single-line diagnostic for any failure
        msg = " ".join(str(exc).split()) or type(exc).__name__
        print(f"cs2dspec {config.mode}: error: {msg}", file=sys.stderr)
        return 1
    return 0


def rerun(metadata_path):
    """Repeat the run recorded in a ``.meta.json`` file."""
    with open(metadata_path, encoding="utf-8") as fh:
        data = json.load(fh)
    return run(RunConfig.from_dict(data["config"]))


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    if argv[:1] == ["rerun"]:
        if len(argv) != 2:
            print("usage: cs2dspec rerun META_JSON", file=sys.stderr)
            return 2
        try:
            return rerun(argv[1])
        except (OSError, ValueError, KeyError, TypeError) as exc:
            print(f"cs2dspec rerun: error: {exc}", file=sys.stderr)
            return 1
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = config_from_args(args, argv)
    except InvalidArgumentError as exc:
        parser.error(str(exc))
    return run(config)


def console():
    sys.exit(main())
