"""Text file formats for signals, spectra and peak tables.

All three formats are UTF-8 text with ``# key=value`` header lines followed
by whitespace-separated data lines. Floats are written with ``repr`` (the
shortest string that round-trips), so reading a written file back gives
bit-identical arrays.

SIG2D (time-domain grid)::

    # format=SIG2D
    # delta_tau_fs=26.687
    # delta_t_fs=26.687
    # population_time_fs=140.0
    # n_tau=51
    # n_t=50
    # label=sum
    0 0 1.0 0.0
    0 1 0.98 -0.19
    ...

Data lines are ``tau_index t_index re im`` in row-major order. Optional
header keys are ``tau_origin_index``, ``t_origin_index`` and
``meta.<name>`` (a JSON value stored in the object's metadata).

SPEC2D (spectrum) uses the same layout with the axes described by
``omega_tau_min``, ``omega_tau_spacing``, ``omega_tau_count`` (and the
``omega_t_*`` counterparts), plus ``population_time_fs`` and
``provenance``.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .analysis import Peak
from .errors import ParseError
from .grids import FrequencyGrid, SignalGrid2D, Spectrum2D, TimeGrid

__all__ = [
    "write_signal_grid",
    "read_signal_grid",
    "write_spectrum",
    "read_spectrum",
    "write_peaks",
    "read_peaks",
    "lab_frame",
]


def _fmt(x):
    return repr(float(x))


def _meta_lines(metadata):
    return [f"# meta.{key}={json.dumps(value, sort_keys=True)}" for key, value in metadata.items()]


def _data_lines(values):
    n0, n1 = values.shape
    re = values.real.ravel().tolist()
    im = values.imag.ravel().tolist()
    lines = []
    pos = 0
    for i in range(n0):
        for k in range(n1):
            lines.append(f"{i} {k} {re[pos]!r} {im[pos]!r}")
            pos += 1
    return lines


def _write(path, header, body):
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(header))
            fh.write("\n")
            if body:
                fh.write("\n".join(body))
                fh.write("\n")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc


def _read_lines(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read().splitlines()
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc.strerror or exc}") from exc
    except UnicodeDecodeError as exc:
        raise ParseError(f"{path} is not UTF-8 text") from exc


def _split_header(lines, expected_format):
    """Return ``(header, first_data_lineno)``; header maps key -> (value, lineno)."""
    header = {}
    n = 0
    for n, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped:
            continue
        if not stripped.startswith("#"):
            break
        body = stripped[1:].strip()
        if not body:
            continue
        if "=" not in body:
            raise ParseError(f"header line is not key=value: {line!r}", n)
        key, value = body.split("=", 1)
        header[key.strip()] = (value.strip(), n)
    else:
        n = len(lines) + 1
    fmt = header.get("format")
    if fmt is not None and fmt[0] != expected_format:
        raise ParseError(f"expected format {expected_format}, found {fmt[0]}", fmt[1])
    return header, n


class _Header:
    def __init__(self, header, data_line):
        self.header = header
        self.data_line = data_line

    def raw(self, key):
        if key not in self.header:
            raise ParseError(f"missing header key {key!r}", self.data_line)
        return self.header[key]

    def get_float(self, key, default=None):
        if default is not None and key not in self.header:
            return default
        value, line = self.raw(key)
        try:
            out = float(value)
        except ValueError:
            raise ParseError(f"{key} is not a number: {value!r}", line) from None
        if not math.isfinite(out):
            raise ParseError(f"{key} is not finite", line)
        return out

    def get_int(self, key, default=None, minimum=None):
        if default is not None and key not in self.header:
            return default
        value, line = self.raw(key)
        try:
            out = int(value)
        except ValueError:
            raise ParseError(f"{key} is not an integer: {value!r}", line) from None
        if minimum is not None and out < minimum:
            raise ParseError(f"{key} must be >= {minimum}, got {out}", line)
        return out

    def get_str(self, key):
        return self.raw(key)[0]

    def metadata(self):
        meta = {}
        for key, (value, line) in self.header.items():
            if key.startswith("meta."):
                try:
                    meta[key[5:]] = json.loads(value)
                except json.JSONDecodeError:
                    raise ParseError(f"metadata {key} is not valid JSON", line) from None
        return meta


def _parse_values(lines, start, n0, n1, row_name):
    """Parse ``i k re im`` lines in row-major order into an ``(n0, n1)`` array."""
    values = np.empty((n0, n1), dtype=np.complex128)
    expected = 0
    total = n0 * n1
    last_line = start
    for lineno in range(start, len(lines) + 1):
        line = lines[lineno - 1].strip()
        if not line or line.startswith("#"):
            continue
        last_line = lineno
        parts = line.split()
        if len(parts) != 4:
            raise ParseError(f"expected 4 fields, found {len(parts)}", lineno)
        try:
            i, k = int(parts[0]), int(parts[1])
            re, im = float(parts[2]), float(parts[3])
        except ValueError:
            raise ParseError(f"malformed data line {line!r}", lineno) from None
        if expected >= total:
            raise ParseError(f"more data lines than the declared {n0} x {n1} grid", lineno)
        want_i, want_k = divmod(expected, n1)
        if (i, k) != (want_i, want_k):
            if i == want_i + 1 and k == 0 and want_k > 0:
                raise ParseError(f"{row_name} {want_i} has {want_k} values, expected {n1}", lineno)
            raise ParseError(f"expected indices ({want_i}, {want_k}), found ({i}, {k})", lineno)
        if not (math.isfinite(re) and math.isfinite(im)):
            raise ParseError(f"non-finite value at ({i}, {k})", lineno)
        values[i, k] = complex(re, im)
        expected += 1
    if expected < total:
        want_i, want_k = divmod(expected, n1)
        if want_k > 0:
            raise ParseError(f"{row_name} {want_i} has {want_k} values, expected {n1}", last_line)
        raise ParseError(f"found {want_i} {row_name}s, expected {n0}", last_line)
    return values


def write_signal_grid(signal, path):
    """Write a :class:`SignalGrid2D` in SIG2D format."""
    header = [
        "# format=SIG2D",
        f"# delta_tau_fs={_fmt(signal.tau_grid.delta)}",
        f"# delta_t_fs={_fmt(signal.t_grid.delta)}",
        f"# population_time_fs={_fmt(signal.population_time)}",
        f"# n_tau={signal.tau_grid.count}",
        f"# n_t={signal.t_grid.count}",
        f"# label={signal.label}",
        f"# tau_origin_index={signal.tau_grid.origin_index}",
        f"# t_origin_index={signal.t_grid.origin_index}",
    ] + _meta_lines(signal.metadata)
    _write(path, header, _data_lines(signal.values))


def read_signal_grid(path):
    """Parse a SIG2D file into a :class:`SignalGrid2D`.

    Raises
    ------
    ParseError
        On a missing header key, a row or row count that disagrees with
        ``n_tau``/``n_t``, or a non-finite value; the message carries the
        offending line number.
    """
    lines = _read_lines(path)
    raw, start = _split_header(lines, "SIG2D")
    h = _Header(raw, start)
    n_tau = h.get_int("n_tau", minimum=1)
    n_t = h.get_int("n_t", minimum=1)
    label = h.get_str("label")
    if label not in ("sum", "diff"):
        raise ParseError(f"label must be sum or diff, got {label!r}", raw["label"][1])
    d_tau = h.get_float("delta_tau_fs")
    d_t = h.get_float("delta_t_fs")
    for key, value in (("delta_tau_fs", d_tau), ("delta_t_fs", d_t)):
        if value <= 0:
            raise ParseError(f"{key} must be positive", raw[key][1])
    tau_grid = TimeGrid(d_tau, n_tau, h.get_int("tau_origin_index", 0))
    t_grid = TimeGrid(d_t, n_t, h.get_int("t_origin_index", 0))
    population = h.get_float("population_time_fs")
    values = _parse_values(lines, start, n_tau, n_t, "row")
    return SignalGrid2D(tau_grid, t_grid, population, values, label, h.metadata())


def write_spectrum(spectrum, path):
    """Write a :class:`Spectrum2D` in SPEC2D format."""
    header = ["# format=SPEC2D"]
    for name, grid in (("omega_tau", spectrum.omega_tau_grid), ("omega_t", spectrum.omega_t_grid)):
        header += [
            f"# {name}_min={_fmt(grid.minimum)}",
            f"# {name}_spacing={_fmt(grid.spacing)}",
            f"# {name}_count={grid.count}",
        ]
    header += [
        f"# population_time_fs={_fmt(spectrum.population_time)}",
        f"# provenance={spectrum.provenance}",
    ] + _meta_lines(spectrum.metadata)
    _write(path, header, _data_lines(spectrum.values))


def read_spectrum(path):
    """Parse a SPEC2D file into a :class:`Spectrum2D`."""
    lines = _read_lines(path)
    raw, start = _split_header(lines, "SPEC2D")
    h = _Header(raw, start)
    grids = []
    for name in ("omega_tau", "omega_t"):
        count = h.get_int(f"{name}_count", minimum=2)
        spacing = h.get_float(f"{name}_spacing")
        if spacing <= 0:
            raise ParseError(f"{name}_spacing must be positive", raw[f"{name}_spacing"][1])
        grids.append(FrequencyGrid(h.get_float(f"{name}_min"), spacing, count))
    provenance = h.get_str("provenance")
    if provenance not in ("ft", "cs"):
        raise ParseError(f"provenance must be ft or cs, got {provenance!r}", raw["provenance"][1])
    population = h.get_float("population_time_fs")
    values = _parse_values(lines, start, grids[0].count, grids[1].count, "row")
    return Spectrum2D(grids[0], grids[1], population, values, provenance, h.metadata())


def lab_frame(omega_tau, omega_t, frame_frequency, label="sum"):
    """Map rotating-frame positions back to lab-frame angular frequencies.

    The waiting-time axis always shifts by ``+frame_frequency``; the
    coherence-time axis of a difference (rephasing) spectrum is mirrored,
    so there the lab frequency is ``omega_tau - frame_frequency``.
    """
    sign = -1.0 if label == "diff" else 1.0
    return omega_tau + sign * frame_frequency, omega_t + frame_frequency


_PEAK_COLUMNS = ["omega_tau", "omega_t", "magnitude", "fwhm_tau", "fwhm_t", "i_tau", "i_t",
                 "single_bin_tau", "single_bin_t", "truncated_tau", "truncated_t"]
_LAB_COLUMNS = ["lab_omega_tau", "lab_omega_t"]


def write_peaks(peaks, path, frame_frequency=None, label="sum"):
    """Write peaks as a tab-separated table with a column-name header row.

    Positions and widths are in rad/fs. When ``frame_frequency`` is given
    two extra lab-frame position columns are appended and the frame is
    recorded in a ``# frame_frequency=`` comment line.
    """
    header = ["# format=PEAKS", f"# label={label}"]
    columns = list(_PEAK_COLUMNS)
    if frame_frequency is not None:
        header.append(f"# frame_frequency={_fmt(frame_frequency)}")
        columns += _LAB_COLUMNS
    header.append("\t".join(columns))
    rows = []
    for p in peaks:
        fields = [_fmt(p.omega_tau), _fmt(p.omega_t), _fmt(p.magnitude), _fmt(p.fwhm_tau),
                  _fmt(p.fwhm_t), str(p.index[0]), str(p.index[1]),
                  *(str(int(flag)) for flag in (p.single_bin_tau, p.single_bin_t,
                                                p.truncated_tau, p.truncated_t))]
        if frame_frequency is not None:
            fields += [_fmt(x) for x in lab_frame(p.omega_tau, p.omega_t, frame_frequency, label)]
        rows.append("\t".join(fields))
    _write(path, header, rows)


def read_peaks(path):
    """Read a table written by :func:`write_peaks` back into a list of Peak."""
    lines = _read_lines(path)
    columns = None
    peaks = []
    for lineno, line in enumerate(lines, start=1):
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t")
        if columns is None:
            columns = fields
            missing = [c for c in _PEAK_COLUMNS if c not in columns]
            if missing:
                raise ParseError(f"peak table lacks columns {missing}", lineno)
            continue
        if len(fields) != len(columns):
            raise ParseError(f"expected {len(columns)} fields, found {len(fields)}", lineno)
        row = dict(zip(columns, fields))
        try:
            peaks.append(Peak(
                omega_tau=float(row["omega_tau"]), omega_t=float(row["omega_t"]),
                magnitude=float(row["magnitude"]), fwhm_tau=float(row["fwhm_tau"]),
                fwhm_t=float(row["fwhm_t"]), index=(int(row["i_tau"]), int(row["i_t"])),
                single_bin_tau=bool(int(row["single_bin_tau"])),
                single_bin_t=bool(int(row["single_bin_t"])),
                truncated_tau=bool(int(row["truncated_tau"])),
                truncated_t=bool(int(row["truncated_t"])),
            ))
        except ValueError:
            raise ParseError("malformed peak row", lineno) from None
    return peaks
