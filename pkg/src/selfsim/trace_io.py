"""Line-oriented text traces of packet counts.

Accepted input::

    # any comment
    # bin_width=0.01
    5
    7

or two columns ``time count`` separated by whitespace or a comma, in which
case the time column must be strictly increasing and is otherwise ignored.
"""
from __future__ import annotations

import io
import math
import os
import re
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .traffic import TimeSeries

_BIN_WIDTH = re.compile(r"^#\s*bin_width\s*=\s*(\S+)\s*$")
_SPLIT = re.compile(r"[,\s]+")


class TraceFormatError(ValueError):
    def __init__(self, msg, lineno=None):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {msg}" if lineno is not None else msg)


@dataclass(frozen=True)
class TraceHeader:
    bin_width: float
    source: str
    length: int


def _open_text(path_or_stream, mode):
    if isinstance(path_or_stream, (str, os.PathLike)):
        return open(path_or_stream, mode, encoding="utf-8", newline="\n"), True
    return path_or_stream, False


def read_counts_with_header(path_or_stream) -> tuple[TimeSeries, TraceHeader]:
    fh, owned = _open_text(path_or_stream, "r")
    try:
        lines = fh.read().splitlines()
    finally:
        if owned:
            fh.close()
    bin_width = 1.0
    counts: list[float] = []
    last_t = -math.inf
    columns = None
    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            m = _BIN_WIDTH.match(line)
            if m:
                try:
                    bin_width = float(m.group(1))
                except ValueError:
                    raise TraceFormatError(f"bad bin_width {m.group(1)!r}", lineno) from None
                if not (bin_width > 0 and math.isfinite(bin_width)):
                    raise TraceFormatError("bin_width must be positive", lineno)
            continue
        tokens = [t for t in _SPLIT.split(line) if t]
        if columns is None:
            columns = len(tokens)
            if columns not in (1, 2):
                raise TraceFormatError(f"expected 1 or 2 columns, got {columns}", lineno)
        elif len(tokens) != columns:
            raise TraceFormatError(f"expected {columns} columns, got {len(tokens)}", lineno)
        try:
            values = [float(t) for t in tokens]
        except ValueError:
            raise TraceFormatError(f"non-numeric token in {line!r}", lineno) from None
        if not all(math.isfinite(v) for v in values):
            raise TraceFormatError(f"non-finite value in {line!r}", lineno)
        if columns == 2:
            t, c = values
            if t <= last_t:
                raise TraceFormatError("timestamps must be strictly increasing", lineno)
            last_t = t
        else:
            c = values[0]
        if c < 0:
            raise TraceFormatError(f"negative count {c!r}", lineno)
        counts.append(c)
    if not counts:
        raise TraceFormatError("no counts in input")
    source = getattr(fh, "name", "<stream>")
    series = TimeSeries(np.array(counts), bin_width)
    return series, TraceHeader(bin_width, str(source), len(counts))


def read_counts(path_or_stream) -> TimeSeries:
    return read_counts_with_header(path_or_stream)[0]


def format_count(x: float) -> str:
    """Shortest text that parses back to the same float."""
    x = float(x)
    if x.is_integer() and abs(x) < 2**53:
        return str(int(x))
    return repr(x)


def write_counts(series: TimeSeries, path_or_stream, comments: Iterable[str] = ()) -> None:
    """Write ``# bin_width=`` and one count per line; extra comment lines go first."""
    if len(series) == 0:
        raise ValueError("refusing to write an empty series")
    buf = io.StringIO()
    for c in comments:
        buf.write(f"# {c}\n")
    buf.write(f"# bin_width={series.bin_width!r}\n")
    buf.write("\n".join(format_count(x) for x in series.counts.tolist()))
    buf.write("\n")
    fh, owned = _open_text(path_or_stream, "w")
    try:
        fh.write(buf.getvalue())
    finally:
        if owned:
            fh.close()


def bin_timestamps(times, bin_width: float, start: float | None = None) -> TimeSeries:
    """Count packet arrival ``times`` (seconds) into bins of ``bin_width``.

    Bins start at ``start`` (default: the first timestamp); times before it are
    rejected rather than silently dropped.
    """
    t = np.asarray(times, dtype=float)
    if t.ndim != 1 or t.size == 0:
        raise ValueError("need a non-empty 1-D array of timestamps")
    if not bin_width > 0:
        raise ValueError("bin_width must be positive")
    t0 = float(t.min()) if start is None else float(start)
    if t.min() < t0:
        raise ValueError("timestamps precede the start of the first bin")
    idx = np.floor((t - t0) / bin_width).astype(np.int64)
    return TimeSeries(np.bincount(idx).astype(float), bin_width)
