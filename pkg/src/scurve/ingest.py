"""Loading and time-indexing of dated count series.

Series are read from a two-column CSV (``date,value``).  Dates may be
``YYYY-MM-DD``, ``YYYY-MM`` (resolved to the 15th of the month) or
``YYYY-Qn`` (resolved to the last day of the quarter).  Lines starting with
``#`` are comments; ``# key=value`` pairs on them are kept as metadata.
"""
from __future__ import annotations

import calendar
import csv
import datetime as dt
import io
import re
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable, TextIO

import numpy as np

DAYS_PER_YEAR = 365.25
MID_MONTH_DAY = 15

BUILTIN_DATASETS = (
    "facebook-users",
    "facebook-revenues",
    "groupon-repeat-customers",
    "groupon-revenue-pairs",
)

_FULL_DATE = re.compile(r"^(\d{4})-(\d{2})-(\d{2})$")
_MONTH_DATE = re.compile(r"^(\d{4})-(\d{2})$")
_QUARTER_DATE = re.compile(r"^(\d{4})-Q([1-4])$", re.IGNORECASE)


class SeriesError(ValueError):
    """Raised for malformed or invalid series input."""


def parse_date(text: str) -> dt.date:
    """Parse an ISO day, ISO month (mid-month) or quarter (quarter end) label."""
    text = text.strip()
    m = _FULL_DATE.match(text)
    if m:
        return dt.date(int(m[1]), int(m[2]), int(m[3]))
    m = _MONTH_DATE.match(text)
    if m:
        return dt.date(int(m[1]), int(m[2]), MID_MONTH_DAY)
    m = _QUARTER_DATE.match(text)
    if m:
        year, month = int(m[1]), 3 * int(m[2])
        return dt.date(year, month, calendar.monthrange(year, month)[1])
    raise ValueError(f"unrecognised date {text!r}")


@dataclass(frozen=True)
class ObservationSeries:
    label: str
    epoch: dt.date
    dates: tuple[dt.date, ...]
    values: tuple[float, ...]
    metadata: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if len(self.dates) != len(self.values):
            raise SeriesError("dates and values differ in length")
        if not self.dates:
            raise SeriesError("no observations")
        for prev, cur in zip(self.dates, self.dates[1:]):
            if cur <= prev:
                raise SeriesError(f"nonmonotonic dates at {cur.isoformat()}")
        for d, v in zip(self.dates, self.values):
            if not np.isfinite(v) or v <= 0:
                raise SeriesError(f"nonpositive value {v!r} at {d.isoformat()}")
        if self.epoch > self.dates[0]:
            raise SeriesError("epoch falls after the first observation")

    def __len__(self):
        return len(self.dates)

    @property
    def approximate(self) -> bool:
        return str(self.metadata.get("approximate", "false")).lower() == "true"


@dataclass(frozen=True)
class ElapsedSeries:
    """Counts indexed by years elapsed since the series epoch."""

    label: str
    t: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.t, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if t.shape != v.shape or t.ndim != 1:
            raise SeriesError("t and values must be 1-d arrays of equal length")
        if t.size and (t[0] < 0 or np.any(np.diff(t) <= 0)):
            raise SeriesError("elapsed times must be nonnegative and strictly increasing")
        t.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "values", v)

    def __len__(self):
        return self.t.size

    def head(self, n: int) -> "ElapsedSeries":
        """The first ``n`` observations."""
        return ElapsedSeries(self.label, self.t[:n], self.values[:n])


def _read_rows(source: TextIO):
    metadata = {}
    body = []
    for lineno, line in enumerate(source, start=1):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            for token in stripped.lstrip("#").split():
                if "=" in token:
                    key, _, val = token.partition("=")
                    metadata[key] = val
            continue
        body.append((lineno, line))
    return metadata, body


def parse_series(source: TextIO | str, epoch: dt.date | str | None = None,
                 label: str | None = None) -> ObservationSeries:
    """Parse a ``date,value`` CSV into a validated :class:`ObservationSeries`.

    ``epoch`` defaults to the ``epoch=`` metadata comment if present, else to
    the first observation date.
    """
    if isinstance(source, str):
        source = io.StringIO(source)
    metadata, body = _read_rows(source)
    if not body:
        raise SeriesError("missing header row")
    header_line, header = body[0]
    cols = [c.strip().lower() for c in next(csv.reader([header]))]
    if cols != ["date", "value"]:
        raise SeriesError(f"line {header_line}: expected header 'date,value', got {header.strip()!r}")

    dates, values = [], []
    for lineno, line in body[1:]:
        row = next(csv.reader([line]))
        if len(row) != 2:
            raise SeriesError(f"line {lineno}: expected 2 fields, got {len(row)}")
        try:
            d = parse_date(row[0])
            v = float(row[1])
        except ValueError as exc:
            raise SeriesError(f"line {lineno}: {exc}") from None
        if not np.isfinite(v) or v <= 0:
            raise SeriesError(f"line {lineno}: nonpositive value {row[1].strip()!r}")
        if dates and d <= dates[-1]:
            raise SeriesError(f"line {lineno}: nonmonotonic dates")
        dates.append(d)
        values.append(v)
    if not dates:
        raise SeriesError("no observations")

    if epoch is None:
        epoch = metadata.get("epoch", dates[0])
    if isinstance(epoch, str):
        epoch = parse_date(epoch)
    label = label or metadata.get("label", "series")
    return ObservationSeries(label, epoch, tuple(dates), tuple(values), metadata)


def serialize_series(series: ObservationSeries, with_metadata: bool = True) -> str:
    """Write ``series`` back to CSV; full ISO dates so parsing is lossless."""
    out = io.StringIO()
    if with_metadata:
        meta = dict(series.metadata)
        meta["label"] = series.label
        meta["epoch"] = series.epoch.isoformat()
        out.write("# " + " ".join(f"{k}={v}" for k, v in meta.items()) + "\n")
    out.write("date,value\n")
    for d, v in zip(series.dates, series.values):
        out.write(f"{d.isoformat()},{v!r}\n")
    return out.getvalue()


def years_between(start: dt.date, end: dt.date) -> float:
    return (end - start).days / DAYS_PER_YEAR


def to_elapsed(series: ObservationSeries) -> ElapsedSeries:
    t = np.array([years_between(series.epoch, d) for d in series.dates])
    return ElapsedSeries(series.label, t, np.array(series.values, dtype=float))


def elapsed(t: Iterable[float], values: Iterable[float], label: str = "series") -> ElapsedSeries:
    """Build an :class:`ElapsedSeries` straight from arrays."""
    return ElapsedSeries(label, np.asarray(list(t), float), np.asarray(list(values), float))


def builtin_dataset(name: str) -> ObservationSeries:
    """Load one of the datasets transcribed from the published analysis.

    ``groupon-repeat-customers`` and ``groupon-revenue-pairs`` are read off a
    figure and carry ``approximate=true`` metadata.  For the revenue pairs the
    ``date`` column is the quarter the pair belongs to and ``value`` is the
    annualised revenue; customer counts live in :func:`builtin_pairs`.
    """
    if name not in BUILTIN_DATASETS:
        raise KeyError(f"unknown dataset {name!r}; choose from {', '.join(BUILTIN_DATASETS)}")
    text = resources.files("scurve.data").joinpath(f"{name}.csv").read_text()
    if name == "groupon-revenue-pairs":
        return _pairs_as_series(text)
    return parse_series(text)


def _pairs_as_series(text: str) -> ObservationSeries:
    metadata, body = _read_rows(io.StringIO(text))
    lines = ["date,value"] + [",".join([r[0], r[2]]) for r in _pair_rows(body)]
    csv_text = "".join(f"# {k}={v}\n" for k, v in metadata.items()) + "\n".join(lines)
    return parse_series(csv_text)


def _pair_rows(body):
    rows = [next(csv.reader([line])) for _, line in body]
    return [[c.strip() for c in r] for r in rows[1:]]


def builtin_pairs(name: str = "groupon-revenue-pairs") -> list[tuple[float, float]]:
    """(customers, yearly revenue) pairs for the revenue-per-customer fit."""
    if name != "groupon-revenue-pairs":
        raise KeyError(f"{name!r} is not a pair dataset")
    text = resources.files("scurve.data").joinpath(f"{name}.csv").read_text()
    _, body = _read_rows(io.StringIO(text))
    return [(float(r[1]), float(r[2])) for r in _pair_rows(body)]
