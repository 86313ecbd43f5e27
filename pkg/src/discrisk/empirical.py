"""Frequency-table samples of nonnegative integer counts."""
from __future__ import annotations

import csv
import hashlib
import io
import math
from collections.abc import Iterable
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DegenerateSampleError, DomainError

__all__ = ["DiscreteSample", "sample_moments", "ecdf"]


@dataclass(frozen=True, eq=False)
class DiscreteSample:
    """Distinct observed values with their frequencies.

    Attributes
    ----------
    values : ndarray of int64
        Distinct values in increasing order.  Gaps are allowed and carry
        zero mass.
    counts : ndarray of int64
        Positive frequency of each value.
    """

    values: np.ndarray
    counts: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.int64)
        counts = np.asarray(self.counts, dtype=np.int64)
        if values.ndim != 1 or values.shape != counts.shape or values.size == 0:
            raise DomainError("sample needs matching, non-empty value and count arrays")
        if np.any(np.diff(values) <= 0):
            raise DomainError("values must be distinct and sorted")
        if values[0] < 0 or np.any(counts < 1):
            raise DomainError("values must be nonnegative and counts positive")
        values.setflags(write=False)
        counts.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "counts", counts)

    # -- construction ------------------------------------------------------

    @classmethod
    def from_counts(cls, rows: Iterable[tuple[int, int]]) -> "DiscreteSample":
        """Build a sample from ``(value, count)`` pairs; zero-count rows are dropped."""
        table: dict[int, int] = {}
        for value, count in rows:
            v, c = _as_int(value), _as_int(count)
            if v < 0 or c < 0:
                raise DomainError(f"negative entry in row ({value}, {count})")
            if v in table:
                raise DomainError(f"duplicate value {v}")
            table[v] = c
        kept = sorted((v, c) for v, c in table.items() if c > 0)
        if not kept:
            raise DomainError("sample is empty")
        values, counts = zip(*kept)
        return cls(np.array(values), np.array(counts))

    @classmethod
    def from_observations(cls, obs) -> "DiscreteSample":
        arr = np.asarray(obs)
        if arr.size == 0:
            raise DomainError("sample is empty")
        if not np.all(arr == np.floor(arr)) or np.any(arr < 0):
            raise DomainError("observations must be nonnegative integers")
        arr = arr.astype(np.int64)
        freq = np.bincount(arr)
        values = np.nonzero(freq)[0]
        return cls(values, freq[values])

    @classmethod
    def from_csv(cls, source: str | Path | io.TextIOBase) -> "DiscreteSample":
        """Read ``value,count`` rows (header optional) or one integer per line."""
        if isinstance(source, (str, Path)):
            text = Path(source).read_text(encoding="utf-8")
        else:
            text = source.read()
        return cls.from_text(text)

    @classmethod
    def from_text(cls, text: str) -> "DiscreteSample":
        rows = [r for r in csv.reader(io.StringIO(text)) if r and any(f.strip() for f in r)]
        if rows and not _numeric(rows[0][0]):
            rows = rows[1:]
        if not rows:
            raise DomainError("no data rows found")
        width = {len(r) for r in rows}
        if width == {1}:
            return cls.from_observations([_as_int(r[0]) for r in rows])
        if width == {2}:
            return cls.from_counts((_as_int(v), _as_int(c)) for v, c in rows)
        raise DomainError("expected one column (observations) or two (value,count)")

    # -- views -------------------------------------------------------------

    @property
    def n(self) -> int:
        return int(self.counts.sum())

    @property
    def min(self) -> int:
        return int(self.values[0])

    @property
    def max(self) -> int:
        return int(self.values[-1])

    def rows(self) -> list[tuple[int, int]]:
        return [(int(v), int(c)) for v, c in zip(self.values, self.counts)]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["value", "count"])
        writer.writerows(self.rows())
        return buf.getvalue()

    def digest(self) -> str:
        """SHA-256 of the canonical ``value,count`` serialization."""
        return hashlib.sha256(self.to_csv().encode("utf-8")).hexdigest()

    def __eq__(self, other):
        if not isinstance(other, DiscreteSample):
            return NotImplemented
        return np.array_equal(self.values, other.values) and np.array_equal(
            self.counts, other.counts
        )

    def __repr__(self):
        return f"DiscreteSample(n={self.n}, rows={self.rows()!r})"

    # -- statistics --------------------------------------------------------

    def mean(self) -> float:
        return float(np.dot(self.values, self.counts) / self.n)

    def sd(self) -> float:
        """Sample standard deviation with the n-1 divisor."""
        n = self.n
        if n < 2:
            raise DomainError("standard deviation needs at least two observations")
        mu = self.mean()
        ss = float(np.dot(self.counts, (self.values - mu) ** 2))
        return math.sqrt(ss / (n - 1))

    def count_le(self, t) -> np.ndarray | int:
        """Number of observations <= t."""
        cum = np.concatenate(([0], np.cumsum(self.counts)))
        idx = np.searchsorted(self.values, np.asarray(t, dtype=float), side="right")
        out = cum[idx]
        return int(out) if np.ndim(out) == 0 else out

    def ecdf(self, t):
        """Fraction of observations <= t."""
        out = np.asarray(self.count_le(t)) / self.n
        return float(out) if out.ndim == 0 else out

    def require_spread(self) -> None:
        if self.values.size < 2:
            raise DegenerateSampleError("sample has a single distinct value (sd = 0)")


def sample_moments(s: DiscreteSample) -> tuple[float, float]:
    """Mean and n-1 standard deviation of a frequency-table sample."""
    return s.mean(), s.sd()


def ecdf(s: DiscreteSample, t):
    return s.ecdf(t)


def _numeric(field: str) -> bool:
    try:
        float(field)
    except ValueError:
        return False
    return True


def _as_int(x) -> int:
    if isinstance(x, str):
        x = x.strip()
        try:
            return int(x)
        except ValueError:
            pass
        try:
            f = float(x)
        except ValueError as exc:
            raise DomainError(f"expected an integer, got {x!r}") from exc
    else:
        f = float(x)
    if f != math.floor(f):
        raise DomainError(f"expected an integer, got {x!r}")
    return int(f)
