"""Canonical time-indexed series types shared by every analysis module.

All series live on a uniform one-minute grid. Timestamps are integer minutes
since the Unix epoch (UTC); sub-minute data must be resampled by ingestion
before it reaches this layer. Instances are immutable after construction and
every operation here is a pure function, so values can be shared freely
across threads.
"""

from __future__ import annotations

import datetime as _dt
from dataclasses import dataclass, field

import numpy as np

from .errors import AlignmentError, ValidationError

MINUTES_PER_DAY = 1440


def _readonly_f64(values, name: str) -> np.ndarray:
    arr = np.array(values, dtype=np.float64)
    if arr.ndim != 1:
        raise ValidationError(f"{name} must be one-dimensional")
    arr.setflags(write=False)
    return arr


def minute_to_datetime(minute: int) -> _dt.datetime:
    """UTC datetime at the start of an epoch-minute index."""
    return _dt.datetime.fromtimestamp(minute * 60, tz=_dt.timezone.utc)


def datetime_to_minute(when: _dt.datetime) -> int:
    """Epoch-minute index of a timezone-aware datetime; rejects sub-minute offsets."""
    if when.tzinfo is None:
        raise ValidationError("naive datetimes are ambiguous; timezone required")
    seconds = when.timestamp()
    if seconds % 60 != 0:
        raise ValidationError(f"timestamp {when.isoformat()} is not minute-aligned")
    return int(seconds // 60)


@dataclass(frozen=True, eq=False)
class MinutePriceSeries:
    """Mid-price in USD per token, one observation per minute.

    Invariants: uniform 1-minute grid (implicit in the array layout), every
    price strictly positive and finite, length at least 2.
    """

    start_minute: int
    prices: np.ndarray

    def __post_init__(self):
        arr = _readonly_f64(self.prices, "prices")
        object.__setattr__(self, "prices", arr)
        if len(arr) < 2:
            raise ValidationError("price series needs at least 2 minutes")
        if not np.all(np.isfinite(arr)) or np.any(arr <= 0):
            raise ValidationError("prices must be finite and strictly positive")

    def __len__(self) -> int:
        return len(self.prices)

    @property
    def end_minute(self) -> int:
        """One past the last minute on the grid (half-open interval)."""
        return self.start_minute + len(self.prices)

    def minutes(self) -> np.ndarray:
        return np.arange(self.start_minute, self.end_minute)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MinutePriceSeries):
            return NotImplemented
        return self.start_minute == other.start_minute and np.array_equal(
            self.prices, other.prices
        )


@dataclass(frozen=True, eq=False)
class MinuteVolumeSeries:
    """USD traded per minute. Volumes are nonnegative and finite."""

    start_minute: int
    volumes: np.ndarray

    def __post_init__(self):
        arr = _readonly_f64(self.volumes, "volumes")
        object.__setattr__(self, "volumes", arr)
        if len(arr) == 0:
            raise ValidationError("volume series must be nonempty")
        if not np.all(np.isfinite(arr)) or np.any(arr < 0):
            raise ValidationError("volumes must be finite and nonnegative")

    def __len__(self) -> int:
        return len(self.volumes)

    @property
    def end_minute(self) -> int:
        return self.start_minute + len(self.volumes)

    def minutes(self) -> np.ndarray:
        return np.arange(self.start_minute, self.end_minute)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MinuteVolumeSeries):
            return NotImplemented
        return self.start_minute == other.start_minute and np.array_equal(
            self.volumes, other.volumes
        )


@dataclass(frozen=True, eq=False)
class DeviationSeries:
    """Absolute peg deviation in basis points, one value per minute."""

    start_minute: int
    deviations: np.ndarray

    def __post_init__(self):
        arr = _readonly_f64(self.deviations, "deviations")
        object.__setattr__(self, "deviations", arr)
        if len(arr) == 0:
            raise ValidationError("deviation series must be nonempty")
        if not np.all(np.isfinite(arr)) or np.any(arr < 0):
            raise ValidationError("deviations must be finite and nonnegative")

    def __len__(self) -> int:
        return len(self.deviations)

    @property
    def end_minute(self) -> int:
        return self.start_minute + len(self.deviations)

    def minutes(self) -> np.ndarray:
        return np.arange(self.start_minute, self.end_minute)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DeviationSeries):
            return NotImplemented
        return self.start_minute == other.start_minute and np.array_equal(
            self.deviations, other.deviations
        )


@dataclass(frozen=True, eq=False)
class DailyRedemptionSeries:
    """Gross redemption outflow in USD per calendar day (UTC).

    Dates are strictly increasing with no duplicates; values nonnegative.
    Consecutive dates are not required — these are observation days, not a
    dense calendar.
    """

    dates: tuple[_dt.date, ...]
    redemptions: np.ndarray = field(repr=False)

    def __post_init__(self):
        dates = tuple(self.dates)
        object.__setattr__(self, "dates", dates)
        arr = _readonly_f64(self.redemptions, "redemptions")
        object.__setattr__(self, "redemptions", arr)
        if len(dates) == 0:
            raise ValidationError("redemption series must be nonempty")
        if len(dates) != len(arr):
            raise ValidationError("dates and redemptions lengths differ")
        for d in dates:
            if not isinstance(d, _dt.date) or isinstance(d, _dt.datetime):
                raise ValidationError("dates must be datetime.date values")
        for a, b in zip(dates, dates[1:]):
            if a >= b:
                raise ValidationError(f"dates must be strictly increasing ({a} !< {b})")
        if not np.all(np.isfinite(arr)) or np.any(arr < 0):
            raise ValidationError("redemptions must be finite and nonnegative")

    def __len__(self) -> int:
        return len(self.dates)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DailyRedemptionSeries):
            return NotImplemented
        return self.dates == other.dates and np.array_equal(
            self.redemptions, other.redemptions
        )


def compute_deviation(prices: MinutePriceSeries) -> DeviationSeries:
    """Baseline peg deviation: D_t = 10000 * |P_t - 1|, in basis points.

    The output shares the input grid minute-for-minute.
    """
    dev = 10000.0 * np.abs(prices.prices - 1.0)
    return DeviationSeries(prices.start_minute, dev)


def _common_window(a_start: int, a_len: int, b_start: int, b_len: int) -> tuple[int, int]:
    start = max(a_start, b_start)
    end = min(a_start + a_len, b_start + b_len)
    if end <= start:
        raise AlignmentError(
            f"series do not overlap: [{a_start}, {a_start + a_len}) vs "
            f"[{b_start}, {b_start + b_len})"
        )
    return start, end


def align(
    prices: MinutePriceSeries, volumes: MinuteVolumeSeries
) -> tuple[MinutePriceSeries, MinuteVolumeSeries]:
    """Truncate both series to their common time window.

    Raises:
        AlignmentError: when the windows are disjoint (or the overlap is too
            short to hold a valid price series).
    """
    start, end = _common_window(
        prices.start_minute, len(prices), volumes.start_minute, len(volumes)
    )
    p = prices.prices[start - prices.start_minute : end - prices.start_minute]
    v = volumes.volumes[start - volumes.start_minute : end - volumes.start_minute]
    return MinutePriceSeries(start, p), MinuteVolumeSeries(start, v)
