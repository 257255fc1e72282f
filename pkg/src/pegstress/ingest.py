"""CSV ingestion: parse, validate, and repair minute price/volume data and
daily redemption data.

Price files carry the header ``timestamp,price,volume_usd``; timestamps are
ISO-8601 (UTC assumed when no offset is given) or integer epoch seconds.
Sub-minute timestamps are floored to their minute; rows that land on the same
minute are duplicates and are resolved by the policy. Short gaps are repaired
by forward-filling the price (an absent trade means a stale price) and
zero-filling volume (no trades, no volume).

Redemption files carry the header ``date,redemption_usd`` with ISO dates.

Writers emit a canonical form that round-trips: parse(write(s)) == s.
"""

from __future__ import annotations

import csv
import datetime as _dt
import math
from dataclasses import dataclass

import numpy as np

from .errors import GapError, ParseError, ValidationError
from .series import (
    DailyRedemptionSeries,
    MinutePriceSeries,
    MinuteVolumeSeries,
    minute_to_datetime,
)

PRICE_HEADER = ["timestamp", "price", "volume_usd"]
REDEMPTION_HEADER = ["date", "redemption_usd"]


@dataclass(frozen=True)
class IngestPolicy:
    """Repair/rejection policy for price CSV ingestion.

    max_gap_fill_minutes: gaps up to this many missing minutes are repaired;
        longer gaps follow on_longer_gap.
    on_longer_gap: "error" rejects the file; "drop-window" splits the series
        at long gaps and keeps the longest contiguous window (earliest wins
        ties).
    duplicate_policy: "error" rejects rows landing on an already-seen minute;
        "keep-first" keeps the first row in file order.
    """

    max_gap_fill_minutes: int = 5
    on_longer_gap: str = "error"
    duplicate_policy: str = "error"

    def __post_init__(self):
        if self.max_gap_fill_minutes < 0:
            raise ValidationError("max_gap_fill_minutes must be >= 0")
        if self.on_longer_gap not in ("error", "drop-window"):
            raise ValidationError(f"unknown on_longer_gap: {self.on_longer_gap!r}")
        if self.duplicate_policy not in ("error", "keep-first"):
            raise ValidationError(f"unknown duplicate_policy: {self.duplicate_policy!r}")


@dataclass(frozen=True)
class ParseReport:
    """What ingestion did to the raw file."""

    rows_parsed: int
    minutes_filled: int
    duplicates_dropped: int
    windows_dropped: int
    start_minute: int
    n_minutes: int


def _parse_timestamp_minute(raw: str, line_number: int) -> int:
    text = raw.strip()
    if not text:
        raise ParseError("empty timestamp", line_number)
    try:
        seconds = int(text)
    except ValueError:
        try:
            when = _dt.datetime.fromisoformat(text.replace("Z", "+00:00"))
        except ValueError:
            raise ParseError(f"unparseable timestamp {raw!r}", line_number) from None
        if when.tzinfo is None:
            when = when.replace(tzinfo=_dt.timezone.utc)
        seconds = int(when.timestamp())
    return seconds // 60


def _parse_float(raw: str, what: str, line_number: int) -> float:
    try:
        value = float(raw)
    except ValueError:
        raise ParseError(f"unparseable {what} {raw!r}", line_number) from None
    if not math.isfinite(value):
        raise ValidationError(f"line {line_number}: {what} must be finite, got {raw!r}")
    return value


def _read_rows(path, expected_header: list[str]):
    """Yield (line_number, row) for data rows, after validating the header."""
    with open(path, newline="", encoding="utf-8-sig") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError("empty file", 1) from None
        if [h.strip() for h in header] != expected_header:
            raise ParseError(
                f"expected header {','.join(expected_header)!r}, got {','.join(header)!r}",
                1,
            )
        for line_number, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue  # ignore blank lines
            if len(row) != len(expected_header):
                raise ParseError(
                    f"expected {len(expected_header)} columns, got {len(row)}",
                    line_number,
                )
            yield line_number, row


def parse_price_csv(
    path, policy: IngestPolicy | None = None
) -> tuple[MinutePriceSeries, MinuteVolumeSeries, ParseReport]:
    """Parse a ``timestamp,price,volume_usd`` file onto a uniform minute grid.

    Returns the price series, the volume series (same grid), and a report of
    the repairs made.

    Raises:
        ParseError: malformed rows or header (message carries the line number).
        ValidationError: non-positive/non-finite price, negative volume,
            duplicate minutes under the "error" policy, or a result too short
            to form a valid series.
        GapError: a gap longer than the policy allows under "error".
        OSError: unreadable file.
    """
    policy = policy or IngestPolicy()
    by_minute: dict[int, tuple[float, float]] = {}
    rows_parsed = 0
    duplicates_dropped = 0

    for line_number, row in _read_rows(path, PRICE_HEADER):
        minute = _parse_timestamp_minute(row[0], line_number)
        price = _parse_float(row[1], "price", line_number)
        volume = _parse_float(row[2], "volume_usd", line_number)
        if price <= 0:
            raise ValidationError(f"line {line_number}: price must be positive, got {price}")
        if volume < 0:
            raise ValidationError(f"line {line_number}: volume must be >= 0, got {volume}")
        rows_parsed += 1
        if minute in by_minute:
            if policy.duplicate_policy == "error":
                raise ValidationError(
                    f"line {line_number}: duplicate minute "
                    f"{minute_to_datetime(minute).isoformat()}"
                )
            duplicates_dropped += 1
            continue
        by_minute[minute] = (price, volume)

    if not by_minute:
        raise ValidationError(f"{path}: no data rows")

    minutes = sorted(by_minute)
    # Split into contiguous windows, repairing gaps within the fill limit.
    windows: list[tuple[int, list[float], list[float]]] = []
    start = minutes[0]
    prices: list[float] = [by_minute[start][0]]
    volumes: list[float] = [by_minute[start][1]]
    minutes_filled = 0
    prev = start
    for minute in minutes[1:]:
        gap = minute - prev - 1
        if gap > policy.max_gap_fill_minutes:
            if policy.on_longer_gap == "error":
                raise GapError(
                    f"gap of {gap} minutes after "
                    f"{minute_to_datetime(prev).isoformat()} exceeds "
                    f"max_gap_fill_minutes={policy.max_gap_fill_minutes}"
                )
            windows.append((start, prices, volumes))
            start = minute
            prices = [by_minute[minute][0]]
            volumes = [by_minute[minute][1]]
            prev = minute
            continue
        if gap > 0:
            prices.extend([prices[-1]] * gap)  # forward-fill stale price
            volumes.extend([0.0] * gap)
            minutes_filled += gap
        prices.append(by_minute[minute][0])
        volumes.append(by_minute[minute][1])
        prev = minute
    windows.append((start, prices, volumes))

    windows.sort(key=lambda w: (-len(w[1]), w[0]))  # longest, earliest on ties
    start, prices, volumes = windows[0]
    if len(prices) < 2:
        raise ValidationError(
            f"{path}: longest usable window has {len(prices)} minute(s); need at least 2"
        )
    report = ParseReport(
        rows_parsed=rows_parsed,
        minutes_filled=minutes_filled,
        duplicates_dropped=duplicates_dropped,
        windows_dropped=len(windows) - 1,
        start_minute=start,
        n_minutes=len(prices),
    )
    return (
        MinutePriceSeries(start, np.array(prices)),
        MinuteVolumeSeries(start, np.array(volumes)),
        report,
    )


def parse_redemption_csv(path, policy: IngestPolicy | None = None) -> DailyRedemptionSeries:
    """Parse a ``date,redemption_usd`` file into a sorted daily series.

    Duplicate dates follow the policy's duplicate_policy (first row in file
    order wins under "keep-first"). Values are USD and preserved exactly to
    the dollar (they are well inside float64's integer range).
    """
    policy = policy or IngestPolicy()
    by_date: dict[_dt.date, float] = {}
    for line_number, row in _read_rows(path, REDEMPTION_HEADER):
        try:
            day = _dt.date.fromisoformat(row[0].strip())
        except ValueError:
            raise ParseError(f"unparseable date {row[0]!r}", line_number) from None
        value = _parse_float(row[1], "redemption_usd", line_number)
        if value < 0:
            raise ValidationError(
                f"line {line_number}: redemption_usd must be >= 0, got {value}"
            )
        if day in by_date:
            if policy.duplicate_policy == "error":
                raise ValidationError(f"line {line_number}: duplicate date {day.isoformat()}")
            continue
        by_date[day] = value
    if not by_date:
        raise ValidationError(f"{path}: no data rows")
    dates = tuple(sorted(by_date))
    return DailyRedemptionSeries(dates, np.array([by_date[d] for d in dates]))


def _format_minute(minute: int) -> str:
    return minute_to_datetime(minute).strftime("%Y-%m-%dT%H:%M:%SZ")


def write_price_csv(path, prices: MinutePriceSeries, volumes: MinuteVolumeSeries) -> None:
    """Write the canonical price/volume CSV form (round-trips through parse)."""
    if prices.start_minute != volumes.start_minute or len(prices) != len(volumes):
        raise ValidationError("price and volume series must share one grid")
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(PRICE_HEADER)
        for i, minute in enumerate(range(prices.start_minute, prices.end_minute)):
            writer.writerow(
                [_format_minute(minute), repr(prices.prices[i].item()), repr(volumes.volumes[i].item())]
            )


def write_redemption_csv(path, series: DailyRedemptionSeries) -> None:
    """Write the canonical daily redemption CSV form."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(REDEMPTION_HEADER)
        for day, value in zip(series.dates, series.redemptions):
            writer.writerow([day.isoformat(), repr(value.item())])
