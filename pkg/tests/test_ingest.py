import datetime

import numpy as np
import pytest

from pegstress.errors import GapError, ParseError, ValidationError
from pegstress.ingest import (
    IngestPolicy,
    parse_price_csv,
    parse_redemption_csv,
    write_price_csv,
    write_redemption_csv,
)
from pegstress.series import DailyRedemptionSeries, MinutePriceSeries, MinuteVolumeSeries

HEADER = "timestamp,price,volume_usd\n"


def write(tmp_path, name, body):
    p = tmp_path / name
    p.write_text(body)
    return str(p)


def test_parse_price_happy_path(tmp_path):
    path = write(
        tmp_path,
        "p.csv",
        HEADER
        + "2023-03-10T00:00:00Z,1.0,5000000\n"
        + "2023-03-10T00:01:00Z,0.9995,6000000\n"
        + "2023-03-10T00:02:00Z,1.0002,5500000\n",
    )
    prices, volumes, rep = parse_price_csv(path)
    assert rep.rows_parsed == 3
    assert rep.n_minutes == 3
    assert rep.minutes_filled == 0
    assert prices.start_minute == 19426 * 1440
    np.testing.assert_allclose(prices.prices, [1.0, 0.9995, 1.0002])
    np.testing.assert_allclose(volumes.volumes, [5e6, 6e6, 5.5e6])


def test_parse_price_epoch_seconds(tmp_path):
    base = 19426 * 1440 * 60
    path = write(
        tmp_path,
        "p.csv",
        HEADER + f"{base},1.0,1\n{base + 60},1.0,1\n",
    )
    prices, _, _ = parse_price_csv(path)
    assert prices.start_minute == 19426 * 1440


def test_parse_price_fills_short_gap(tmp_path):
    # one missing minute: price forward-fills, volume fills at zero
    path = write(
        tmp_path,
        "p.csv",
        HEADER
        + "2023-03-10T00:00:00Z,1.0,5000000\n"
        + "2023-03-10T00:02:00Z,0.999,7000000\n",
    )
    prices, volumes, rep = parse_price_csv(path)
    assert rep.minutes_filled == 1
    np.testing.assert_allclose(prices.prices, [1.0, 1.0, 0.999])
    np.testing.assert_allclose(volumes.volumes, [5e6, 0.0, 7e6])


def test_parse_price_long_gap_errors_by_default(tmp_path):
    rows = [HEADER, "2023-03-10T00:00:00Z,1.0,1\n", "2023-03-10T00:10:00Z,1.0,1\n"]
    path = write(tmp_path, "p.csv", "".join(rows))
    with pytest.raises(GapError):
        parse_price_csv(path)


def test_parse_price_long_gap_drop_window_keeps_longest(tmp_path):
    # 3-minute window, 9-minute hole, then a 5-minute window: keep the second
    body = [HEADER]
    for i in range(3):
        body.append(f"2023-03-10T00:0{i}:00Z,1.0,1\n")
    for i in range(5):
        body.append(f"2023-03-10T00:1{2 + i}:00Z,1.001,2\n")
    path = write(tmp_path, "p.csv", "".join(body))
    policy = IngestPolicy(max_gap_fill_minutes=5, on_longer_gap="drop-window")
    prices, volumes, rep = parse_price_csv(path, policy)
    assert rep.windows_dropped == 1
    assert len(prices) == 5
    assert prices.start_minute == 19426 * 1440 + 12
    np.testing.assert_allclose(prices.prices, np.full(5, 1.001))


def test_parse_price_duplicate_minute(tmp_path):
    body = (
        HEADER
        + "2023-03-10T00:00:00Z,1.0,1\n"
        + "2023-03-10T00:00:30Z,1.5,9\n"  # same minute after flooring
        + "2023-03-10T00:01:00Z,1.0,1\n"
    )
    path = write(tmp_path, "p.csv", body)
    with pytest.raises(ValidationError):
        parse_price_csv(path)
    prices, volumes, rep = parse_price_csv(path, IngestPolicy(duplicate_policy="keep-first"))
    assert rep.duplicates_dropped == 1
    np.testing.assert_allclose(prices.prices, [1.0, 1.0])


def test_parse_price_bad_header_and_rows(tmp_path):
    with pytest.raises(ParseError):
        parse_price_csv(write(tmp_path, "a.csv", "time,price,volume\n1,1,1\n"))
    with pytest.raises(ParseError):
        parse_price_csv(write(tmp_path, "b.csv", HEADER + "2023-03-10T00:00:00Z,zero,1\n"))
    with pytest.raises(ValidationError):
        parse_price_csv(write(tmp_path, "c.csv", HEADER))  # no data rows


def test_parse_error_reports_line_number(tmp_path):
    path = write(tmp_path, "p.csv", HEADER + "2023-03-10T00:00:00Z,1.0,1\nnot-a-time,1.0,1\n")
    with pytest.raises(ParseError) as exc:
        parse_price_csv(path)
    assert "line 3" in str(exc.value)


def test_parse_redemptions(tmp_path):
    body = "date,redemption_usd\n2023-03-11,2.5e9\n2023-03-10,1e9\n"
    path = write(tmp_path, "r.csv", body)
    series = parse_redemption_csv(path)
    assert series.dates == (datetime.date(2023, 3, 10), datetime.date(2023, 3, 11))
    np.testing.assert_allclose(series.redemptions, [1e9, 2.5e9])


def test_parse_redemptions_duplicate_date(tmp_path):
    body = "date,redemption_usd\n2023-03-10,1e9\n2023-03-10,2e9\n"
    path = write(tmp_path, "r.csv", body)
    with pytest.raises(ValidationError):
        parse_redemption_csv(path)


def test_price_csv_round_trip(tmp_path):
    rng = np.random.default_rng(5)
    n = 200
    prices = MinutePriceSeries(19426 * 1440, 1.0 + rng.normal(0, 1e-3, n))
    volumes = MinuteVolumeSeries(19426 * 1440, rng.uniform(0, 1e7, n))
    path = tmp_path / "round.csv"
    write_price_csv(path, prices, volumes)
    p2, v2, rep = parse_price_csv(path)
    assert rep.rows_parsed == n
    assert p2 == prices  # bitwise equality via repr() round-trip
    assert v2 == volumes


def test_redemption_csv_round_trip(tmp_path):
    dates = tuple(datetime.date(2023, 3, 10) + datetime.timedelta(days=i) for i in range(4))
    series = DailyRedemptionSeries(dates, np.array([1e9, 2e9, 1848824810.0, 7.0]))
    path = tmp_path / "r.csv"
    write_redemption_csv(path, series)
    assert parse_redemption_csv(path) == series


def test_policy_validation():
    with pytest.raises(ValidationError):
        IngestPolicy(max_gap_fill_minutes=-1)
    with pytest.raises(ValidationError):
        IngestPolicy(on_longer_gap="explode")
    with pytest.raises(ValidationError):
        IngestPolicy(duplicate_policy="sum")
