"""Deterministic synthetic stress scenario.

Generates a minute price/volume window plus daily redemptions shaped like a
severe depeg episode: flat at par, a linear ramp to a configured peak
deviation, then a two-time-scale recovery (a fast component with the given
half-life decaying onto a plateau, and the plateau itself bleeding away eight
times slower), with clipped Gaussian noise on stressed minutes. Daily
redemption totals hit their configured targets exactly, so the default spec
reproduces the calibrated outflow tail to the dollar.

Volumes are drawn lognormally around a base level and tripled on stressed
minutes. The defaults keep every minute's volume far below the level at which
the counterfactual rail transform's scale would leave its floor, which pins
the transformed peak at min_scale * peak exactly.

``redemption_minute_trace`` converts daily totals into the minute-resolution
demand trace the rail engine consumes: on stressed days a worst-hour share of
the day's flow lands uniformly inside the hour containing the day's worst
deviation, the rest spreads uniformly over the other minutes.
"""

from __future__ import annotations

import datetime as _dt
from dataclasses import dataclass

import numpy as np

from .errors import ScenarioSpecError, ValidationError
from .series import (
    MINUTES_PER_DAY,
    DailyRedemptionSeries,
    DeviationSeries,
    MinutePriceSeries,
    MinuteVolumeSeries,
)

_EPOCH_ORDINAL = _dt.date(1970, 1, 1).toordinal()

# 2023-03-10 00:00 UTC, the default window's first minute.
DEFAULT_START_MINUTE = (_dt.date(2023, 3, 10).toordinal() - _EPOCH_ORDINAL) * MINUTES_PER_DAY

DEFAULT_DAILY_TARGETS = (
    650_000_000.0,
    900_000_000.0,
    1_276_681_615.0,
    1_824_824_810.0,
    1_849_824_810.0,
)

STRESS_THRESHOLD_BPS = 5.0


@dataclass(frozen=True)
class SyntheticScenarioSpec:
    """Scenario shape and calibration targets.

    The defaults describe a five-day window whose fourth/fifth-day redemption
    totals place the empirical p99 at 1,848,824,810 USD exactly and whose
    deviation trajectory tops out at exactly peak_deviation_bps.
    """

    seed: int = 42
    window_minutes: int = 7200
    start_minute: int = DEFAULT_START_MINUTE
    peak_deviation_bps: float = 1219.0
    shock_onset_minute: int = 1500
    ramp_minutes: int = 60
    plateau_bps: float = 60.0
    recovery_halflife_minutes: float = 240.0
    noise_bps: float = 2.0
    daily_redemption_targets: tuple = DEFAULT_DAILY_TARGETS
    base_volume_usd_per_min: float = 4e6

    def __post_init__(self):
        object.__setattr__(
            self, "daily_redemption_targets", tuple(float(x) for x in self.daily_redemption_targets)
        )
        if self.window_minutes < 2:
            raise ScenarioSpecError("window_minutes must be >= 2")
        if not (0.0 <= self.plateau_bps < self.peak_deviation_bps < 10000.0):
            raise ScenarioSpecError(
                "need 0 <= plateau_bps < peak_deviation_bps < 10000 "
                f"(got plateau={self.plateau_bps}, peak={self.peak_deviation_bps})"
            )
        if self.shock_onset_minute < 0 or self.ramp_minutes < 0:
            raise ScenarioSpecError("shock_onset_minute and ramp_minutes must be >= 0")
        if self.shock_onset_minute + self.ramp_minutes >= self.window_minutes:
            raise ScenarioSpecError("onset plus ramp must land inside the window")
        if self.recovery_halflife_minutes < 0:
            raise ScenarioSpecError("recovery_halflife_minutes must be >= 0")
        if self.noise_bps < 0:
            raise ScenarioSpecError("noise_bps must be >= 0")
        if self.base_volume_usd_per_min <= 0:
            raise ScenarioSpecError("base_volume_usd_per_min must be positive")
        n_days = -(-self.window_minutes // MINUTES_PER_DAY)
        if len(self.daily_redemption_targets) != n_days:
            raise ScenarioSpecError(
                f"window spans {n_days} day(s) but "
                f"{len(self.daily_redemption_targets)} daily targets were given"
            )
        if any(x < 0 for x in self.daily_redemption_targets):
            raise ScenarioSpecError("daily redemption targets must be >= 0")

    @property
    def peak_minute(self) -> int:
        return self.shock_onset_minute + self.ramp_minutes


def deviation_profile(spec: SyntheticScenarioSpec) -> np.ndarray:
    """Noise-free deviation trajectory in bps, one value per window minute."""
    t = np.arange(spec.window_minutes, dtype=np.float64)
    profile = np.zeros(spec.window_minutes)
    onset, peak_minute = spec.shock_onset_minute, spec.peak_minute
    if spec.ramp_minutes > 0:
        ramp = (t >= onset) & (t <= peak_minute)
        profile[ramp] = spec.peak_deviation_bps * (t[ramp] - onset) / spec.ramp_minutes
    else:
        profile[peak_minute] = spec.peak_deviation_bps
    after = t > peak_minute
    if spec.recovery_halflife_minutes > 0:
        delta = t[after] - peak_minute
        h = spec.recovery_halflife_minutes
        profile[after] = spec.plateau_bps * np.exp2(-delta / (8.0 * h)) + (
            spec.peak_deviation_bps - spec.plateau_bps
        ) * np.exp2(-delta / h)
    return profile


def generate_synthetic_scenario(
    spec: SyntheticScenarioSpec,
) -> tuple[MinutePriceSeries, MinuteVolumeSeries, DailyRedemptionSeries]:
    """Build the scenario. Bit-identical outputs for identical spec + seed."""
    rng = np.random.default_rng(spec.seed)
    profile = deviation_profile(spec)

    dev = profile.copy()
    if spec.noise_bps > 0:
        noise = rng.normal(0.0, spec.noise_bps, spec.window_minutes)
        np.clip(noise, -3.0 * spec.noise_bps, 3.0 * spec.noise_bps, out=noise)
        stressed = profile > 0
        dev[stressed] += noise[stressed]
        np.clip(dev, 0.0, spec.peak_deviation_bps, out=dev)
    dev[spec.peak_minute] = spec.peak_deviation_bps  # the peak is exact by construction

    prices = MinutePriceSeries(spec.start_minute, 1.0 - dev / 10000.0)

    factor = np.where(profile >= STRESS_THRESHOLD_BPS, 3.0, 1.0)
    log_noise = rng.normal(0.0, 0.05, spec.window_minutes)
    np.clip(log_noise, -0.15, 0.15, out=log_noise)
    volumes = MinuteVolumeSeries(
        spec.start_minute, spec.base_volume_usd_per_min * factor * np.exp(log_noise)
    )

    start_day = spec.start_minute // MINUTES_PER_DAY
    dates = tuple(
        _dt.date.fromordinal(_EPOCH_ORDINAL + start_day + i)
        for i in range(len(spec.daily_redemption_targets))
    )
    redemptions = DailyRedemptionSeries(dates, np.array(spec.daily_redemption_targets))
    return prices, volumes, redemptions


def redemption_minute_trace(
    redemptions: DailyRedemptionSeries,
    dev: DeviationSeries,
    worst_hour_share: float = 0.75,
    stress_eps_bps: float = STRESS_THRESHOLD_BPS,
) -> tuple[int, np.ndarray]:
    """Spread daily redemption totals onto the deviation series' minute grid.

    A day whose worst deviation reaches stress_eps_bps is a stress day: the
    worst_hour_share of its total lands uniformly in the clock hour holding
    the day's deviation maximum, the remainder uniformly elsewhere. Calm days
    spread uniformly. Every redemption date must be fully covered by the
    deviation window so no demand is silently dropped.

    Returns (start_minute, demand_usd_per_minute) on the deviation grid.
    """
    if not (0.0 < worst_hour_share <= 1.0):
        raise ValidationError("worst_hour_share must be in (0, 1]")
    start, n = dev.start_minute, len(dev)
    out = np.zeros(n)
    for day, total in zip(redemptions.dates, redemptions.redemptions):
        day_start = (day.toordinal() - _EPOCH_ORDINAL) * MINUTES_PER_DAY
        lo, hi = day_start - start, day_start + MINUTES_PER_DAY - start
        if lo < 0 or hi > n:
            raise ValidationError(
                f"deviation window does not fully cover redemption date {day.isoformat()}"
            )
        day_dev = dev.deviations[lo:hi]
        total = float(total)
        if day_dev.max() >= stress_eps_bps:
            worst_hour = int(np.argmax(day_dev)) // 60
            hour_lo = lo + 60 * worst_hour
            out[lo:hi] = (1.0 - worst_hour_share) * total / (MINUTES_PER_DAY - 60)
            out[hour_lo : hour_lo + 60] = worst_hour_share * total / 60.0
        else:
            out[lo:hi] = total / MINUTES_PER_DAY
    return start, out
