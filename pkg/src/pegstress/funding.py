"""Funding-liquidity coverage: outflow tails, instantly monetizable reserves,
and the coverage/shortfall metrics built from them.

Definitions, for a float F with cash share C, T-bill share B, cash access
factor a_c, 1-hour T-bill haircut h_B, and a standing-line cap L:

    IMR_1h  = a_c * C * F + (1 - h_B) * min(B * F, L)
    IMR_24h = C * F + B * F            (+ repo share * F when configured)
    ILCR    = IMR / Q                  (coverage ratio at the horizon)
    MMG     = max(0, Q - IMR)          (monetizable-money gap; 0 is the goal)

where Q is the stressed outflow quantile at the matching horizon. The 1-hour
outflow proxy is the worst-hour share of the 24-hour quantile:
Q_1h(p) = phi * Q_24h(p).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .series import DailyRedemptionSeries

HORIZONS = ("1h", "24h")


@dataclass(frozen=True)
class ReservePortfolio:
    """Reserve composition and monetization-access parameters.

    Shares are fractions of float_usd and must sum to at most 1.
    tbill_line_cap_usd bounds how much of the T-bill stock the standing
    collateralized line can monetize inside one hour; it does not restrict
    24-hour monetization. Repos count toward 24-hour IMR only when
    repo_convertible_24h is set (their conversion schedule is otherwise
    unspecified, so the default leaves them out).
    """

    float_usd: float
    cash_share: float
    tbill_share: float
    repo_share: float = 0.0
    cash_access_factor: float = 1.0
    tbill_haircut_1h: float = 0.0
    tbill_line_cap_usd: float = 0.0
    repo_convertible_24h: bool = False

    def __post_init__(self):
        if not (self.float_usd > 0 and math.isfinite(self.float_usd)):
            raise ValidationError("float_usd must be positive and finite")
        for name in ("cash_share", "tbill_share", "repo_share"):
            share = getattr(self, name)
            if not (0.0 <= share <= 1.0):
                raise ValidationError(f"{name} must be in [0, 1], got {share}")
        if self.cash_share + self.tbill_share + self.repo_share > 1.0 + 1e-9:
            raise ValidationError("reserve shares exceed 100% of float")
        if not (0.0 <= self.cash_access_factor <= 1.0):
            raise ValidationError("cash_access_factor must be in [0, 1]")
        if not (0.0 <= self.tbill_haircut_1h <= 1.0):
            raise ValidationError("tbill_haircut_1h must be in [0, 1]")
        if self.tbill_line_cap_usd < 0:
            raise ValidationError("tbill_line_cap_usd must be >= 0")

    @property
    def cash_usd(self) -> float:
        return self.cash_share * self.float_usd

    @property
    def tbills_usd(self) -> float:
        return self.tbill_share * self.float_usd


@dataclass(frozen=True)
class OutflowTail:
    """Stressed outflow quantiles: 24-hour level and its worst-hour proxy."""

    p: float
    q_24h_usd: float
    worst_hour_share: float
    q_1h_usd: float

    def __post_init__(self):
        if not (0.0 < self.p < 1.0):
            raise ValidationError("quantile level p must be in (0, 1)")
        if not (0.0 < self.worst_hour_share <= 1.0):
            raise ValidationError("worst_hour_share must be in (0, 1]")
        if self.q_1h_usd != self.worst_hour_share * self.q_24h_usd:
            raise ValidationError("q_1h_usd must equal worst_hour_share * q_24h_usd")


@dataclass(frozen=True)
class CoverageResult:
    """Coverage at one horizon: IMR, its ratio to the tail, and the gap."""

    horizon: str
    imr_usd: float
    ilcr: float
    mmg_usd: float
    design_goal_met: bool  # MMG == 0 at this horizon


def empirical_quantile(samples, p: float) -> float:
    """Linear-interpolation empirical quantile on the sorted sample.

    With n sorted values x_0 <= ... <= x_(n-1) and h = (n-1)*p, returns
    x_floor(h) + (h - floor(h)) * (x_floor(h)+1 - x_floor(h)); the maximum
    when h reaches n-1. This is the common "linear" (type 7) convention and
    matches numpy's default to within one ulp (numpy evaluates the identical
    interpolation with a symmetrized lerp).
    """
    arr = np.asarray(samples, dtype=np.float64)
    if arr.ndim != 1 or len(arr) == 0:
        raise ValidationError("quantile needs a nonempty 1-d sample")
    if not np.all(np.isfinite(arr)):
        raise ValidationError("quantile sample must be finite")
    if not (0.0 <= p <= 1.0):
        raise ValidationError(f"quantile level must be in [0, 1], got {p}")
    x = np.sort(arr)
    h = (len(x) - 1) * p
    lo = int(h)
    if lo >= len(x) - 1:
        return float(x[-1])
    frac = h - lo
    return float(x[lo] + frac * (x[lo + 1] - x[lo]))


def outflow_tail(
    redemptions: DailyRedemptionSeries, p: float = 0.99, worst_hour_share: float = 0.75
) -> OutflowTail:
    """Estimate the 24h outflow quantile and map it to the worst hour.

    Q_24h is the empirical p-quantile of the daily series; Q_1h is exactly
    worst_hour_share * Q_24h.
    """
    q24 = empirical_quantile(redemptions.redemptions, p)
    return OutflowTail(
        p=p,
        q_24h_usd=q24,
        worst_hour_share=worst_hour_share,
        q_1h_usd=worst_hour_share * q24,
    )


def imr(portfolio: ReservePortfolio, horizon: str) -> float:
    """Instantly monetizable reserves at a horizon of "1h" or "24h".

    At one hour, cash is discounted by the access factor and T-bills
    contribute only through the standing line: haircut applied, capped at the
    line size. At 24 hours cash and T-bills count in full; repos join only
    when the portfolio marks them convertible.
    """
    if horizon not in HORIZONS:
        raise ValidationError(f"horizon must be one of {HORIZONS}, got {horizon!r}")
    f = portfolio.float_usd
    if horizon == "1h":
        tbill_leg = (1.0 - portfolio.tbill_haircut_1h) * min(
            portfolio.tbill_share * f, portfolio.tbill_line_cap_usd
        )
        return portfolio.cash_access_factor * portfolio.cash_share * f + tbill_leg
    total = portfolio.cash_share * f + portfolio.tbill_share * f
    if portfolio.repo_convertible_24h:
        total += portfolio.repo_share * f
    return total


def coverage(portfolio: ReservePortfolio, tail: OutflowTail, horizon: str) -> CoverageResult:
    """ILCR and MMG at one horizon against the matching tail quantile.

    A zero outflow quantile yields infinite coverage and a zero gap.
    """
    q = tail.q_1h_usd if horizon == "1h" else tail.q_24h_usd
    value = imr(portfolio, horizon)
    if q == 0:
        return CoverageResult(horizon, value, math.inf, 0.0, True)
    mmg = max(0.0, q - value)
    return CoverageResult(horizon, value, value / q, mmg, mmg == 0.0)
