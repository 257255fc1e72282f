"""Peg-deviation persistence metrics and the par-redemption-rail
counterfactual transform.

The transform scales each minute's deviation by how much tradable depth a
par rail of capacity R adds at pass-through alpha:

    s_t     = max(S_min, V_eff / (V_eff + alpha * R)),  V_eff = max(V_t, Vol_Floor)
    D_t^hyp = D_t * s_t

so s_t is in [S_min, 1]: the counterfactual never worsens a deviation and
never shrinks it below the floor share. Threshold comparisons everywhere are
inclusive (D_t >= eps counts).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .errors import AlignmentError, ValidationError
from .series import DeviationSeries, MinuteVolumeSeries, minute_to_datetime


@dataclass(frozen=True)
class HybridRailParams:
    """Counterfactual rail description.

    rail_capacity_usd_per_min: R, par-redemption capacity per minute.
    pass_through: alpha in (0, 1], the share of R that behaves like market
        depth at minute frequency.
    vol_floor_usd_per_min: lower bound substituted for thin observed volume.
    min_scale: floor on the per-minute scaling factor.
    """

    rail_capacity_usd_per_min: float = 100e6
    pass_through: float = 0.5
    vol_floor_usd_per_min: float = 5e6
    min_scale: float = 0.25

    def __post_init__(self):
        if self.rail_capacity_usd_per_min < 0:
            raise ValidationError("rail capacity must be >= 0")
        if not (0.0 < self.pass_through <= 1.0):
            raise ValidationError("pass_through must be in (0, 1]")
        if self.vol_floor_usd_per_min <= 0:
            raise ValidationError("vol_floor_usd_per_min must be positive")
        if not (0.0 < self.min_scale <= 1.0):
            raise ValidationError("min_scale must be in (0, 1]")


@dataclass(frozen=True)
class PegSummary:
    """Persistence summary of one deviation series.

    d_max_bps: worst deviation.
    minutes_ge_eps: count of minutes at or above eps_bps (M_eps).
    longest_run_ge_gamma: longest consecutive run at or above gamma_bps (L_gamma).
    """

    d_max_bps: float
    minutes_ge_eps: int
    longest_run_ge_gamma: int
    eps_bps: float = 5.0
    gamma_bps: float = 10.0


def _longest_run(mask: np.ndarray) -> int:
    if not mask.any():
        return 0
    edges = np.flatnonzero(np.diff(np.r_[0, mask.astype(np.int8), 0]))
    return int((edges[1::2] - edges[0::2]).max())


def summarize(dev: DeviationSeries, eps_bps: float = 5.0, gamma_bps: float = 10.0) -> PegSummary:
    """D_max, M_eps, and L_gamma for one series (inclusive thresholds)."""
    if eps_bps <= 0 or gamma_bps <= 0:
        raise ValidationError("thresholds must be positive")
    d = dev.deviations
    return PegSummary(
        d_max_bps=float(d.max()),
        minutes_ge_eps=int((d >= eps_bps).sum()),
        longest_run_ge_gamma=_longest_run(d >= gamma_bps),
        eps_bps=eps_bps,
        gamma_bps=gamma_bps,
    )


def scale_factors(vol: MinuteVolumeSeries, params: HybridRailParams) -> np.ndarray:
    """Per-minute scaling factor s_t of the counterfactual transform."""
    v_eff = np.maximum(vol.volumes, params.vol_floor_usd_per_min)
    raw = v_eff / (v_eff + params.pass_through * params.rail_capacity_usd_per_min)
    return np.maximum(params.min_scale, raw)


def hybrid_transform(
    dev: DeviationSeries, vol: MinuteVolumeSeries, params: HybridRailParams
) -> DeviationSeries:
    """Apply the counterfactual depth transform minute by minute.

    Requires dev and vol on the identical grid (same start, same length).
    With rail capacity 0 the transform is the identity.
    """
    if dev.start_minute != vol.start_minute or len(dev) != len(vol):
        raise AlignmentError(
            f"deviation grid [{dev.start_minute}, {dev.end_minute}) does not match "
            f"volume grid [{vol.start_minute}, {vol.end_minute})"
        )
    return DeviationSeries(dev.start_minute, dev.deviations * scale_factors(vol, params))


def alpha_sensitivity(
    dev: DeviationSeries,
    vol: MinuteVolumeSeries,
    params: HybridRailParams,
    alpha_grid,
    eps_bps: float = 5.0,
    gamma_bps: float = 10.0,
) -> list[tuple[float, PegSummary]]:
    """Summaries of the transformed series across a pass-through grid.

    Larger alpha dilutes deviations harder, so every summary metric is
    nonincreasing along an increasing grid.
    """
    rows = []
    for alpha in alpha_grid:
        p = HybridRailParams(
            rail_capacity_usd_per_min=params.rail_capacity_usd_per_min,
            pass_through=float(alpha),
            vol_floor_usd_per_min=params.vol_floor_usd_per_min,
            min_scale=params.min_scale,
        )
        rows.append((float(alpha), summarize(hybrid_transform(dev, vol, p), eps_bps, gamma_bps)))
    return rows


def write_deviation_csv(
    path, base: DeviationSeries, hybrid: DeviationSeries, scale: np.ndarray
) -> None:
    """Per-minute baseline/counterfactual pairs for external plotting."""
    if base.start_minute != hybrid.start_minute or len(base) != len(hybrid):
        raise AlignmentError("baseline and hybrid series must share one grid")
    if len(scale) != len(base):
        raise AlignmentError("scale vector length must match the series")
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["timestamp", "d_base_bps", "d_hyp_bps", "scale"])
        for i, minute in enumerate(range(base.start_minute, base.end_minute)):
            writer.writerow(
                [
                    minute_to_datetime(minute).strftime("%Y-%m-%dT%H:%M:%SZ"),
                    repr(base.deviations[i].item()),
                    repr(hybrid.deviations[i].item()),
                    repr(float(scale[i])),
                ]
            )
