"""Scenario configuration: a nested, JSON-serializable description of one
baseline-vs-hybrid comparison run.

``paper_defaults`` is the named preset carrying the calibrated parameter set
every report in the docs uses: a $43B float held 12% cash / 45% T-bills /
43% repos, half the cash accessible inside the worst hour, a 2% T-bill
haircut, p = 0.99 outflow tail with a 75% worst-hour share, a $100M/min
counterfactual rail at pass-through 0.5 over a $5M/min volume floor and 0.25
scale floor, a 2 req/min/server desk sized 5 (baseline) vs 12 (hybrid), and
$1M average tickets against a 60-second SLA.

Configs load from JSON files; ``load_config`` accepts a preset name or a
path. Unknown keys are rejected so typos fail loudly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace

from .errors import ValidationError
from .funding import ReservePortfolio
from .peg import HybridRailParams
from .railsim import FULL_DAY_SCHEDULE, RailConfig
from .synth import SyntheticScenarioSpec

PRESET_NAMES = ("paper_defaults",)


@dataclass(frozen=True)
class QueueConfig:
    """Desk parameters shared by both scenarios, plus per-scenario capacity."""

    service_rate_per_min: float = 2.0
    baseline_servers: int = 5
    hybrid_servers: int = 12
    ticket_size_usd: float = 1e6
    sla_seconds: float = 60.0

    def __post_init__(self):
        if self.service_rate_per_min <= 0:
            raise ValidationError("service_rate_per_min must be positive")
        if self.baseline_servers < 1 or self.hybrid_servers < 1:
            raise ValidationError("server counts must be >= 1")
        if self.ticket_size_usd <= 0 or self.sla_seconds <= 0:
            raise ValidationError("ticket_size_usd and sla_seconds must be positive")


@dataclass(frozen=True)
class RailScenarioConfig:
    """Rail knobs for one scenario; the portfolio is injected at run time."""

    standing_line_cap_share_of_tbills: float = 0.0  # cap = share * B * F
    tbill_settlement_lag_minutes: int = 1440
    rtgs_schedule: tuple = FULL_DAY_SCHEDULE
    prefund_topup_usd: float = 0.0

    def __post_init__(self):
        object.__setattr__(
            self, "rtgs_schedule", tuple((int(a), int(b)) for a, b in self.rtgs_schedule)
        )
        if not (0.0 <= self.standing_line_cap_share_of_tbills <= 1.0):
            raise ValidationError("standing_line_cap_share_of_tbills must be in [0, 1]")

    def build(self, portfolio: ReservePortfolio) -> RailConfig:
        return RailConfig(
            portfolio=portfolio,
            standing_line_cap_usd=self.standing_line_cap_share_of_tbills * portfolio.tbills_usd,
            tbill_settlement_lag_minutes=self.tbill_settlement_lag_minutes,
            rtgs_schedule=self.rtgs_schedule,
            prefund_topup_usd=self.prefund_topup_usd,
        )


@dataclass(frozen=True)
class ScenarioConfig:
    """Everything run_scenario needs. Baseline and hybrid share the portfolio
    and data; they differ in rail capacity and desk size."""

    portfolio: ReservePortfolio
    synthetic: bool = True
    synthetic_spec: SyntheticScenarioSpec = field(default_factory=SyntheticScenarioSpec)
    price_csv: str | None = None
    redemption_csv: str | None = None
    full_sample_redemption_csv: str | None = None
    tail_p: float = 0.99
    worst_hour_share: float = 0.75
    hybrid_rail: HybridRailParams = field(default_factory=HybridRailParams)
    queue: QueueConfig = field(default_factory=QueueConfig)
    rail_baseline: RailScenarioConfig = field(default_factory=RailScenarioConfig)
    rail_hybrid: RailScenarioConfig = field(
        default_factory=lambda: RailScenarioConfig(standing_line_cap_share_of_tbills=1.0)
    )
    eps_bps: float = 5.0
    gamma_bps: float = 10.0
    out_dir: str = "out"

    def __post_init__(self):
        if not (0.0 < self.tail_p < 1.0):
            raise ValidationError("tail_p must be in (0, 1)")
        if not (0.0 < self.worst_hour_share <= 1.0):
            raise ValidationError("worst_hour_share must be in (0, 1]")
        if self.eps_bps <= 0 or self.gamma_bps <= 0:
            raise ValidationError("eps_bps and gamma_bps must be positive")
        if not self.synthetic and not (self.price_csv and self.redemption_csv):
            raise ValidationError(
                "non-synthetic runs need both price_csv and redemption_csv"
            )


def paper_defaults(seed: int = 42) -> ScenarioConfig:
    """The calibrated default scenario (see module docstring)."""
    return ScenarioConfig(
        portfolio=ReservePortfolio(
            float_usd=43e9,
            cash_share=0.12,
            tbill_share=0.45,
            repo_share=0.43,
            cash_access_factor=0.5,
            tbill_haircut_1h=0.02,
            tbill_line_cap_usd=0.0,
            repo_convertible_24h=False,
        ),
        synthetic=True,
        synthetic_spec=SyntheticScenarioSpec(seed=seed),
    )


def _build(cls, data: dict, what: str):
    if not isinstance(data, dict):
        raise ValidationError(f"{what} must be a JSON object")
    names = {f for f in cls.__dataclass_fields__}
    unknown = set(data) - names
    if unknown:
        raise ValidationError(f"unknown {what} key(s): {', '.join(sorted(unknown))}")
    try:
        return cls(**data)
    except TypeError as exc:
        raise ValidationError(f"bad {what}: {exc}") from None


def config_from_dict(data: dict) -> ScenarioConfig:
    """Validate and build a ScenarioConfig from parsed JSON."""
    if not isinstance(data, dict):
        raise ValidationError("config root must be a JSON object")
    known = set(ScenarioConfig.__dataclass_fields__)
    unknown = set(data) - known
    if unknown:
        raise ValidationError(f"unknown config key(s): {', '.join(sorted(unknown))}")
    kwargs = dict(data)
    if "portfolio" not in kwargs:
        raise ValidationError("config must define a portfolio")
    kwargs["portfolio"] = _build(ReservePortfolio, kwargs["portfolio"], "portfolio")
    if "synthetic_spec" in kwargs:
        kwargs["synthetic_spec"] = _build(
            SyntheticScenarioSpec, kwargs["synthetic_spec"], "synthetic_spec"
        )
    if "hybrid_rail" in kwargs:
        kwargs["hybrid_rail"] = _build(HybridRailParams, kwargs["hybrid_rail"], "hybrid_rail")
    if "queue" in kwargs:
        kwargs["queue"] = _build(QueueConfig, kwargs["queue"], "queue")
    for key in ("rail_baseline", "rail_hybrid"):
        if key in kwargs:
            kwargs[key] = _build(RailScenarioConfig, kwargs[key], key)
    return ScenarioConfig(**kwargs)


def load_config(name_or_path: str, seed: int | None = None) -> ScenarioConfig:
    """Load a preset by name or a JSON config file by path.

    ``seed`` overrides the synthetic spec's seed when given.
    """
    if name_or_path in PRESET_NAMES:
        return paper_defaults(seed if seed is not None else 42)
    with open(name_or_path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{name_or_path}: invalid JSON ({exc})") from None
    config = config_from_dict(data)
    if seed is not None:
        config = replace(
            config, synthetic_spec=replace(config.synthetic_spec, seed=seed)
        )
    return config
