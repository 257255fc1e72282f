"""Stablecoin liquidity stress testing.

Core pieces: minute-grid series types and peg-deviation metrics, funding
coverage ratios over stressed outflow tails, a par-redemption-rail price
counterfactual, Erlang-C desk analytics with a discrete-event oracle, a
two-outcome run-equilibrium classifier, and a minute-stepped settlement rail
simulator — orchestrated by a config-driven scenario runner and CLI.
"""

__version__ = "0.1.0"

from .errors import (
    AlignmentError,
    GapError,
    ParseError,
    ScenarioSpecError,
    StabilityError,
    ValidationError,
)
from .funding import (
    CoverageResult,
    OutflowTail,
    ReservePortfolio,
    coverage,
    empirical_quantile,
    imr,
    outflow_tail,
)
from .ingest import (
    IngestPolicy,
    ParseReport,
    parse_price_csv,
    parse_redemption_csv,
    write_price_csv,
    write_redemption_csv,
)
from .peg import (
    HybridRailParams,
    PegSummary,
    alpha_sensitivity,
    hybrid_transform,
    scale_factors,
    summarize,
)
from .queueing import (
    QueueParams,
    QueueResult,
    arrival_rate_from_tail,
    erlang_c,
    min_servers,
    simulate_mmc,
)
from .railsim import (
    RailConfig,
    RailState,
    RailTrace,
    full_reserve_check,
    initial_state,
    run_rail,
    step,
)
from .rundyn import RunModel, classify_equilibria, run_payoff, wait_payoff
from .report import StressReport, render
from .scenario import run_scenario, run_scenario_with_artifacts
from .config import ScenarioConfig, load_config, paper_defaults
from .series import (
    DailyRedemptionSeries,
    DeviationSeries,
    MinutePriceSeries,
    MinuteVolumeSeries,
    align,
    compute_deviation,
)
from .synth import SyntheticScenarioSpec, generate_synthetic_scenario, redemption_minute_trace

__all__ = [
    "__version__",
    "AlignmentError",
    "GapError",
    "ParseError",
    "ScenarioSpecError",
    "StabilityError",
    "ValidationError",
    "CoverageResult",
    "OutflowTail",
    "ReservePortfolio",
    "coverage",
    "empirical_quantile",
    "imr",
    "outflow_tail",
    "IngestPolicy",
    "ParseReport",
    "parse_price_csv",
    "parse_redemption_csv",
    "write_price_csv",
    "write_redemption_csv",
    "HybridRailParams",
    "PegSummary",
    "alpha_sensitivity",
    "hybrid_transform",
    "scale_factors",
    "summarize",
    "QueueParams",
    "QueueResult",
    "arrival_rate_from_tail",
    "erlang_c",
    "min_servers",
    "simulate_mmc",
    "RailConfig",
    "RailState",
    "RailTrace",
    "full_reserve_check",
    "initial_state",
    "run_rail",
    "step",
    "RunModel",
    "classify_equilibria",
    "run_payoff",
    "wait_payoff",
    "StressReport",
    "render",
    "run_scenario",
    "run_scenario_with_artifacts",
    "ScenarioConfig",
    "load_config",
    "paper_defaults",
    "DailyRedemptionSeries",
    "DeviationSeries",
    "MinutePriceSeries",
    "MinuteVolumeSeries",
    "align",
    "compute_deviation",
    "SyntheticScenarioSpec",
    "generate_synthetic_scenario",
    "redemption_minute_trace",
]
