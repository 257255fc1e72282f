"""Command-line interface.

Subcommands map one-to-one onto the analysis modules:

  run           full baseline-vs-hybrid pipeline from a config or preset
  ingest-check  parse/validate CSV inputs and show the repair report
  funding       coverage ratios from portfolio + outflow-tail flags
  peg           persistence metrics and the counterfactual transform on a CSV
  queue         Erlang-C analytics (optionally the simulation oracle)
  rundyn        run-equilibrium classification
  rail          settlement-rail simulation of one scenario side
  synth         emit the synthetic scenario's CSV files

Exit codes: 0 success, 1 validation/usage error, 2 I/O error. Usage problems
print to stderr; --help prints to stdout and exits 0.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace

from . import __version__
from .config import PRESET_NAMES, load_config
from .errors import ValidationError
from .funding import OutflowTail, ReservePortfolio, coverage
from .ingest import IngestPolicy, parse_price_csv, parse_redemption_csv, write_price_csv, write_redemption_csv
from .peg import HybridRailParams, alpha_sensitivity, hybrid_transform, scale_factors, summarize, write_deviation_csv
from .queueing import QueueParams, erlang_c, min_servers, simulate_mmc
from .railsim import run_rail, summary_dict, write_trace_csv
from .report import format_usd, render
from .rundyn import RunModel, classify_equilibria, run_payoff, wait_payoff
from .scenario import run_scenario_with_artifacts, write_outputs
from .series import compute_deviation
from .synth import generate_synthetic_scenario, redemption_minute_trace


class _UsageError(Exception):
    def __init__(self, parser: argparse.ArgumentParser, message: str):
        super().__init__(message)
        self.parser = parser


class _Parser(argparse.ArgumentParser):
    """argparse parser that reports usage problems as exceptions.

    The stock parser exits 2 on bad flags; the CLI contract reserves 2 for
    I/O failures and uses 1 for every validation problem, usage included.
    """

    def error(self, message):
        raise _UsageError(self, message)


def _add_policy_flags(p):
    p.add_argument("--max-gap-fill", type=int, default=5, help="max forward-fillable gap, minutes")
    p.add_argument("--on-longer-gap", choices=["error", "drop-window"], default="error")
    p.add_argument("--duplicates", choices=["error", "keep-first"], default="error")


def _policy(args) -> IngestPolicy:
    return IngestPolicy(
        max_gap_fill_minutes=args.max_gap_fill,
        on_longer_gap=args.on_longer_gap,
        duplicate_policy=args.duplicates,
    )


def _cmd_run(args) -> int:
    config = load_config(args.config, seed=args.seed)
    if args.synthetic:
        config = replace(config, synthetic=True)
    out_dir = args.out_dir or config.out_dir
    report, artifacts = run_scenario_with_artifacts(config)
    paths = write_outputs(report, artifacts, out_dir)
    fmt = "json" if args.format == "json" else "text-table"
    sys.stdout.write(render(report, fmt).decode())
    for path in paths:
        print(f"wrote {path}", file=sys.stderr)
    return 0


def _cmd_ingest_check(args) -> int:
    if not args.prices and not args.redemptions:
        raise ValidationError("nothing to check: pass --prices and/or --redemptions")
    policy = _policy(args)
    if args.prices:
        prices, volumes, rep = parse_price_csv(args.prices, policy)
        print(
            f"{args.prices}: ok — {rep.rows_parsed} rows, {rep.n_minutes} minutes "
            f"from {rep.start_minute}, filled {rep.minutes_filled}, "
            f"dropped {rep.duplicates_dropped} duplicate(s), "
            f"{rep.windows_dropped} window(s)"
        )
    if args.redemptions:
        series = parse_redemption_csv(args.redemptions, policy)
        print(
            f"{args.redemptions}: ok — {len(series)} day(s), "
            f"{series.dates[0].isoformat()}..{series.dates[-1].isoformat()}"
        )
    return 0


def _cmd_funding(args) -> int:
    portfolio = ReservePortfolio(
        float_usd=args.float_usd,
        cash_share=args.cash,
        tbill_share=args.tbill,
        repo_share=args.repo,
        cash_access_factor=args.alpha_c,
        tbill_haircut_1h=args.haircut,
        tbill_line_cap_usd=args.cap,
        repo_convertible_24h=args.repo_24h,
    )
    tail = OutflowTail(
        p=args.p, q_24h_usd=args.q24, worst_hour_share=args.phi, q_1h_usd=args.phi * args.q24
    )
    print(f"Q_24h {format_usd(tail.q_24h_usd)}")
    print(f"Q_1h {format_usd(tail.q_1h_usd)}")
    for horizon in ("1h", "24h"):
        cov = coverage(portfolio, tail, horizon)
        print(f"IMR_{horizon} {format_usd(cov.imr_usd)}")
        print(f"ILCR_{horizon} {cov.ilcr:.3f}")
        print(f"MMG_{horizon} {format_usd(cov.mmg_usd)}")
    return 0


def _cmd_peg(args) -> int:
    prices, volumes, _ = parse_price_csv(args.prices, _policy(args))
    params = HybridRailParams(
        rail_capacity_usd_per_min=args.rail_capacity,
        pass_through=args.pass_through,
        vol_floor_usd_per_min=args.vol_floor,
        min_scale=args.min_scale,
    )
    dev = compute_deviation(prices)
    hyp = hybrid_transform(dev, volumes, params)
    for name, summary in (
        ("baseline", summarize(dev, args.eps, args.gamma)),
        ("hybrid", summarize(hyp, args.eps, args.gamma)),
    ):
        print(
            f"{name}: d_max={summary.d_max_bps:.1f} bps, "
            f"minutes_ge_{args.eps:g}={summary.minutes_ge_eps}, "
            f"longest_run_ge_{args.gamma:g}={summary.longest_run_ge_gamma}"
        )
    if args.alpha_grid:
        grid = [float(a) for a in args.alpha_grid.split(",")]
        for alpha, summary in alpha_sensitivity(dev, volumes, params, grid, args.eps, args.gamma):
            print(
                f"alpha={alpha:g}: d_max={summary.d_max_bps:.1f} bps, "
                f"minutes_ge_{args.eps:g}={summary.minutes_ge_eps}, "
                f"longest_run_ge_{args.gamma:g}={summary.longest_run_ge_gamma}"
            )
    if args.out_csv:
        write_deviation_csv(args.out_csv, dev, hyp, scale_factors(volumes, params))
        print(f"wrote {args.out_csv}", file=sys.stderr)
    return 0


def _cmd_queue(args) -> int:
    params = QueueParams(
        arrival_rate_per_min=args.lam,
        service_rate_per_min=args.mu,
        servers=args.servers,
        ticket_size_usd=args.ticket,
        sla_seconds=args.sla,
    )
    result = erlang_c(params)
    print(f"rho {result.utilization:.4f}")
    if not result.stable:
        print("unstable: expected wait is unbounded (reported as inf)")
    else:
        print(f"p_wait {result.p_wait:.4f}")
        print(f"wq_seconds {result.wq_seconds:.1f}")
    print(f"min_servers_for_sla({args.sla:g}s) {min_servers(args.lam, args.mu, args.sla)}")
    if args.simulate:
        sim = simulate_mmc(params, args.simulate, args.seed)
        print(f"sim_p_wait {sim.p_wait:.4f}")
        print(f"sim_wq_seconds {sim.wq_seconds:.1f}")
    return 0


def _cmd_rundyn(args) -> int:
    model = RunModel(
        hold_to_maturity_value=args.hold,
        fire_sale_value=args.theta,
        insured_fraction=args.insured,
        impatient_fraction=args.impatient,
    )
    eq = classify_equilibria(model)
    print(f"wait_payoff(f={args.impatient:g}) {wait_payoff(model, args.impatient):.4f}")
    print(f"run_payoff {run_payoff(model):.4f}")
    print(f"no_run_exists {str(eq['no_run_exists']).lower()}")
    print(f"run_exists {str(eq['run_exists']).lower()}")
    return 0


def _cmd_rail(args) -> int:
    config = load_config(args.config, seed=args.seed)
    prices, _, redemptions = generate_synthetic_scenario(config.synthetic_spec)
    dev = compute_deviation(prices)
    start, demand = redemption_minute_trace(
        redemptions, dev, config.worst_hour_share, config.eps_bps
    )
    side = config.rail_hybrid if args.mode == "hybrid" else config.rail_baseline
    trace = run_rail(side.build(config.portfolio), demand, start)
    print(json.dumps({"mode": args.mode, **summary_dict(trace.summary)}, indent=2))
    if args.trace_out:
        write_trace_csv(args.trace_out, trace)
        print(f"wrote {args.trace_out}", file=sys.stderr)
    return 0


def _cmd_synth(args) -> int:
    import os

    config = load_config(args.config, seed=args.seed)
    prices, volumes, redemptions = generate_synthetic_scenario(config.synthetic_spec)
    os.makedirs(args.out_dir, exist_ok=True)
    price_path = os.path.join(args.out_dir, "prices.csv")
    red_path = os.path.join(args.out_dir, "redemptions.csv")
    write_price_csv(price_path, prices, volumes)
    write_redemption_csv(red_path, redemptions)
    print(f"wrote {price_path}")
    print(f"wrote {red_path}")
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="pegstress", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"pegstress {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    p = sub.add_parser("run", help="full baseline-vs-hybrid pipeline")
    p.add_argument("--config", default="paper_defaults", help=f"preset {PRESET_NAMES} or JSON path")
    p.add_argument("--synthetic", action="store_true", help="force the synthetic data source")
    p.add_argument("--seed", type=int, default=None, help="override the synthetic seed")
    p.add_argument("--out-dir", default=None)
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("ingest-check", help="validate CSV inputs")
    p.add_argument("--prices")
    p.add_argument("--redemptions")
    _add_policy_flags(p)
    p.set_defaults(func=_cmd_ingest_check)

    p = sub.add_parser("funding", help="coverage ratios from flags")
    p.add_argument("--float", dest="float_usd", type=float, required=True)
    p.add_argument("--cash", type=float, required=True, help="cash share of float")
    p.add_argument("--tbill", type=float, required=True, help="T-bill share of float")
    p.add_argument("--repo", type=float, default=0.0)
    p.add_argument("--alpha-c", type=float, default=1.0, help="worst-hour cash access factor")
    p.add_argument("--haircut", type=float, default=0.0, help="1h T-bill haircut")
    p.add_argument("--cap", type=float, default=0.0, help="standing line cap, USD")
    p.add_argument("--repo-24h", action="store_true", help="count repos at 24h")
    p.add_argument("--q24", type=float, required=True, help="24h outflow quantile, USD")
    p.add_argument("--p", type=float, default=0.99)
    p.add_argument("--phi", type=float, default=0.75, help="worst-hour share")
    p.set_defaults(func=_cmd_funding)

    p = sub.add_parser("peg", help="persistence metrics and the counterfactual")
    p.add_argument("--prices", required=True, help="timestamp,price,volume_usd CSV")
    p.add_argument("--rail-capacity", type=float, default=100e6)
    p.add_argument("--pass-through", type=float, default=0.5)
    p.add_argument("--vol-floor", type=float, default=5e6)
    p.add_argument("--min-scale", type=float, default=0.25)
    p.add_argument("--eps", type=float, default=5.0)
    p.add_argument("--gamma", type=float, default=10.0)
    p.add_argument("--alpha-grid", help="comma-separated pass-through grid")
    p.add_argument("--out-csv", help="write per-minute baseline/hybrid CSV here")
    _add_policy_flags(p)
    p.set_defaults(func=_cmd_peg)

    p = sub.add_parser("queue", help="Erlang-C desk analytics")
    p.add_argument("--lambda", dest="lam", type=float, required=True, help="arrivals/min")
    p.add_argument("--mu", type=float, required=True, help="service rate/min/server")
    p.add_argument("--servers", type=int, required=True)
    p.add_argument("--ticket", type=float, default=1e6)
    p.add_argument("--sla", type=float, default=60.0, help="SLA, seconds")
    p.add_argument("--simulate", type=int, default=0, metavar="ARRIVALS")
    p.add_argument("--seed", type=int, default=42)
    p.set_defaults(func=_cmd_queue)

    p = sub.add_parser("rundyn", help="run-equilibrium classification")
    p.add_argument("--theta", type=float, default=0.7, help="fire-sale value per $1")
    p.add_argument("--hold", type=float, default=1.0, help="hold-to-maturity value per $1")
    p.add_argument("--insured", type=float, default=0.0)
    p.add_argument("--impatient", type=float, default=0.0)
    p.set_defaults(func=_cmd_rundyn)

    p = sub.add_parser("rail", help="settlement-rail simulation of one side")
    p.add_argument("--mode", choices=["baseline", "hybrid"], default="baseline")
    p.add_argument("--config", default="paper_defaults")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--trace-out", help="write the per-minute trace CSV here")
    p.set_defaults(func=_cmd_rail)

    p = sub.add_parser("synth", help="emit the synthetic scenario CSVs")
    p.add_argument("--config", default="paper_defaults")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out-dir", default="out")
    p.set_defaults(func=_cmd_synth)

    return parser


def cli_main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(exc.parser.format_usage(), end="", file=sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help / --version print and exit 0
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(cli_main(sys.argv[1:]))


if __name__ == "__main__":
    main()
