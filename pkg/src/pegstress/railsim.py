"""Minute-stepped reserve/rail engine: cash bucket, standing collateralized
T-bill line, outright T+1 sales, and RTGS-window timing under a redemption
demand trace.

All balances are integer cents internally, so value conservation is exact.

Within a minute the engine applies a fixed, documented order:

1. If the RTGS window is open, credit matured settlement inflows (due at or
   before this minute) and repay the line portion they carry; then apply the
   prefund top-up once per business morning (first open minute of a weekday).
2. Serve the queued backlog FIFO from cash, then this minute's new demand.
3. If the window is open, draw on the standing line for any remainder:
   the draw settles customers immediately, pledges T-bills grossed up by the
   haircut, and schedules the pledged bills' unwind (sale at the settlement
   lag; proceeds repay the draw, the haircut residual returns to cash).
4. Sell T-bills outright for any remainder not already covered by
   in-flight settlement inflows; proceeds arrive after the settlement lag.
5. Whatever demand is still unserved joins the FIFO queue.

Customers always settle at exactly par — haircuts apply to collateral
capacity, never to redemptions. Cash is always available for redemptions;
RTGS windows gate only line draws and the crediting of settlement inflows.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError
from .funding import ReservePortfolio

MINUTES_PER_DAY = 1440

# (open, close) day-relative minute windows, half-open.
FULL_DAY_SCHEDULE = ((0, MINUTES_PER_DAY),)
BUSINESS_HOURS_SCHEDULE = ((510, 1020),)  # 08:30-17:00 UTC


def _to_cents(usd: float, what: str) -> int:
    if not math.isfinite(usd):
        raise ValidationError(f"{what} must be finite")
    return round(usd * 100)


@dataclass(frozen=True)
class RailConfig:
    """Static description of one rail scenario.

    standing_line_cap_usd: intraday line size; 0 disables the line (the
        legacy baseline). Never exceeds the T-bill stock.
    tbill_settlement_lag_minutes: delay before sale/unwind proceeds arrive.
    rtgs_schedule: daily (open, close) minute windows during which the
        interbank legs move — line draws, maturing proceeds, and top-ups all
        require an open window. Redemption payouts from the cash buffer are
        not gated: tokens burn around the clock.
    prefund_topup_usd: cash added at the first open minute of each business
        day (Monday-Friday).
    """

    portfolio: ReservePortfolio
    standing_line_cap_usd: float = 0.0
    tbill_settlement_lag_minutes: int = MINUTES_PER_DAY
    rtgs_schedule: tuple = FULL_DAY_SCHEDULE
    prefund_topup_usd: float = 0.0

    def __post_init__(self):
        object.__setattr__(
            self, "rtgs_schedule", tuple((int(a), int(b)) for a, b in self.rtgs_schedule)
        )
        if self.standing_line_cap_usd < 0:
            raise ValidationError("standing_line_cap_usd must be >= 0")
        if self.standing_line_cap_usd > self.portfolio.tbills_usd * (1 + 1e-9):
            raise ValidationError("standing line cap exceeds the T-bill stock")
        if self.tbill_settlement_lag_minutes < 0:
            raise ValidationError("settlement lag must be >= 0")
        if self.prefund_topup_usd < 0:
            raise ValidationError("prefund_topup_usd must be >= 0")
        if not self.rtgs_schedule:
            raise ValidationError("rtgs_schedule must contain at least one window")
        last_close = 0
        for open_min, close_min in self.rtgs_schedule:
            if not (0 <= open_min < close_min <= MINUTES_PER_DAY):
                raise ValidationError(f"bad RTGS window ({open_min}, {close_min})")
            if open_min < last_close:
                raise ValidationError("RTGS windows must be sorted and non-overlapping")
            last_close = close_min

    def window_open(self, minute: int) -> bool:
        mod = minute % MINUTES_PER_DAY
        return any(a <= mod < b for a, b in self.rtgs_schedule)


@dataclass(frozen=True)
class PendingSettlement:
    """A scheduled future cash inflow (T+1 sale or line unwind)."""

    due_minute: int
    cash_in_cents: int
    line_repay_cents: int  # portion of the inflow that retires line_drawn

    @property
    def net_inflow_cents(self) -> int:
        return self.cash_in_cents - self.line_repay_cents


@dataclass(frozen=True)
class QueueEntry:
    enqueue_minute: int
    cents: int


@dataclass(frozen=True)
class RailState:
    """Snapshot of the engine between minutes."""

    minute: int
    cash_cents: int
    tbills_cents: int
    line_drawn_cents: int = 0
    pending: tuple = ()
    queue: tuple = ()
    last_topup_day: int = -1

    @property
    def queue_cents(self) -> int:
        return sum(e.cents for e in self.queue)

    @property
    def pending_net_cents(self) -> int:
        return sum(p.net_inflow_cents for p in self.pending)


@dataclass(frozen=True)
class MinuteRecord:
    minute: int
    demand_cents: int
    settled_cents: int
    queued_cents: int  # end-of-minute queue total
    cash_cents: int
    line_drawn_cents: int
    max_wait_served_minutes: int  # longest wait completed this minute, -1 if none


def initial_state(config: RailConfig, start_minute: int = 0) -> RailState:
    """Fresh state: cash and T-bill buckets at their portfolio values.

    Repos are outside the rail engine — they are neither settlement cash nor
    eligible line collateral here.
    """
    return RailState(
        minute=start_minute,
        cash_cents=_to_cents(config.portfolio.cash_usd, "cash"),
        tbills_cents=_to_cents(config.portfolio.tbills_usd, "tbills"),
    )


def _weekday(minute: int) -> int:
    # epoch day 0 (1970-01-01) was a Thursday; 0 = Monday.
    return (minute // MINUTES_PER_DAY + 3) % 7


def step(state: RailState, config: RailConfig, demand_usd: float) -> tuple[RailState, MinuteRecord]:
    """Advance one minute under the documented priority order."""
    demand = _to_cents(demand_usd, "demand")
    if demand < 0:
        raise ValidationError(f"demand must be >= 0, got {demand_usd}")

    minute = state.minute
    cash = state.cash_cents
    tbills = state.tbills_cents
    line_drawn = state.line_drawn_cents
    pending = list(state.pending)
    queue = list(state.queue)
    last_topup_day = state.last_topup_day
    open_now = config.window_open(minute)

    # 1. matured inflows and the business-morning top-up (need an open window)
    if open_now:
        still_pending = []
        for p in pending:
            if p.due_minute <= minute:
                cash += p.cash_in_cents - p.line_repay_cents
                line_drawn -= p.line_repay_cents
            else:
                still_pending.append(p)
        pending = still_pending
        day = minute // MINUTES_PER_DAY
        if config.prefund_topup_usd > 0 and _weekday(minute) < 5 and day > last_topup_day:
            cash += _to_cents(config.prefund_topup_usd, "prefund_topup")
            last_topup_day = day

    settled = 0
    max_wait_served = -1
    new_remaining = demand
    queue_total = sum(e.cents for e in queue)

    def serve_from_cash():
        nonlocal cash, settled, new_remaining, max_wait_served, queue_total
        while queue and cash > 0:
            entry = queue[0]
            paid = min(entry.cents, cash)
            cash -= paid
            settled += paid
            queue_total -= paid
            max_wait_served = max(max_wait_served, minute - entry.enqueue_minute)
            if paid == entry.cents:
                queue.pop(0)
            else:
                queue[0] = QueueEntry(entry.enqueue_minute, entry.cents - paid)
        paid = min(new_remaining, cash)
        if paid:
            cash -= paid
            settled += paid
            new_remaining -= paid
            max_wait_served = max(max_wait_served, 0)

    # 2. backlog first, then new demand, from cash
    serve_from_cash()

    # 3. standing line draw for the remainder (window + cap + collateral bound)
    need = queue_total + new_remaining
    cap_cents = _to_cents(config.standing_line_cap_usd, "cap")
    if need > 0 and open_now and line_drawn < cap_cents:
        margin = 1.0 - config.portfolio.tbill_haircut_1h
        if margin > 0:
            collateral_room = math.floor(tbills * margin)
            draw = min(need, cap_cents - line_drawn, collateral_room)
            if draw > 0:
                pledge = math.ceil(draw / margin)
                if pledge > tbills:  # float-rounding guard
                    pledge = tbills
                    draw = min(draw, math.floor(pledge * margin))
                if draw > 0:
                    tbills -= pledge
                    line_drawn += draw
                    cash += draw
                    pending.append(
                        PendingSettlement(
                            minute + config.tbill_settlement_lag_minutes, pledge, draw
                        )
                    )
                    serve_from_cash()

    # 4. outright sales for whatever in-flight inflows will not already cover
    shortfall = queue_total + new_remaining
    if shortfall > 0 and tbills > 0:
        inflight = sum(p.net_inflow_cents for p in pending)
        sale = min(max(0, shortfall - inflight), tbills)
        if sale > 0:
            tbills -= sale
            pending.append(
                PendingSettlement(minute + config.tbill_settlement_lag_minutes, sale, 0)
            )

    # 5. unserved new demand joins the queue
    if new_remaining > 0:
        queue.append(QueueEntry(minute, new_remaining))
        queue_total += new_remaining

    record = MinuteRecord(
        minute=minute,
        demand_cents=demand,
        settled_cents=settled,
        queued_cents=queue_total,
        cash_cents=cash,
        line_drawn_cents=line_drawn,
        max_wait_served_minutes=max_wait_served,
    )
    new_state = RailState(
        minute=minute + 1,
        cash_cents=cash,
        tbills_cents=tbills,
        line_drawn_cents=line_drawn,
        pending=tuple(pending),
        queue=tuple(queue),
        last_topup_day=last_topup_day,
    )
    return new_state, record


@dataclass(frozen=True)
class RailRunSummary:
    """Run-level outcome measures, all in USD / minutes."""

    max_queue_usd: float
    total_queued_minutes: int  # minutes ending with a nonempty queue
    shortfall_event_count: int  # minutes whose queue grew (demand went unserved)
    max_customer_wait_minutes: int
    queue_remaining_usd: float  # unserved demand at the horizon (wait censored)
    settled_total_usd: float
    topups_usd: float
    peak_line_drawn_usd: float
    initial_assets_usd: float
    final_assets_usd: float  # cash + tbills + net pending inflows


@dataclass(frozen=True)
class RailTrace:
    """Per-minute trace plus summary; arrays are index-aligned to the grid."""

    start_minute: int
    demand_cents: np.ndarray = field(repr=False)
    settled_cents: np.ndarray = field(repr=False)
    queued_cents: np.ndarray = field(repr=False)
    cash_cents: np.ndarray = field(repr=False)
    line_drawn_cents: np.ndarray = field(repr=False)
    summary: RailRunSummary = None

    def __len__(self) -> int:
        return len(self.demand_cents)


def run_rail(
    config: RailConfig, demand_usd_per_minute, start_minute: int = 0
) -> RailTrace:
    """Fold the one-minute step over a demand trace. Deterministic.

    The conservation identity

        initial assets + top-ups - settled == cash + tbills + net pending

    is re-checked in cents at the end of every run; a violation is an engine
    bug, not an input error.
    """
    demand = np.asarray(demand_usd_per_minute, dtype=np.float64)
    if demand.ndim != 1 or len(demand) == 0:
        raise ValidationError("demand trace must be a nonempty 1-d array")

    state = initial_state(config, start_minute)
    initial_assets = state.cash_cents + state.tbills_cents
    topup_cents_unit = _to_cents(config.prefund_topup_usd, "prefund_topup")
    n = len(demand)
    out_demand = np.empty(n, dtype=np.int64)
    out_settled = np.empty(n, dtype=np.int64)
    out_queued = np.empty(n, dtype=np.int64)
    out_cash = np.empty(n, dtype=np.int64)
    out_line = np.empty(n, dtype=np.int64)

    max_wait = 0
    topup_count = 0
    prev_queue = 0
    shortfalls = 0
    for i in range(n):
        before_day = state.last_topup_day
        state, rec = step(state, config, float(demand[i]))
        if state.last_topup_day != before_day:
            topup_count += 1
        out_demand[i] = rec.demand_cents
        out_settled[i] = rec.settled_cents
        out_queued[i] = rec.queued_cents
        out_cash[i] = rec.cash_cents
        out_line[i] = rec.line_drawn_cents
        max_wait = max(max_wait, rec.max_wait_served_minutes)
        if rec.queued_cents > prev_queue:
            shortfalls += 1
        prev_queue = rec.queued_cents

    last_minute = start_minute + n - 1
    for entry in state.queue:  # censored residence of still-queued demand
        max_wait = max(max_wait, last_minute - entry.enqueue_minute)

    settled_total = int(out_settled.sum())
    topups = topup_count * topup_cents_unit
    final_assets = state.cash_cents + state.tbills_cents + state.pending_net_cents
    if initial_assets + topups - settled_total != final_assets:
        raise RuntimeError(
            "conservation violated: "
            f"{initial_assets} + {topups} - {settled_total} != {final_assets}"
        )

    summary = RailRunSummary(
        max_queue_usd=int(out_queued.max()) / 100,
        total_queued_minutes=int((out_queued > 0).sum()),
        shortfall_event_count=shortfalls,
        max_customer_wait_minutes=max_wait,
        queue_remaining_usd=state.queue_cents / 100,
        settled_total_usd=settled_total / 100,
        topups_usd=topups / 100,
        peak_line_drawn_usd=int(out_line.max()) / 100,
        initial_assets_usd=initial_assets / 100,
        final_assets_usd=final_assets / 100,
    )
    return RailTrace(
        start_minute=start_minute,
        demand_cents=out_demand,
        settled_cents=out_settled,
        queued_cents=out_queued,
        cash_cents=out_cash,
        line_drawn_cents=out_line,
        summary=summary,
    )


def full_reserve_check(config: RailConfig) -> bool:
    """True iff the configured portfolio backs the float 100% in safe assets."""
    return reserve_gap(config) <= 1e-9


def reserve_gap(config: RailConfig) -> float:
    """How far the reserve shares fall short of 100% (0 when fully backed)."""
    p = config.portfolio
    return max(0.0, 1.0 - (p.cash_share + p.tbill_share + p.repo_share))


def write_trace_csv(path, trace: RailTrace) -> None:
    """Per-minute rail trace: minute, demand, settled, queued, cash, line_drawn."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["minute", "demand", "settled", "queued", "cash", "line_drawn"])
        for i in range(len(trace)):
            writer.writerow(
                [
                    trace.start_minute + i,
                    f"{trace.demand_cents[i] / 100:.2f}",
                    f"{trace.settled_cents[i] / 100:.2f}",
                    f"{trace.queued_cents[i] / 100:.2f}",
                    f"{trace.cash_cents[i] / 100:.2f}",
                    f"{trace.line_drawn_cents[i] / 100:.2f}",
                ]
            )


def summary_dict(summary: RailRunSummary) -> dict:
    """JSON-ready view of a run summary."""
    return {
        "max_queue_usd": summary.max_queue_usd,
        "total_queued_minutes": summary.total_queued_minutes,
        "shortfall_event_count": summary.shortfall_event_count,
        "max_customer_wait_minutes": summary.max_customer_wait_minutes,
        "queue_remaining_usd": summary.queue_remaining_usd,
        "settled_total_usd": summary.settled_total_usd,
        "topups_usd": summary.topups_usd,
        "peak_line_drawn_usd": summary.peak_line_drawn_usd,
        "initial_assets_usd": summary.initial_assets_usd,
        "final_assets_usd": summary.final_assets_usd,
    }
