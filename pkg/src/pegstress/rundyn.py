"""Stylized two-outcome run model: when does a self-fulfilling run
equilibrium coexist with the orderly no-run equilibrium?

The model is the minimal coordination game consistent with the classic
bank-run story. A $1 claim is worth hold_to_maturity_value if the issuer can
carry assets to maturity but only fire_sale_value (theta) per dollar when
liquidated early. The payoff functions below are an interpretation — the
simplest pro-rata / sequential-service formalization that reproduces the
standard narrative numbers ($1.00 for waiting in the good equilibrium, $0.70
expected when everyone runs at theta = 0.7, first movers paid at par).

- Waiting when a fraction f withdraws early: early payouts burn f/theta of
  assets, the remaining max(0, 1 - f/theta) matures and is shared by the
  (1 - f) waiters.
- Running when all uninsured run: liquidation proceeds cover a fraction
  theta of claims at par under sequential service (uniform-random queue
  position), so the expected payoff is theta; latecomers get nothing.
- Insured depositors receive $1 regardless and therefore never run.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ValidationError


@dataclass(frozen=True)
class RunModel:
    """Payoff primitives and depositor composition."""

    hold_to_maturity_value: float = 1.0
    fire_sale_value: float = 0.7
    insured_fraction: float = 0.0
    impatient_fraction: float = 0.0  # genuine early-liquidity need

    def __post_init__(self):
        if not (0.0 < self.fire_sale_value <= self.hold_to_maturity_value):
            raise ValidationError(
                "fire_sale_value must satisfy 0 < theta <= hold_to_maturity_value"
            )
        if not (0.0 <= self.insured_fraction <= 1.0):
            raise ValidationError("insured_fraction must be in [0, 1]")
        if not (0.0 <= self.impatient_fraction < 1.0):
            raise ValidationError("impatient_fraction must be in [0, 1)")


def wait_payoff(model: RunModel, f: float) -> float:
    """Payoff per $1 to an uninsured waiter when a fraction f withdraws early.

    Insured waiters always receive 1; this returns the uninsured payoff.
    """
    if not (0.0 <= f < 1.0):
        raise ValidationError("withdrawing fraction f must be in [0, 1)")
    theta = model.fire_sale_value
    remaining = max(0.0, 1.0 - f / theta)
    return remaining * model.hold_to_maturity_value / (1.0 - f)


def run_payoff(model: RunModel) -> float:
    """Expected payoff per $1 to an uninsured runner when all uninsured run.

    Sequential service at par until liquidation proceeds run out: a fraction
    theta of runners collect 1, the rest collect 0, so the expectation is
    theta (capped at 1 when liquidation is lossless).
    """
    return min(model.fire_sale_value, 1.0)


def _wait_payoff_all_run(model: RunModel) -> float:
    """Limit of wait_payoff as f -> 1 (everyone else runs).

    Below-par liquidation exhausts assets before maturity (payoff 0); at
    theta exactly 1 the waiter still collects the maturity value; above-par
    liquidation would leave a vanishing waiter an unbounded claim.
    """
    if model.fire_sale_value < 1.0:
        return 0.0
    if model.fire_sale_value == 1.0:
        return model.hold_to_maturity_value
    return math.inf


def classify_equilibria(model: RunModel) -> dict[str, bool]:
    """Which pure outcomes are self-consistent equilibria.

    no_run_exists: waiting is (weakly) worth par when only the genuinely
        impatient withdraw.
    run_exists: running beats waiting when everyone else runs, and some
        depositor is actually exposed (insured_fraction < 1).
    """
    no_run = wait_payoff(model, model.impatient_fraction) >= 1.0
    run = run_payoff(model) > _wait_payoff_all_run(model) and model.insured_fraction < 1.0
    return {"no_run_exists": no_run, "run_exists": run}
