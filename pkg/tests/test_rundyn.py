import math

import pytest

from pegstress.errors import ValidationError
from pegstress.rundyn import RunModel, classify_equilibria, run_payoff, wait_payoff


def test_wait_payoff_nobody_runs():
    m = RunModel(fire_sale_value=0.7)
    assert wait_payoff(m, 0.0) == 1.0


def test_wait_payoff_interior():
    # f=0.35, theta=0.7: half the assets are burned, payoff (1-0.5)/(0.65)
    m = RunModel(fire_sale_value=0.7)
    assert wait_payoff(m, 0.35) == pytest.approx(0.5 / 0.65)


def test_wait_payoff_exhaustion():
    # f >= theta wipes out the waiters entirely
    m = RunModel(fire_sale_value=0.5)
    assert wait_payoff(m, 0.5) == 0.0
    assert wait_payoff(m, 0.8) == 0.0


def test_wait_payoff_domain():
    m = RunModel()
    with pytest.raises(ValidationError):
        wait_payoff(m, 1.0)
    with pytest.raises(ValidationError):
        wait_payoff(m, -0.1)


def test_run_payoff_is_capped_recovery():
    assert run_payoff(RunModel(fire_sale_value=0.7)) == 0.7
    assert run_payoff(RunModel(fire_sale_value=1.0)) == 1.0


def test_both_equilibria_coexist_below_par():
    # classic fragility: patient waiting is fine, but a run sustains itself
    eq = classify_equilibria(RunModel(fire_sale_value=0.7))
    assert eq == {"no_run_exists": True, "run_exists": True}


def test_lossless_liquidation_kills_the_run():
    # theta = 1: runners gain nothing over waiting out the horizon
    eq = classify_equilibria(RunModel(fire_sale_value=1.0))
    assert eq["no_run_exists"]
    assert not eq["run_exists"]


def test_full_insurance_kills_the_run():
    eq = classify_equilibria(RunModel(fire_sale_value=0.6, insured_fraction=1.0))
    assert eq["no_run_exists"]
    assert not eq["run_exists"]
    # partial insurance does not
    eq = classify_equilibria(RunModel(fire_sale_value=0.6, insured_fraction=0.99))
    assert eq["run_exists"]


def test_impatient_demand_can_break_no_run():
    # enough forced early withdrawal erodes the waiters below par
    fragile = RunModel(fire_sale_value=0.6, impatient_fraction=0.5)
    assert wait_payoff(fragile, 0.5) < 1.0
    eq = classify_equilibria(fragile)
    assert not eq["no_run_exists"]
    # below par, any forced withdrawal dilutes waiters below 1 — only a
    # lossless liquidation (or a maturity premium) preserves the good
    # equilibrium under impatient demand
    calm = RunModel(fire_sale_value=1.0, impatient_fraction=0.01)
    assert classify_equilibria(calm)["no_run_exists"]


def test_premium_maturity_value():
    # hold value above par keeps waiting attractive under mild withdrawals
    m = RunModel(hold_to_maturity_value=1.2, fire_sale_value=0.8, impatient_fraction=0.2)
    assert wait_payoff(m, 0.2) == pytest.approx(1.2 * 0.75 / 0.8)
    assert classify_equilibria(m)["no_run_exists"]


def test_model_validation():
    with pytest.raises(ValidationError):
        RunModel(fire_sale_value=0.0)
    with pytest.raises(ValidationError):
        RunModel(fire_sale_value=1.2)  # above hold value
    with pytest.raises(ValidationError):
        RunModel(insured_fraction=-0.01)
    with pytest.raises(ValidationError):
        RunModel(impatient_fraction=1.0)
    # theta may equal the hold value exactly
    RunModel(hold_to_maturity_value=1.5, fire_sale_value=1.5)


def test_grid_monotone_in_theta():
    # the run equilibrium disappears exactly at theta = 1 and never
    # reappears; the no-run equilibrium only strengthens with theta
    thetas = [0.1 * k for k in range(1, 11)]
    run_flags = [classify_equilibria(RunModel(fire_sale_value=t))["run_exists"] for t in thetas]
    assert run_flags == [True] * 9 + [False]
    no_run = [classify_equilibria(RunModel(fire_sale_value=t))["no_run_exists"] for t in thetas]
    assert all(no_run)


def test_above_par_theta_never_sustains_a_run():
    m = RunModel(hold_to_maturity_value=2.0, fire_sale_value=1.5)
    # theta > 1: run payoff capped at par, waiting strictly dominates
    assert run_payoff(m) == 1.0
    assert not classify_equilibria(m)["run_exists"]
