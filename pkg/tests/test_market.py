import numpy as np
import pytest

from holorisk.errors import SimulationDivergedError, ValidationError
from holorisk.market import (
    MarketConfig,
    calm_config,
    config_from_dict,
    config_to_dict,
    prices_to_csv,
    result_to_dict,
    run_market_sim,
    run_seed_sweep,
    stress_config,
)


def test_calm_config_returns_identically_zero():
    result = run_market_sim(calm_config())
    assert np.all(result.log_returns == 0.0)
    assert np.all(result.prices == 100.0)
    assert result.meltdown_count == 0


def test_calm_below_fundamental_reverts_upward():
    # price moves on order flow, so the correction is a one-time partial
    # reversion that settles once positions reach target, not a walk to V
    result = run_market_sim(calm_config(p0=50.0))
    assert result.prices[0] == 50.0  # anchor is exact, not exp(log(p0))
    assert result.log_returns[0] > 0.0
    assert 50.0 < result.prices[-1] < 100.0
    assert abs(result.log_returns[-1]) < 1e-9  # settled


def test_same_seed_is_bit_identical():
    a = run_market_sim(stress_config(3, steps=2000))
    b = run_market_sim(stress_config(3, steps=2000))
    assert np.array_equal(a.prices, b.prices)
    assert np.array_equal(a.log_returns, b.log_returns)
    assert np.array_equal(a.agent_wealth, b.agent_wealth)
    assert a.meltdown_events == b.meltdown_events


def test_different_seeds_differ():
    a = run_market_sim(stress_config(0, steps=2000))
    b = run_market_sim(stress_config(1, steps=2000))
    assert not np.array_equal(a.prices, b.prices)


def test_series_lengths_and_positivity():
    result = run_market_sim(stress_config(0, steps=3000))
    assert result.prices.shape == (3001,)
    assert result.log_returns.shape == (3000,)
    assert result.agent_wealth.shape == (3001,)
    assert np.all(result.prices > 0.0)
    assert np.all(np.isfinite(result.log_returns))
    assert np.all(result.agent_wealth > 0.0)


def test_meltdown_events_match_threshold():
    result = run_market_sim(stress_config(0))
    thr = result.config.meltdown_threshold
    expected = np.nonzero(result.log_returns < thr)[0].tolist()
    assert result.meltdown_events == expected
    assert result.meltdown_count == len(expected)


def test_meltdown_count_monotone_in_threshold():
    loose = run_market_sim(stress_config(0, meltdown_threshold=-0.05))
    tight = run_market_sim(stress_config(0))
    assert loose.meltdown_count >= tight.meltdown_count
    assert loose.meltdown_count > 0


def test_leverage_cap_suppresses_meltdowns():
    capped = run_market_sim(stress_config(0, max_leverage=2.0))
    free = run_market_sim(stress_config(0))
    assert capped.meltdown_count == 0
    assert free.meltdown_count > 100


def test_drawdown_severity_grows_with_leverage():
    """Median worst single-step drop across 20 seeds, per leverage cap."""
    seeds = list(range(20))
    medians = []
    for lev in (2.0, 5.0, 8.0):
        runs = run_seed_sweep(stress_config(0, max_leverage=lev), seeds)
        medians.append(float(np.median([-r.log_returns.min() for r in runs])))
    assert medians[0] < medians[1] < medians[2]
    assert medians[1] > 3.0 * medians[0]


def test_divergence_raises_with_step():
    with pytest.raises(SimulationDivergedError) as exc:
        run_market_sim(stress_config(0, liquidity=1.0, steps=500))
    assert exc.value.code == "SIM_DIVERGED"
    assert exc.value.step >= 0


def test_config_validation():
    with pytest.raises(ValidationError):
        MarketConfig(n_fundamentalists=-1)
    with pytest.raises(ValidationError):
        MarketConfig(n_fundamentalists=0, n_chartists=0)
    with pytest.raises(ValidationError):
        MarketConfig(liquidity=0.0)
    with pytest.raises(ValidationError):
        MarketConfig(steps=0)
    with pytest.raises(ValidationError):
        MarketConfig(p0=-5.0)


def test_config_round_trip():
    config = stress_config(9, max_leverage=3.5, steps=123)
    assert config_from_dict(config_to_dict(config)) == config


def test_config_from_dict_rejects_unknown_key():
    with pytest.raises(ValidationError) as exc:
        config_from_dict({"seed": 1, "leverage": 2.0})
    assert "leverage" in str(exc.value)


def test_result_to_dict_series_toggle():
    result = run_market_sim(calm_config(steps=50))
    full = result_to_dict(result)
    slim = result_to_dict(result, include_series=False)
    assert len(full["prices"]) == 51
    assert "prices" not in slim
    assert slim["meltdown_count"] == 0
    assert slim["final_price"] == 100.0
    assert slim["n_steps"] == 50


def test_prices_csv_format():
    result = run_market_sim(stress_config(0, steps=5))
    lines = prices_to_csv(result).strip().split("\n")
    assert lines[0] == "step,price,log_return"
    assert len(lines) == 7
    first = lines[1].split(",")
    assert first[0] == "0" and first[2] == ""
    k, price, ret = lines[2].split(",")
    assert float(price) == result.prices[1]
    assert float(ret) == result.log_returns[0]


def test_seed_sweep_matches_individual_runs():
    sweep = run_seed_sweep(stress_config(0, steps=500), [4, 7])
    solo = run_market_sim(stress_config(4, steps=500))
    assert np.array_equal(sweep[0].prices, solo.prices)
    assert sweep[1].config.seed == 7
