"""Heterogeneous-agent market simulation with emergent fat tails.

Two populations trade one asset. Fundamentalists target a position
proportional to mispricing versus a fixed fundamental value. Chartists
target a position proportional to the recent log-price trend, but only
once that trend exceeds a per-agent entry threshold; below a fraction of
that threshold they unwind gradually. Every position is capped by a risk
budget of max_leverage times committed capital, where committed capital
is current wealth truncated at its initial level: losses shrink the cap
(forced deleveraging) while gains never raise it.

Price moves multiplicatively with net order flow divided by liquidity,
so it stays positive. The interplay of threshold entry, herd-amplified
trends, and wealth-driven deleveraging produces long calm stretches
punctuated by abrupt crashes, i.e. fat-tailed log returns - none of
which is written into any single agent's rule.

All randomness comes from numpy's default generator (PCG64) seeded from
the config, so runs are bit-reproducible. Draw order: fundamentalist
sensitivities, chartist sensitivities, chartist entry thresholds, then
the full per-step noise matrix.
"""

from __future__ import annotations

import io
from dataclasses import asdict, dataclass, fields

import numpy as np

from .errors import SimulationDivergedError, ValidationError

# A single-step move beyond this many log units is treated as numerical
# blow-up rather than a market event.
DIVERGENCE_LIMIT = 5.0


@dataclass(frozen=True)
class MarketConfig:
    n_fundamentalists: int = 20
    n_chartists: int = 80
    fundamental_value: float = 100.0
    chartist_memory: int = 5
    noise_scale: float = 1.0
    liquidity: float = 2500.0
    max_leverage: float = 5.0
    steps: int = 10_000
    seed: int = 0
    meltdown_threshold: float = -0.1
    p0: float | None = None
    # model constants; exposed for what-if experiments
    fundamentalist_gain: float = 15.0
    chartist_gain: float = 1500.0
    initial_wealth: float = 1.0
    wealth_floor: float = 0.02
    wealth_recovery: float = 0.002
    entry_threshold_low: float = 0.004
    entry_threshold_high: float = 0.03
    exit_threshold_frac: float = 0.3
    unwind_rate: float = 0.7

    def __post_init__(self):
        if self.n_fundamentalists < 0 or self.n_chartists < 0:
            raise ValidationError("agent counts must be >= 0", detail="n_fundamentalists/n_chartists")
        if self.n_fundamentalists + self.n_chartists < 1:
            raise ValidationError("need at least one agent", detail="n_fundamentalists/n_chartists")
        if self.fundamental_value <= 0:
            raise ValidationError("fundamental_value must be > 0", detail="fundamental_value")
        if self.chartist_memory < 1:
            raise ValidationError("chartist_memory must be >= 1", detail="chartist_memory")
        if self.noise_scale < 0:
            raise ValidationError("noise_scale must be >= 0", detail="noise_scale")
        if self.liquidity <= 0:
            raise ValidationError("liquidity must be > 0", detail="liquidity")
        if self.max_leverage <= 0:
            raise ValidationError("max_leverage must be > 0", detail="max_leverage")
        if self.steps < 1:
            raise ValidationError("steps must be >= 1", detail="steps")
        if self.p0 is not None and self.p0 <= 0:
            raise ValidationError("p0 must be > 0", detail="p0")
        if not (0 < self.entry_threshold_low <= self.entry_threshold_high):
            raise ValidationError("need 0 < entry_threshold_low <= entry_threshold_high",
                                  detail="entry_threshold_low/entry_threshold_high")
        if not (0.0 <= self.exit_threshold_frac <= 1.0):
            raise ValidationError("exit_threshold_frac must be in [0, 1]", detail="exit_threshold_frac")
        if not (0.0 <= self.unwind_rate <= 1.0):
            raise ValidationError("unwind_rate must be in [0, 1]", detail="unwind_rate")
        if self.initial_wealth <= 0 or self.wealth_floor <= 0:
            raise ValidationError("wealth parameters must be > 0", detail="initial_wealth/wealth_floor")


@dataclass(frozen=True)
class MarketSimResult:
    prices: np.ndarray          # length steps + 1, all > 0
    log_returns: np.ndarray     # length steps
    agent_wealth: np.ndarray    # aggregate wealth per step, length steps + 1
    meltdown_events: list[int]  # indices i where log_returns[i] < threshold
    config: MarketConfig

    @property
    def meltdown_count(self) -> int:
        return len(self.meltdown_events)


def stress_config(seed: int = 0, **overrides) -> MarketConfig:
    """Chartist-dominated preset that exhibits fat tails and meltdowns."""
    return MarketConfig(seed=seed, **overrides)


def calm_config(seed: int = 0, **overrides) -> MarketConfig:
    """No chartists, no noise, price at fundamental: returns stay zero."""
    defaults = dict(n_chartists=0, noise_scale=0.0, steps=1000)
    defaults.update(overrides)
    return MarketConfig(seed=seed, **defaults)


def run_market_sim(config: MarketConfig) -> MarketSimResult:
    """Run the simulation; deterministic for a given config and seed."""
    c = config
    rng = np.random.default_rng(c.seed)
    n_f, n_c = c.n_fundamentalists, c.n_chartists
    n = n_f + n_c
    v = c.fundamental_value
    p_start = v if c.p0 is None else c.p0

    f_sens = c.fundamentalist_gain * rng.uniform(0.5, 1.5, n_f)
    c_sens = c.chartist_gain * rng.uniform(0.5, 1.5, n_c)
    # log-uniform entry thresholds: dense near the noise floor so
    # cascades can ignite, sparse higher up so full stampedes are rare
    u = rng.uniform(0.0, 1.0, n_c)
    thresh = c.entry_threshold_low * (c.entry_threshold_high / c.entry_threshold_low) ** u
    noise = c.noise_scale * rng.standard_normal((c.steps, n))

    w = np.full(n, c.initial_wealth)
    shares = np.zeros(n)
    active = np.zeros(n_c, dtype=bool)
    logp = np.empty(c.steps + 1)
    logp[0] = np.log(p_start)
    wealth_agg = np.empty(c.steps + 1)
    wealth_agg[0] = w.sum()
    m = c.chartist_memory
    lev = c.max_leverage
    w0 = c.initial_wealth

    for t in range(c.steps):
        p_t = np.exp(logp[t])
        mispricing = (v - p_t) / v
        trend = (logp[t] - logp[t - m]) / m if t >= m else 0.0

        v_target = np.empty(n)
        v_target[:n_f] = f_sens * mispricing
        a = abs(trend)
        active = (active | (a >= thresh)) & (a >= c.exit_threshold_frac * thresh)
        v_target[n_f:] = np.where(active, c_sens * trend, c.unwind_rate * shares[n_f:] * p_t)
        v_target += noise[t]

        cap = lev * np.minimum(w, w0)  # losses shrink the risk budget, gains never raise it
        s_new = np.clip(v_target, -cap, cap) / p_t
        r = p_t * (s_new - shares).sum() / c.liquidity
        if not np.isfinite(r) or abs(r) > DIVERGENCE_LIMIT:
            raise SimulationDivergedError(
                f"log return {r!r} at step {t} exceeds divergence limit", step=t
            )
        logp[t + 1] = logp[t] + r
        p_new = np.exp(logp[t + 1])
        w = w + s_new * (p_new - p_t)
        np.maximum(w, c.wealth_floor, out=w)
        w += c.wealth_recovery * (w0 - w)
        shares = s_new
        wealth_agg[t + 1] = w.sum()

    # anchor on p_start so a zero-return run reproduces it exactly
    prices = p_start * np.exp(logp - logp[0])
    log_returns = np.diff(logp)
    events = np.nonzero(log_returns < c.meltdown_threshold)[0].tolist()
    return MarketSimResult(prices, log_returns, wealth_agg, events, config=c)


def run_seed_sweep(config: MarketConfig, seeds: list[int]) -> list[MarketSimResult]:
    """Independent runs of the same config across seeds."""
    from dataclasses import replace

    return [run_market_sim(replace(config, seed=s)) for s in seeds]


# ---------------------------------------------------------------------------
# serialization

def config_to_dict(config: MarketConfig) -> dict:
    return asdict(config)


def config_from_dict(d: dict) -> MarketConfig:
    valid = {f.name for f in fields(MarketConfig)}
    unknown = set(d) - valid
    if unknown:
        raise ValidationError(f"unknown market parameter: {sorted(unknown)[0]}",
                              detail=sorted(unknown)[0])
    return MarketConfig(**d)


def result_to_dict(result: MarketSimResult, include_series: bool = True) -> dict:
    d = {
        "meltdown_count": result.meltdown_count,
        "meltdown_events": result.meltdown_events,
        "final_price": float(result.prices[-1]),
        "n_steps": int(result.log_returns.size),
        "config": config_to_dict(result.config),
    }
    if include_series:
        d["prices"] = result.prices.tolist()
        d["log_returns"] = result.log_returns.tolist()
        d["agent_wealth"] = result.agent_wealth.tolist()
    return d


def prices_to_csv(result: MarketSimResult) -> str:
    buf = io.StringIO()
    buf.write("step,price,log_return\n")
    buf.write(f"0,{float(result.prices[0])!r},\n")
    for k in range(1, result.prices.size):
        buf.write(f"{k},{float(result.prices[k])!r},{float(result.log_returns[k - 1])!r}\n")
    return buf.getvalue()
