"""Scenario persistence and the what-if engine.

Scenarios are named, kind-tagged parameter records persisted as one JSON
file per id in a store directory (write-temp-then-rename, so readers
never observe partial files). Runs dispatch to the owning module and
reduce each result to a small scalar summary whose primary metric
drives what-if verdicts and countermeasure rankings:

    LOGISTIC        -> lyapunov_exponent
    MARKET          -> meltdown_count (excess_kurtosis also reported)
    COMPLEXITY      -> score
    LOTKA_VOLTERRA  -> prey_amplitude (peak-to-peak)

Higher primary metric = higher risk for every kind.
"""

from __future__ import annotations

import json
import os
import statistics
import tempfile
import uuid
from dataclasses import dataclass, fields, replace
from datetime import datetime, timezone
from pathlib import Path

from scipy import stats

from . import dynamics, market, metrics
from .errors import HoloriskError, NotFoundError, SimulationDivergedError, ValidationError

KINDS = ("LOGISTIC", "LOTKA_VOLTERRA", "MARKET", "COMPLEXITY")

PRIMARY_METRIC = {
    "LOGISTIC": "lyapunov_exponent",
    "LOTKA_VOLTERRA": "prey_amplitude",
    "MARKET": "meltdown_count",
    "COMPLEXITY": "score",
}

VERDICT_DEAD_BAND = 1e-9

DEFAULT_STORE = "holorisk_scenarios"
STORE_ENV_VAR = "HOLORISK_STORE"

# occupancy grid resolution attached to dynamics run payloads
PAYLOAD_OCCUPANCY_BINS = 32

# optional keys merged in before constructing typed params
_KIND_DEFAULTS = {
    "LOGISTIC": {"x0": 0.2},
    "COMPLEXITY": {"edge_threshold": metrics.DEFAULT_EDGE_THRESHOLD, "mode": "levels"},
}

_COMPLEXITY_KEYS = {"csv_path", "edge_threshold", "mode"}


@dataclass(frozen=True)
class ScenarioDefinition:
    id: str
    name: str
    kind: str
    config: dict
    created_at: str
    version: int = 1

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "name": self.name,
            "kind": self.kind,
            "config": self.config,
            "created_at": self.created_at,
            "version": self.version,
        }


@dataclass(frozen=True)
class ScenarioRunResult:
    scenario_id: str
    kind: str
    summary: dict
    payload: dict

    def to_dict(self) -> dict:
        return {
            "scenario_id": self.scenario_id,
            "kind": self.kind,
            "summary": self.summary,
            "payload": self.payload,
        }


@dataclass(frozen=True)
class WhatIfResult:
    scenario_id: str
    primary_metric: str
    baseline_summary: dict
    variant_summary: dict
    deltas: dict
    verdict: str  # RISK_UP | RISK_DOWN | NEUTRAL

    def to_dict(self) -> dict:
        return {
            "scenario_id": self.scenario_id,
            "primary_metric": self.primary_metric,
            "baseline_summary": self.baseline_summary,
            "variant_summary": self.variant_summary,
            "deltas": self.deltas,
            "verdict": self.verdict,
        }


@dataclass(frozen=True)
class CountermeasureCandidate:
    param: str
    fraction: float
    value: float | None
    risk: float | None   # resulting primary metric; None when infeasible
    delta: float | None
    status: str          # OK | INFEASIBLE
    message: str = ""

    def to_dict(self) -> dict:
        return {
            "param": self.param,
            "fraction": self.fraction,
            "value": self.value,
            "risk": self.risk,
            "delta": self.delta,
            "status": self.status,
            "message": self.message,
        }


@dataclass(frozen=True)
class CountermeasureRanking:
    scenario_id: str
    primary_metric: str
    baseline_risk: float
    ranking: list[CountermeasureCandidate]     # feasible, ascending risk
    infeasible: list[CountermeasureCandidate]

    def to_dict(self) -> dict:
        return {
            "scenario_id": self.scenario_id,
            "primary_metric": self.primary_metric,
            "baseline_risk": self.baseline_risk,
            "ranking": [c.to_dict() for c in self.ranking],
            "infeasible": [c.to_dict() for c in self.infeasible],
        }


# ---------------------------------------------------------------------------
# config validation

def _allowed_params(kind: str) -> set[str]:
    if kind == "LOGISTIC":
        return {f.name for f in fields(dynamics.LogisticParams)}
    if kind == "LOTKA_VOLTERRA":
        return {f.name for f in fields(dynamics.LotkaVolterraParams)}
    if kind == "MARKET":
        return {f.name for f in fields(market.MarketConfig)}
    if kind == "COMPLEXITY":
        return set(_COMPLEXITY_KEYS)
    raise ValidationError(f"unknown scenario kind {kind!r}", detail="kind")


def _construct(cls, kwargs: dict):
    """Build a typed params object, converting type failures to VALIDATION."""
    try:
        return cls(**kwargs)
    except HoloriskError:
        raise
    except (TypeError, ValueError) as e:
        raise ValidationError(f"invalid config: {e}") from None


def validate_config(kind: str, config: dict) -> None:
    """Raise ValidationError (naming the offending key) unless config is
    a valid parameter record for the kind."""
    if kind not in KINDS:
        raise ValidationError(f"unknown scenario kind {kind!r}", detail="kind")
    if not isinstance(config, dict):
        raise ValidationError("config must be an object", detail="config")
    allowed = _allowed_params(kind)
    for key in config:
        if key not in allowed:
            raise ValidationError(f"unknown parameter {key!r} for kind {kind}", detail=key)
    merged = {**_KIND_DEFAULTS.get(kind, {}), **config}
    if kind == "LOGISTIC":
        if "r" not in merged:
            raise ValidationError("LOGISTIC config requires 'r'", detail="r")
        _construct(dynamics.LogisticParams, merged)
    elif kind == "LOTKA_VOLTERRA":
        required = {"alpha", "beta", "gamma", "delta", "x0", "y0"}
        missing = required - set(merged)
        if missing:
            raise ValidationError(f"LOTKA_VOLTERRA config missing {sorted(missing)[0]!r}",
                                  detail=sorted(missing)[0])
        _construct(dynamics.LotkaVolterraParams, merged)
    elif kind == "MARKET":
        _construct(market.MarketConfig, merged)
    elif kind == "COMPLEXITY":
        if "csv_path" not in merged or not isinstance(merged["csv_path"], str):
            raise ValidationError("COMPLEXITY config requires a 'csv_path' string",
                                  detail="csv_path")
        if merged["mode"] not in ("levels", "returns"):
            raise ValidationError("mode must be 'levels' or 'returns'", detail="mode")
        try:
            thr = float(merged["edge_threshold"])
        except (TypeError, ValueError):
            raise ValidationError("edge_threshold must be a number", detail="edge_threshold") from None
        if not (0.0 <= thr <= 1.0):
            raise ValidationError("edge_threshold must be in [0, 1]", detail="edge_threshold")


# ---------------------------------------------------------------------------
# store

class ScenarioStore:
    """Directory of <id>.json files; atomic writes via temp-file rename."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def _path(self, scenario_id: str) -> Path:
        return self.root / f"{scenario_id}.json"

    def save(self, name: str, kind: str, config: dict) -> ScenarioDefinition:
        """Validate and persist a new scenario; returns it with assigned id."""
        if not name or not isinstance(name, str):
            raise ValidationError("scenario name must be a non-empty string", detail="name")
        validate_config(kind, config)
        defn = ScenarioDefinition(
            id=uuid.uuid4().hex,
            name=name,
            kind=kind,
            config=dict(config),
            created_at=datetime.now(timezone.utc).isoformat(),
            version=1,
        )
        self._write(defn)
        return defn

    def update(self, defn: ScenarioDefinition) -> ScenarioDefinition:
        """Overwrite an existing id; bumps the version (last writer wins)."""
        validate_config(defn.kind, defn.config)
        try:
            current = self.load(defn.id)
            version = current.version + 1
        except NotFoundError:
            version = 1
        bumped = replace(defn, version=version)
        self._write(bumped)
        return bumped

    def _write(self, defn: ScenarioDefinition) -> None:
        fd, tmp = tempfile.mkstemp(dir=self.root, suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as fh:
                json.dump(defn.to_dict(), fh, indent=2)
            os.replace(tmp, self._path(defn.id))
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    def load(self, scenario_id: str) -> ScenarioDefinition:
        path = self._path(scenario_id)
        if not path.is_file():
            raise NotFoundError(f"no scenario with id {scenario_id!r}", detail=scenario_id)
        with open(path) as fh:
            d = json.load(fh)
        return ScenarioDefinition(
            id=d["id"],
            name=d["name"],
            kind=d["kind"],
            config=d["config"],
            created_at=d["created_at"],
            version=d.get("version", 1),
        )

    def list(self) -> list[dict]:
        """Summaries of all scenarios in creation order."""
        defs = []
        for path in self.root.glob("*.json"):
            with open(path) as fh:
                d = json.load(fh)
            defs.append(d)
        defs.sort(key=lambda d: (d["created_at"], d["id"]))
        return [
            {"id": d["id"], "name": d["name"], "kind": d["kind"], "created_at": d["created_at"]}
            for d in defs
        ]


def resolve_store_path(explicit: str | None = None) -> Path:
    """Store directory: explicit argument, else env var, else default."""
    if explicit:
        return Path(explicit)
    env = os.environ.get(STORE_ENV_VAR)
    if env:
        return Path(env)
    return Path(DEFAULT_STORE)


# ---------------------------------------------------------------------------
# running

def _wrap_scenario_error(e: HoloriskError, scenario_id: str):
    msg = f"scenario {scenario_id}: {e}"
    if isinstance(e, SimulationDivergedError):
        raise SimulationDivergedError(msg, step=e.step, detail=e.detail) from e
    raise type(e)(msg, detail=e.detail) from e


def _run_logistic(config: dict) -> tuple[dict, dict]:
    merged = {**_KIND_DEFAULTS["LOGISTIC"], **config}
    params = _construct(dynamics.LogisticParams, merged)
    orbit = dynamics.iterate_logistic(params)
    est = dynamics.lyapunov_logistic(params.r, params.x0)
    summary = {"lyapunov_exponent": est.exponent, "converged": est.converged}
    payload = {
        "orbit": orbit.values.tolist(),
        "lyapunov": dynamics.lyapunov_to_dict(est),
        "occupancy": dynamics.histogram_to_dict(
            dynamics.occupancy_histogram(orbit, bins_per_dim=PAYLOAD_OCCUPANCY_BINS)
        ),
    }
    return summary, payload


def _run_lotka_volterra(config: dict) -> tuple[dict, dict]:
    params = _construct(dynamics.LotkaVolterraParams, config)
    orbit = dynamics.integrate_lotka_volterra(params)
    prey = orbit.values[:, 0]
    predator = orbit.values[:, 1]
    summary = {
        "prey_amplitude": float(prey.max() - prey.min()),
        "predator_amplitude": float(predator.max() - predator.min()),
    }
    payload = {
        "trajectory": orbit.values.tolist(),
        "dt": params.dt,
        "occupancy": dynamics.histogram_to_dict(
            dynamics.occupancy_histogram(orbit, bins_per_dim=PAYLOAD_OCCUPANCY_BINS)
        ),
    }
    return summary, payload


def _run_market(config: dict, seed_override: int | None) -> tuple[dict, dict]:
    cfg = market.config_from_dict(config)
    if seed_override is not None:
        cfg = replace(cfg, seed=seed_override)
    result = market.run_market_sim(cfg)
    lr = result.log_returns
    kurt = None
    if lr.size >= 4 and lr.std() > 0.0:
        kurt = float(stats.kurtosis(lr, fisher=True, bias=False))
    summary = {"meltdown_count": result.meltdown_count, "excess_kurtosis": kurt}
    payload = market.result_to_dict(result)
    return summary, payload


def _run_complexity(config: dict) -> tuple[dict, dict]:
    merged = {**_KIND_DEFAULTS["COMPLEXITY"], **config}
    path = Path(merged["csv_path"])
    if not path.is_file():
        raise ValidationError(f"csv_path does not exist: {path}", detail="csv_path")
    series = metrics.read_series_csv(path.read_text())
    report = metrics.compute_complexity(
        series, edge_threshold=float(merged["edge_threshold"]), mode=merged["mode"]
    )
    summary = {"score": report.score, "fragility_band": report.fragility_band}
    payload = {"report": metrics.report_to_dict(report)}
    return summary, payload


def run_definition(defn: ScenarioDefinition, seed_override: int | None = None) -> ScenarioRunResult:
    """Run a (not necessarily persisted) definition; never mutates it."""
    try:
        validate_config(defn.kind, defn.config)
        if defn.kind == "LOGISTIC":
            summary, payload = _run_logistic(defn.config)
        elif defn.kind == "LOTKA_VOLTERRA":
            summary, payload = _run_lotka_volterra(defn.config)
        elif defn.kind == "MARKET":
            summary, payload = _run_market(defn.config, seed_override)
        else:
            summary, payload = _run_complexity(defn.config)
    except HoloriskError as e:
        _wrap_scenario_error(e, defn.id)
    return ScenarioRunResult(scenario_id=defn.id, kind=defn.kind, summary=summary, payload=payload)


def run_scenario(
    store: ScenarioStore, scenario_id: str, seed_override: int | None = None
) -> ScenarioRunResult:
    return run_definition(store.load(scenario_id), seed_override)


def _summary_deltas(baseline: dict, variant: dict) -> dict:
    deltas = {}
    for key, base in baseline.items():
        var = variant.get(key)
        if isinstance(base, (int, float)) and not isinstance(base, bool) and \
           isinstance(var, (int, float)) and not isinstance(var, bool):
            deltas[key] = var - base
    return deltas


def _verdict(delta: float) -> str:
    if delta > VERDICT_DEAD_BAND:
        return "RISK_UP"
    if delta < -VERDICT_DEAD_BAND:
        return "RISK_DOWN"
    return "NEUTRAL"


def what_if(
    store: ScenarioStore,
    scenario_id: str,
    overrides: dict,
    seed: int | None = None,
) -> WhatIfResult:
    """Baseline vs override run under identical seeds; verdict from the
    sign of the primary-metric delta with a +-1e-9 dead band."""
    defn = store.load(scenario_id)
    allowed = _allowed_params(defn.kind)
    for key in overrides:
        if key not in allowed:
            raise ValidationError(
                f"unknown parameter {key!r} for kind {defn.kind}", detail=key
            )
    variant_config = {**defn.config, **overrides}
    validate_config(defn.kind, variant_config)

    baseline = run_definition(defn, seed_override=seed)
    variant = run_definition(replace(defn, config=variant_config), seed_override=seed)
    metric = PRIMARY_METRIC[defn.kind]
    deltas = _summary_deltas(baseline.summary, variant.summary)
    primary_delta = variant.summary[metric] - baseline.summary[metric]
    return WhatIfResult(
        scenario_id=scenario_id,
        primary_metric=metric,
        baseline_summary=baseline.summary,
        variant_summary=variant.summary,
        deltas=deltas,
        verdict=_verdict(primary_delta),
    )


def _primary_value(defn: ScenarioDefinition, metric: str,
                   seed: int | None, seeds: list[int] | None) -> float:
    if seeds:
        vals = [run_definition(defn, seed_override=s).summary[metric] for s in seeds]
        return float(statistics.median(vals))
    return float(run_definition(defn, seed_override=seed).summary[metric])


def _base_param_value(defn: ScenarioDefinition, param: str):
    if param in defn.config:
        return defn.config[param]
    merged = {**_KIND_DEFAULTS.get(defn.kind, {}), **defn.config}
    if defn.kind == "LOGISTIC":
        return getattr(_construct(dynamics.LogisticParams, merged), param)
    if defn.kind == "LOTKA_VOLTERRA":
        return getattr(_construct(dynamics.LotkaVolterraParams, merged), param)
    if defn.kind == "MARKET":
        return getattr(_construct(market.MarketConfig, merged), param)
    return merged.get(param)


def propose_countermeasures(
    store: ScenarioStore,
    scenario_id: str,
    tunable_params: list[str],
    step_fractions: list[float],
    seed: int | None = None,
    seeds: list[int] | None = None,
) -> CountermeasureRanking:
    """One-at-a-time grid search over (param, fraction) candidates.

    Each candidate scales one parameter by (1 + fraction), reruns the
    scenario, and is scored by the resulting primary metric (median over
    `seeds` when given). Candidates whose runs fail are reported as
    INFEASIBLE and excluded from the ordering. Feasible candidates are
    sorted by resulting risk ascending, ties broken by parameter name.
    """
    defn = store.load(scenario_id)
    metric = PRIMARY_METRIC[defn.kind]
    allowed = _allowed_params(defn.kind)
    for p in tunable_params:
        if p not in allowed:
            raise ValidationError(f"unknown parameter {p!r} for kind {defn.kind}", detail=p)
    for f in step_fractions:
        if f == 0:
            raise ValidationError("step fractions must be nonzero", detail="step_fractions")

    baseline_risk = _primary_value(defn, metric, seed, seeds)
    feasible: list[CountermeasureCandidate] = []
    infeasible: list[CountermeasureCandidate] = []
    for param in tunable_params:
        base = _base_param_value(defn, param)
        for frac in step_fractions:
            if not isinstance(base, (int, float)) or isinstance(base, bool):
                infeasible.append(CountermeasureCandidate(
                    param=param, fraction=frac, value=None, risk=None, delta=None,
                    status="INFEASIBLE", message=f"parameter {param!r} is not numeric"))
                continue
            value = base * (1.0 + frac)
            variant = replace(defn, config={**defn.config, param: value})
            try:
                validate_config(variant.kind, variant.config)
                risk = _primary_value(variant, metric, seed, seeds)
            except HoloriskError as e:
                infeasible.append(CountermeasureCandidate(
                    param=param, fraction=frac, value=value, risk=None, delta=None,
                    status="INFEASIBLE", message=str(e)))
                continue
            feasible.append(CountermeasureCandidate(
                param=param, fraction=frac, value=value, risk=risk,
                delta=risk - baseline_risk, status="OK"))
    feasible.sort(key=lambda c: (c.risk, c.param, c.fraction))
    return CountermeasureRanking(
        scenario_id=scenario_id,
        primary_metric=metric,
        baseline_risk=baseline_risk,
        ranking=feasible,
        infeasible=infeasible,
    )
