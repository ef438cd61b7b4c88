"""Complexity, fragility, and tail-risk scoring of multivariate series.

The complexity score is the mean absolute pairwise Pearson correlation
over non-constant channels: a deliberately simple, order-invariant
scalar in [0, 1]. It is contrasted with a per-channel Gaussian baseline
(mean + residual sigma per channel, cross-channel structure ignored by
construction) and complemented by tail statistics (excess kurtosis, Hill
tail exponent, Gaussian tail p-value).

Correlation is computed on levels by default; a returns mode (first
differences) is available since the right choice is data-dependent.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .errors import DegenerateInputError, ValidationError

FRAGILITY_CUTPOINTS = (0.3, 0.7)
DEFAULT_EDGE_THRESHOLD = 0.5
DEFAULT_TAIL_FRACTION = 0.1

# np.corrcoef of exactly collinear channels can miss +-1 by a few ulps;
# anything this close is snapped so exact-collinearity tests are exact.
_ONE_SNAP = 8 * np.finfo(float).eps

_TIME_COLUMN_NAMES = {"t", "time", "timestamp", "date", "step", "index"}


@dataclass(frozen=True)
class MultivariateSeries:
    channel_names: list[str]
    samples: np.ndarray  # shape (n_channels, n_samples)
    timestep: float = 1.0

    def __post_init__(self):
        samples = np.atleast_2d(np.asarray(self.samples, dtype=float))
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "channel_names", list(self.channel_names))
        if len(self.channel_names) != samples.shape[0]:
            raise ValidationError(
                f"{len(self.channel_names)} names for {samples.shape[0]} channels",
                detail="channel_names",
            )
        if len(set(self.channel_names)) != len(self.channel_names):
            raise ValidationError("channel names must be unique", detail="channel_names")
        if samples.shape[1] < 2:
            raise ValidationError("channels must have length >= 2", detail="samples")
        if not np.all(np.isfinite(samples)):
            raise ValidationError("samples must be finite", detail="samples")


@dataclass(frozen=True)
class ComplexityReport:
    channel_names: list[str]          # retained (non-constant) channels
    correlation_matrix: np.ndarray    # over retained channels
    edge_set: list[tuple[str, str]]   # pairs with |rho| >= edge_threshold
    edge_threshold: float
    score: float
    fragility_band: str
    dropped_channels: list[str]


@dataclass(frozen=True)
class RehAssetModel:
    channel: str
    expected_price: float  # P*: the channel mean
    residual_sigma: float  # sample standard deviation of the residual


@dataclass(frozen=True)
class TailStats:
    excess_kurtosis: float
    tail_exponent_estimate: float
    tail_fraction: float
    gaussian_tail_pvalue: float


@dataclass(frozen=True)
class SystemicComparison:
    complexity: ComplexityReport
    baseline: list[RehAssetModel]
    sigma_limit: float
    flag: bool  # systemically coupled while individually calm


def fragility_band(score: float, cutpoints: tuple[float, float] = FRAGILITY_CUTPOINTS) -> str:
    lo, hi = cutpoints
    if score < lo:
        return "LOW"
    if score < hi:
        return "MEDIUM"
    return "HIGH"


def compute_complexity(
    series: MultivariateSeries,
    edge_threshold: float = DEFAULT_EDGE_THRESHOLD,
    cutpoints: tuple[float, float] = FRAGILITY_CUTPOINTS,
    mode: str = "levels",
) -> ComplexityReport:
    """Score = mean |Pearson rho| over unordered pairs of retained channels.

    Constant channels are dropped (reported, not an error); fewer than
    two non-constant channels is a degenerate input.
    """
    if mode not in ("levels", "returns"):
        raise ValidationError(f"mode must be 'levels' or 'returns', got {mode!r}", detail="mode")
    if not (0.0 <= edge_threshold <= 1.0):
        raise ValidationError("edge_threshold must be in [0, 1]", detail="edge_threshold")

    data = series.samples
    if mode == "returns":
        if data.shape[1] < 3:
            raise DegenerateInputError("returns mode needs channels of length >= 3")
        data = np.diff(data, axis=1)

    stds = data.std(axis=1)
    keep = stds > 0.0
    dropped = [n for n, k in zip(series.channel_names, keep) if not k]
    names = [n for n, k in zip(series.channel_names, keep) if k]
    if len(names) < 2:
        raise DegenerateInputError(
            f"need >= 2 non-constant channels, have {len(names)}", detail="samples"
        )

    corr = np.corrcoef(data[keep])
    corr = 0.5 * (corr + corr.T)  # BLAS products are not bit-symmetric
    corr = np.clip(corr, -1.0, 1.0)
    snap = np.abs(np.abs(corr) - 1.0) < _ONE_SNAP
    corr[snap] = np.sign(corr[snap])
    np.fill_diagonal(corr, 1.0)

    iu = np.triu_indices(len(names), k=1)
    abs_off = np.abs(corr[iu])
    score = float(abs_off.mean())
    edges = [
        (names[i], names[j])
        for i, j in zip(*iu)
        if abs(corr[i, j]) >= edge_threshold
    ]
    return ComplexityReport(
        channel_names=names,
        correlation_matrix=corr,
        edge_set=edges,
        edge_threshold=edge_threshold,
        score=score,
        fragility_band=fragility_band(score, cutpoints),
        dropped_channels=dropped,
    )


def reh_baseline(series: MultivariateSeries) -> list[RehAssetModel]:
    """Per-channel Gaussian baseline: P* = mean, sigma = sample std (n-1).

    Deliberately ignores all cross-channel structure: each channel is
    modelled as if its risk could be assessed in isolation.
    """
    out = []
    for name, row in zip(series.channel_names, series.samples):
        out.append(
            RehAssetModel(
                channel=name,
                expected_price=float(row.mean()),
                residual_sigma=float(row.std(ddof=1)),
            )
        )
    return out


def tail_stats(returns, tail_fraction: float = DEFAULT_TAIL_FRACTION) -> TailStats:
    """Excess kurtosis, Hill tail exponent, and Gaussian tail p-value.

    Hill estimator uses the top ceil(tail_fraction * n) order statistics
    of |returns| (zeros excluded; logs need positive values). The
    p-value is the two-sided fitted-Gaussian probability of the largest
    |deviation from the mean|.
    """
    x = np.asarray(returns, dtype=float)
    if x.ndim != 1:
        raise ValidationError("returns must be one-dimensional", detail="returns")
    if x.size < 100:
        raise ValidationError(f"need >= 100 samples, got {x.size}", detail="returns")
    if not np.all(np.isfinite(x)):
        raise ValidationError("returns must be finite", detail="returns")
    if not (0.0 < tail_fraction <= 0.5):
        raise ValidationError("tail_fraction must be in (0, 0.5]", detail="tail_fraction")
    if x.std() == 0.0:
        raise DegenerateInputError("constant series has no tail statistics")

    kurt = float(stats.kurtosis(x, fisher=True, bias=False))

    mags = np.sort(np.abs(x))[::-1]
    k = int(np.ceil(tail_fraction * x.size))
    top = mags[:k]
    top = top[top > 0.0]
    if top.size < 2:
        raise DegenerateInputError("tail has fewer than 2 positive magnitudes")
    hill = float(1.0 / (np.mean(np.log(top[:-1])) - np.log(top[-1])))

    mu = x.mean()
    sigma = x.std(ddof=1)
    z = np.max(np.abs(x - mu)) / sigma
    pval = float(min(1.0, 2.0 * stats.norm.sf(z)))
    return TailStats(
        excess_kurtosis=kurt,
        tail_exponent_estimate=hill,
        tail_fraction=tail_fraction,
        gaussian_tail_pvalue=pval,
    )


def drawdown_gaussian_pvalue(returns, fit_fraction: float = 0.2) -> float:
    """Probability a Gaussian fitted on the early sample assigns to the
    largest observed drawdown (the most negative return).

    Quantifies surprise: how impossible the worst crash looks to a model
    calibrated before it happened.
    """
    x = np.asarray(returns, dtype=float)
    if not (0.0 < fit_fraction <= 1.0):
        raise ValidationError("fit_fraction must be in (0, 1]", detail="fit_fraction")
    n_fit = max(2, int(x.size * fit_fraction))
    early = x[:n_fit]
    sigma = early.std(ddof=1)
    if sigma == 0.0:
        return 0.0 if x.min() < early.mean() else 1.0
    return float(stats.norm.cdf(x.min(), loc=early.mean(), scale=sigma))


def systemic_vs_individual(
    series: MultivariateSeries,
    sigma_limit: float,
    score_threshold: float = FRAGILITY_CUTPOINTS[1],
    edge_threshold: float = DEFAULT_EDGE_THRESHOLD,
    mode: str = "levels",
) -> SystemicComparison:
    """Bundle complexity report and per-channel baseline; raise the flag
    when the system is highly coupled (score >= threshold) while every
    individual channel looks calm (sigma < limit)."""
    if sigma_limit <= 0:
        raise ValidationError("sigma_limit must be > 0", detail="sigma_limit")
    report = compute_complexity(series, edge_threshold=edge_threshold, mode=mode)
    baseline = reh_baseline(series)
    calm = all(m.residual_sigma < sigma_limit for m in baseline)
    return SystemicComparison(
        complexity=report,
        baseline=baseline,
        sigma_limit=sigma_limit,
        flag=bool(report.score >= score_threshold and calm),
    )


# ---------------------------------------------------------------------------
# CSV ingestion and JSON serialization

def read_series_csv(text: str, timestep: float | None = None) -> MultivariateSeries:
    """Parse CSV with a header row of channel names.

    A first column named like a time axis (t/time/timestamp/date/step/
    index) is treated as metadata: it sets the timestep (from its first
    two values, if numeric and increasing) and is excluded from the
    channels.
    """
    reader = csv.reader(io.StringIO(text))
    rows = [row for row in reader if row and any(cell.strip() for cell in row)]
    if len(rows) < 3:
        raise ValidationError("CSV needs a header row and at least 2 data rows")
    header = [cell.strip() for cell in rows[0]]
    body = rows[1:]

    time_col = header[0].lower() in _TIME_COLUMN_NAMES
    names = header[1:] if time_col else header
    if not names:
        raise ValidationError("CSV has no data channels", detail="header")

    try:
        values = np.array(
            [[float(cell) for cell in row] for row in body], dtype=float
        )
    except ValueError as e:
        raise ValidationError(f"non-numeric CSV value: {e}") from None
    if values.shape[1] != len(header):
        raise ValidationError("CSV rows do not match header width")

    dt = 1.0
    if time_col:
        tcol = values[:, 0]
        if tcol.size >= 2 and tcol[1] > tcol[0]:
            dt = float(tcol[1] - tcol[0])
        values = values[:, 1:]
    if timestep is not None:
        dt = timestep
    return MultivariateSeries(channel_names=names, samples=values.T, timestep=dt)


def series_to_csv(series: MultivariateSeries) -> str:
    buf = io.StringIO()
    buf.write(",".join(["t"] + series.channel_names) + "\n")
    for k in range(series.samples.shape[1]):
        t = k * series.timestep
        buf.write(",".join([repr(float(t))] + [repr(float(v)) for v in series.samples[:, k]]) + "\n")
    return buf.getvalue()


def report_to_dict(report: ComplexityReport) -> dict:
    return {
        "channel_names": report.channel_names,
        "correlation_matrix": report.correlation_matrix.tolist(),
        "edge_set": [list(e) for e in report.edge_set],
        "edge_threshold": report.edge_threshold,
        "score": report.score,
        "fragility_band": report.fragility_band,
        "dropped_channels": report.dropped_channels,
    }


def baseline_to_dict(models: list[RehAssetModel]) -> list[dict]:
    return [
        {"channel": m.channel, "expected_price": m.expected_price, "residual_sigma": m.residual_sigma}
        for m in models
    ]


def tail_stats_to_dict(ts: TailStats) -> dict:
    return {
        "excess_kurtosis": ts.excess_kurtosis,
        "tail_exponent_estimate": ts.tail_exponent_estimate,
        "tail_fraction": ts.tail_fraction,
        "gaussian_tail_pvalue": ts.gaussian_tail_pvalue,
    }


def comparison_to_dict(cmp: SystemicComparison) -> dict:
    return {
        "complexity": report_to_dict(cmp.complexity),
        "baseline": baseline_to_dict(cmp.baseline),
        "sigma_limit": cmp.sigma_limit,
        "flag": cmp.flag,
    }
