"""Nonlinear dynamical-systems primitives.

Logistic-map iteration and bifurcation scanning, Lyapunov-exponent
estimation (two independent estimators), twin-orbit sensitivity
experiments, fixed-step Lotka-Volterra integration, attractor occupancy
histograms, and a black-box superposition (linearity) tester.

All operations are pure functions of their inputs: no hidden randomness,
bit-identical outputs for identical inputs.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .errors import SimulationDivergedError, ValidationError

CHAOTIC = "CHAOTIC"

# Distinct-state cap above which an asymptotic set is labelled chaotic.
PERIOD_CAP = 64
DEFAULT_DEDUP_TOL = 1e-6
DEFAULT_N_TRANSIENT = 1000
DEFAULT_N_KEEP = 256

# Lyapunov tail-window stability: the running-mean trace over the last
# two 10% windows must agree within this tolerance.
LYAPUNOV_CONV_TOL = 1e-3


@dataclass(frozen=True)
class LogisticParams:
    """Parameters for the recurrence x_{n+1} = r * x_n * (1 - x_n)."""

    r: float
    x0: float
    n_transient: int = DEFAULT_N_TRANSIENT
    n_keep: int = DEFAULT_N_KEEP

    def __post_init__(self):
        if not (0.0 <= self.r <= 4.0):
            raise ValidationError(f"r must be in [0, 4], got {self.r}", detail="r")
        if not (0.0 <= self.x0 <= 1.0):
            raise ValidationError(f"x0 must be in [0, 1], got {self.x0}", detail="x0")
        if self.n_transient < 0:
            raise ValidationError("n_transient must be >= 0", detail="n_transient")
        if self.n_keep < 1:
            raise ValidationError("n_keep must be >= 1", detail="n_keep")


@dataclass(frozen=True)
class LotkaVolterraParams:
    """Parameters for dx/dt = a*x - b*x*y, dy/dt = d*x*y - g*y."""

    alpha: float
    beta: float
    gamma: float
    delta: float
    x0: float
    y0: float
    dt: float = 1e-3
    steps: int = 10_000

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma", "delta"):
            if getattr(self, name) <= 0:
                raise ValidationError(f"{name} must be > 0", detail=name)
        if self.x0 <= 0 or self.y0 <= 0:
            raise ValidationError("initial populations must be > 0", detail="x0/y0")
        if self.dt <= 0:
            raise ValidationError("dt must be > 0", detail="dt")
        if self.steps < 1:
            raise ValidationError("steps must be >= 1", detail="steps")


@dataclass(frozen=True)
class Orbit:
    """A trajectory: rows are states; dt is None for discrete-index maps."""

    values: np.ndarray
    dt: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))
        if self.values.size == 0:
            raise ValidationError("orbit must be non-empty")

    @property
    def ndim_state(self) -> int:
        return 1 if self.values.ndim == 1 else self.values.shape[1]


@dataclass(frozen=True)
class BifurcationDiagram:
    r_values: np.ndarray
    asymptotic_sets: list[np.ndarray]
    detected_period: list[int | str]


@dataclass(frozen=True)
class LyapunovEstimate:
    exponent: float
    n_samples: int
    converged: bool


@dataclass(frozen=True)
class OccupancyHistogram:
    bin_edges: list[np.ndarray]
    probabilities: np.ndarray


@dataclass(frozen=True)
class SuperpositionCheck:
    residual: float
    linear: bool
    tol: float


def _logistic_step(r: float, x: float) -> float:
    return r * x * (1.0 - x)


def iterate_logistic(params: LogisticParams) -> Orbit:
    """Iterate the logistic map; return the n_keep values after the transient.

    The returned orbit excludes x0 itself: element k is the state after
    n_transient + k + 1 applications of the map.
    """
    r, x = params.r, params.x0
    for _ in range(params.n_transient):
        x = _logistic_step(r, x)
    out = np.empty(params.n_keep)
    for i in range(params.n_keep):
        x = _logistic_step(r, x)
        out[i] = x
    return Orbit(out, dt=None)


def _dedup_sorted(vals: np.ndarray, tol: float) -> np.ndarray:
    """Cluster a sorted 1-D array at gap tolerance tol; return cluster means."""
    vals = np.sort(vals)
    gaps = np.nonzero(np.diff(vals) > tol)[0]
    starts = np.concatenate(([0], gaps + 1))
    sums = np.add.reduceat(vals, starts)
    counts = np.diff(np.concatenate((starts, [len(vals)])))
    return sums / counts


def bifurcation_scan(
    r_min: float,
    r_max: float,
    r_count: int,
    x0: float = 0.5,
    n_transient: int = DEFAULT_N_TRANSIENT,
    n_keep: int = DEFAULT_N_KEEP,
    dedup_tol: float = DEFAULT_DEDUP_TOL,
) -> BifurcationDiagram:
    """Asymptotic-state sets over a uniform r grid (the data behind a
    bifurcation diagram).

    Periods above PERIOD_CAP distinct states are labelled CHAOTIC.
    The whole grid is advanced simultaneously (vectorized across r).
    """
    if not (0.0 <= r_min < r_max <= 4.0):
        raise ValidationError("need 0 <= r_min < r_max <= 4", detail="r_min/r_max")
    if r_count < 2:
        raise ValidationError("r_count must be >= 2", detail="r_count")
    if not (0.0 <= x0 <= 1.0):
        raise ValidationError("x0 must be in [0, 1]", detail="x0")
    if dedup_tol <= 0:
        raise ValidationError("dedup_tol must be > 0", detail="dedup_tol")

    rs = np.linspace(r_min, r_max, r_count)
    x = np.full(r_count, float(x0))
    for _ in range(n_transient):
        x = rs * x * (1.0 - x)
    kept = np.empty((n_keep, r_count))
    for i in range(n_keep):
        x = rs * x * (1.0 - x)
        kept[i] = x

    sets: list[np.ndarray] = []
    periods: list[int | str] = []
    for j in range(r_count):
        reps = _dedup_sorted(kept[:, j], dedup_tol)
        sets.append(reps)
        periods.append(len(reps) if len(reps) <= PERIOD_CAP else CHAOTIC)
    return BifurcationDiagram(rs, sets, periods)


def lyapunov_logistic(
    r: float,
    x0: float = 0.2,
    n: int = 200_000,
    n_transient: int = 1000,
) -> LyapunovEstimate:
    """Derivative-average Lyapunov exponent: mean of ln|r * (1 - 2 x_n)|.

    Convergence flag: the running-mean trace must be stable across its
    last two 10% windows (mean absolute difference below 1e-3).
    """
    if not (0.0 <= r <= 4.0):
        raise ValidationError(f"r must be in [0, 4], got {r}", detail="r")
    if not (0.0 <= x0 <= 1.0):
        raise ValidationError(f"x0 must be in [0, 1], got {x0}", detail="x0")
    if n < 1000:
        raise ValidationError("n must be >= 1000", detail="n")

    x = x0
    for _ in range(n_transient):
        x = _logistic_step(r, x)
    terms = np.empty(n)
    tiny = np.finfo(float).tiny  # derivative can be exactly 0 at x = 1/2
    for i in range(n):
        d = abs(r * (1.0 - 2.0 * x))
        terms[i] = np.log(d if d > tiny else tiny)
        x = _logistic_step(r, x)

    trace = np.cumsum(terms) / np.arange(1, n + 1)
    w = n // 10
    converged = bool(abs(trace[-2 * w : -w].mean() - trace[-w:].mean()) < LYAPUNOV_CONV_TOL)
    return LyapunovEstimate(exponent=float(trace[-1]), n_samples=n, converged=converged)


def lyapunov_twin_orbit(
    r: float,
    x0: float = 0.2,
    delta0: float = 1e-10,
    n_transient: int = 1000,
    n_max: int = 400,
    window: tuple[float, float] = (1e-13, 1e-4),
) -> LyapunovEstimate:
    """Independent exponent estimate: log-linear fit of twin-orbit separation.

    Runs the transient first so the perturbation is applied on the
    attractor, then fits the slope of ln|separation| over the first
    contiguous stretch of steps whose separation lies inside the given
    window. Collection stops once the separation leaves the window:
    below it the float floor flattens the decay, above it nonlinear
    saturation (and chaotic close encounters) would pollute the fit.
    """
    if not (0.0 <= r <= 4.0):
        raise ValidationError(f"r must be in [0, 4], got {r}", detail="r")
    if not (0.0 < delta0 <= 1e-6):
        raise ValidationError("delta0 must be in (0, 1e-6]", detail="delta0")

    x = x0
    for _ in range(n_transient):
        x = _logistic_step(r, x)
    a, b = x, min(x + delta0, 1.0)
    lo, hi = window
    ks, logs = [], []
    for k in range(n_max):
        sep = abs(a - b)
        if sep == 0.0 or (ks and not (lo <= sep < hi)):
            break
        if lo <= sep < hi:
            ks.append(k)
            logs.append(np.log(sep))
        a = _logistic_step(r, a)
        b = _logistic_step(r, b)
    if len(ks) < 4:
        return LyapunovEstimate(exponent=float("nan"), n_samples=len(ks), converged=False)
    slope = float(np.polyfit(ks, logs, 1)[0])
    return LyapunovEstimate(exponent=slope, n_samples=len(ks), converged=True)


def sensitivity_divergence(params: LogisticParams, delta0: float) -> np.ndarray:
    """Twin orbits from x0 and x0 + delta0; |difference| per step.

    Element k is the separation after k applications of the map
    (element 0 is delta0 itself); n_keep sets the step count and the
    transient field is not used (the experiment is about the orbit from
    the given initial condition).
    """
    if delta0 < 0 or delta0 > 1e-6:
        raise ValidationError("delta0 must be in [0, 1e-6]", detail="delta0")
    if params.x0 + delta0 > 1.0:
        raise ValidationError("x0 + delta0 must be <= 1", detail="delta0")
    r = params.r
    a, b = params.x0, params.x0 + delta0
    seps = np.empty(params.n_keep + 1)
    seps[0] = delta0
    for k in range(1, params.n_keep + 1):
        a = _logistic_step(r, a)
        b = _logistic_step(r, b)
        seps[k] = abs(a - b)
    return seps


def _lv_deriv(p: LotkaVolterraParams, s: np.ndarray) -> np.ndarray:
    x, y = s
    return np.array([p.alpha * x - p.beta * x * y, p.delta * x * y - p.gamma * y])


def integrate_lotka_volterra(params: LotkaVolterraParams) -> Orbit:
    """Fixed-step RK4 trajectory of (prey, predator).

    Raises a simulation-diverged error (naming the step) if any component
    becomes non-positive or non-finite, which signals dt is too large.
    """
    h = params.dt
    state = np.array([params.x0, params.y0])
    out = np.empty((params.steps + 1, 2))
    out[0] = state
    for t in range(params.steps):
        k1 = _lv_deriv(params, state)
        k2 = _lv_deriv(params, state + 0.5 * h * k1)
        k3 = _lv_deriv(params, state + 0.5 * h * k2)
        k4 = _lv_deriv(params, state + h * k3)
        state = state + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not np.all(np.isfinite(state)) or np.any(state <= 0.0):
            raise SimulationDivergedError(
                f"state left the positive quadrant at step {t + 1}; reduce dt", step=t + 1
            )
        out[t + 1] = state
    return Orbit(out, dt=h)


def lv_first_integral(params: LotkaVolterraParams, orbit: Orbit) -> np.ndarray:
    """Conserved quantity V = delta*x - gamma*ln(x) + beta*y - alpha*ln(y)
    evaluated along a trajectory."""
    x = orbit.values[:, 0]
    y = orbit.values[:, 1]
    return params.delta * x - params.gamma * np.log(x) + params.beta * y - params.alpha * np.log(y)


def occupancy_histogram(orbit: Orbit, bins_per_dim: int) -> OccupancyHistogram:
    """Normalized visit-frequency histogram over the orbit's bounding box.

    A dimension with zero range gets a unit-width box around the constant
    value so all mass lands in one bin instead of erroring.
    """
    if bins_per_dim < 2:
        raise ValidationError("bins_per_dim must be >= 2", detail="bins_per_dim")
    data = orbit.values
    if data.ndim == 1:
        data = data[:, None]
    ranges = []
    for d in range(data.shape[1]):
        lo, hi = float(data[:, d].min()), float(data[:, d].max())
        if hi - lo < np.finfo(float).tiny:
            lo, hi = lo - 0.5, hi + 0.5
        ranges.append((lo, hi))
    counts, edges = np.histogramdd(data, bins=bins_per_dim, range=ranges)
    probs = counts / counts.sum()
    return OccupancyHistogram(bin_edges=[np.asarray(e) for e in edges], probabilities=probs)


def test_superposition(system, u, v, a: float, b: float, tol: float = 1e-12) -> SuperpositionCheck:
    """Black-box linearity check: residual of f(a*u + b*v) vs a*f(u) + b*f(v).

    Verdict is LINEAR (linear=True) iff the max-abs residual is <= tol.
    Evaluation failures propagate to the caller.
    """
    if tol < 0:
        raise ValidationError("tol must be >= 0", detail="tol")
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    combined = np.asarray(system(a * u + b * v), dtype=float)
    parts = a * np.asarray(system(u), dtype=float) + b * np.asarray(system(v), dtype=float)
    residual = float(np.max(np.abs(combined - parts)))
    return SuperpositionCheck(residual=residual, linear=residual <= tol, tol=tol)


# ---------------------------------------------------------------------------
# serialization (shared by CLI and HTTP so the two cannot diverge)

def orbit_to_csv(orbit: Orbit, columns: list[str] | None = None) -> str:
    vals = orbit.values if orbit.values.ndim == 2 else orbit.values[:, None]
    if columns is None:
        columns = ["x"] if vals.shape[1] == 1 else ["x", "y"][: vals.shape[1]]
        if vals.shape[1] > 2:
            columns = [f"s{i}" for i in range(vals.shape[1])]
    tcol = "t" if orbit.dt is not None else "step"
    buf = io.StringIO()
    buf.write(",".join([tcol] + columns) + "\n")
    for k in range(vals.shape[0]):
        t = k * orbit.dt if orbit.dt is not None else k
        buf.write(",".join([repr(float(t))] + [repr(float(v)) for v in vals[k]]) + "\n")
    return buf.getvalue()


def orbit_to_dict(orbit: Orbit) -> dict:
    return {"values": orbit.values.tolist(), "dt": orbit.dt}


def diagram_to_csv(diagram: BifurcationDiagram) -> str:
    buf = io.StringIO()
    buf.write("r,state\n")
    for r, states in zip(diagram.r_values, diagram.asymptotic_sets):
        for s in states:
            buf.write(f"{float(r)!r},{float(s)!r}\n")
    return buf.getvalue()


def diagram_to_dict(diagram: BifurcationDiagram) -> dict:
    return {
        "r_values": diagram.r_values.tolist(),
        "asymptotic_sets": [s.tolist() for s in diagram.asymptotic_sets],
        "detected_period": list(diagram.detected_period),
    }


def lyapunov_to_dict(est: LyapunovEstimate) -> dict:
    return {"exponent": est.exponent, "n_samples": est.n_samples, "converged": est.converged}


def histogram_to_dict(hist: OccupancyHistogram) -> dict:
    return {
        "bin_edges": [e.tolist() for e in hist.bin_edges],
        "probabilities": hist.probabilities.tolist(),
    }
