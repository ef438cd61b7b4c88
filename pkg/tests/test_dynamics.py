import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from holorisk import dynamics
from holorisk.dynamics import (
    CHAOTIC,
    BifurcationDiagram,
    LogisticParams,
    LotkaVolterraParams,
    Orbit,
    bifurcation_scan,
    diagram_to_csv,
    integrate_lotka_volterra,
    iterate_logistic,
    lv_first_integral,
    lyapunov_logistic,
    lyapunov_twin_orbit,
    occupancy_histogram,
    orbit_to_csv,
    sensitivity_divergence,
)
from holorisk.dynamics import test_superposition as superposition_check
from holorisk.errors import SimulationDivergedError, ValidationError

LV_DEMO = dict(alpha=2 / 3, beta=4 / 3, gamma=1.0, delta=1.0, x0=1.5, y0=0.5)


# ---------------------------------------------------------------------------
# logistic iteration

def test_iterate_excludes_seed():
    # r=4, x0=0.5: one step hits 1.0, then the absorbing 0 state
    orbit = iterate_logistic(LogisticParams(r=4.0, x0=0.5, n_transient=0, n_keep=3))
    assert orbit.values.tolist() == [1.0, 0.0, 0.0]
    assert orbit.dt is None


def test_fixed_point_value():
    orbit = iterate_logistic(LogisticParams(r=2.5, x0=0.2))
    assert np.all(np.abs(orbit.values - 0.6) < 1e-9)


def test_period_two_values():
    r = 3.2
    root = np.sqrt((r + 1.0) * (r - 3.0))
    expected = sorted([(r + 1.0 - root) / (2.0 * r), (r + 1.0 + root) / (2.0 * r)])
    orbit = iterate_logistic(LogisticParams(r=r, x0=0.2, n_transient=2000, n_keep=4))
    got = sorted(set(np.round(orbit.values, 9)))
    assert len(got) == 2
    assert got == pytest.approx(expected, abs=1e-9)


def test_period_four_cycle():
    # near the r=3.449 doubling, convergence is slow: long transient needed
    orbit = iterate_logistic(LogisticParams(r=3.5, x0=0.2, n_transient=20_000, n_keep=8))
    vals = orbit.values
    assert len(np.unique(np.round(vals, 8))) == 4
    assert np.all(np.abs(vals[4:] - vals[:4]) < 1e-9)


@given(
    r=st.floats(min_value=0.0, max_value=4.0),
    x0=st.floats(min_value=0.0, max_value=1.0),
)
@settings(max_examples=80, deadline=None)
def test_orbit_confined_to_unit_interval(r, x0):
    orbit = iterate_logistic(LogisticParams(r=r, x0=x0, n_transient=0, n_keep=200))
    assert np.all(orbit.values >= 0.0)
    assert np.all(orbit.values <= 1.0)


@given(
    r=st.floats(min_value=1.05, max_value=2.95),
    x0=st.floats(min_value=0.01, max_value=0.99),
)
@settings(max_examples=60, deadline=None)
def test_attracting_fixed_point_formula(r, x0):
    orbit = iterate_logistic(LogisticParams(r=r, x0=x0, n_transient=3000, n_keep=4))
    assert np.all(np.abs(orbit.values - (1.0 - 1.0 / r)) < 1e-6)


def test_logistic_param_validation():
    with pytest.raises(ValidationError):
        LogisticParams(r=4.3, x0=0.5)
    with pytest.raises(ValidationError):
        LogisticParams(r=2.5, x0=1.5)
    with pytest.raises(ValidationError):
        LogisticParams(r=2.5, x0=0.5, n_keep=0)


# ---------------------------------------------------------------------------
# bifurcation scan

@pytest.fixture(scope="module")
def standard_diagram() -> BifurcationDiagram:
    # x0=0.5 is a degenerate seed at exactly r=4 (maps through 1 into the
    # absorbing 0 state), so the scan fixture seeds off the special point
    return bifurcation_scan(2.5, 4.0, 601, x0=0.2, n_transient=20_000)


def period_at(diagram: BifurcationDiagram, r: float):
    j = int(np.argmin(np.abs(diagram.r_values - r)))
    assert abs(diagram.r_values[j] - r) < 1e-12
    return diagram.detected_period[j]


def test_scan_period_doubling_sequence(standard_diagram):
    assert period_at(standard_diagram, 2.5) == 1
    assert period_at(standard_diagram, 3.2) == 2
    assert period_at(standard_diagram, 3.5) == 4
    assert period_at(standard_diagram, 4.0) == CHAOTIC


def test_scan_chaos_onset_location(standard_diagram):
    flags = [p == CHAOTIC for p in standard_diagram.detected_period]
    first = flags.index(True)
    # accumulation point of the doubling cascade is near r = 3.5699
    assert 3.55 < standard_diagram.r_values[first] < 3.58
    before = standard_diagram.detected_period[:first]
    assert 1 in before and 2 in before and 4 in before


def test_scan_states_sorted_and_bounded(standard_diagram):
    for states in standard_diagram.asymptotic_sets:
        assert np.all(np.diff(states) > 0) or len(states) == 1
        assert np.all((states >= 0.0) & (states <= 1.0))


def test_scan_validation():
    with pytest.raises(ValidationError):
        bifurcation_scan(3.0, 2.0, 10)
    with pytest.raises(ValidationError):
        bifurcation_scan(0.0, 4.1, 10)
    with pytest.raises(ValidationError):
        bifurcation_scan(2.5, 4.0, 1)


def test_scan_superstable_point():
    # r=2.0 lands exactly on its fixed point 1 - 1/r = 0.5
    diagram = bifurcation_scan(1.5, 2.5, 3, n_transient=2000, n_keep=32)
    assert diagram.detected_period[1] == 1
    assert diagram.asymptotic_sets[1][0] == pytest.approx(0.5, abs=1e-12)


def test_scan_deterministic():
    a = bifurcation_scan(3.5, 3.9, 21, n_transient=500, n_keep=64)
    b = bifurcation_scan(3.5, 3.9, 21, n_transient=500, n_keep=64)
    for sa, sb in zip(a.asymptotic_sets, b.asymptotic_sets):
        assert np.array_equal(sa, sb)


# ---------------------------------------------------------------------------
# Lyapunov exponents

def test_lyapunov_fixed_point_closed_form():
    # at the r=2.5 fixed point the multiplier is |2 - r| = 0.5 exactly
    est = lyapunov_logistic(2.5, n=10_000)
    assert est.exponent == pytest.approx(np.log(0.5), abs=1e-9)
    assert est.converged


def test_lyapunov_period_two_closed_form():
    # cycle multiplier: |f'(p+) f'(p-)| = |-r^2 + 2r + 4| = 0.16 at r=3.2
    est = lyapunov_logistic(3.2, n=10_000)
    assert est.exponent == pytest.approx(0.5 * np.log(0.16), abs=1e-9)
    assert est.converged


def test_lyapunov_fully_chaotic_closed_form():
    est = lyapunov_logistic(4.0, x0=0.2)
    assert est.exponent == pytest.approx(np.log(2.0), abs=1e-3)
    assert est.converged
    assert est.n_samples == 200_000


@pytest.mark.parametrize("r", [2.0, 2.5, 3.2])
def test_lyapunov_negative_in_periodic_regime(r):
    assert lyapunov_logistic(r, n=20_000).exponent < 0.0


@pytest.mark.parametrize("r", [3.7, 3.9, 4.0])
def test_lyapunov_positive_in_chaotic_regime(r):
    assert lyapunov_logistic(r, n=50_000).exponent > 0.0


@pytest.mark.parametrize("r", [2.5, 3.2, 3.7, 4.0])
def test_twin_orbit_agrees_with_derivative_average(r):
    """The two estimators are independent; they must agree coarsely."""
    deriv = lyapunov_logistic(r, n=100_000)
    twin = lyapunov_twin_orbit(r)
    assert twin.converged
    assert abs(twin.exponent - deriv.exponent) < 0.15


def test_lyapunov_validation():
    with pytest.raises(ValidationError):
        lyapunov_logistic(4.5)
    with pytest.raises(ValidationError):
        lyapunov_logistic(3.9, n=10)
    with pytest.raises(ValidationError):
        lyapunov_twin_orbit(3.9, delta0=1e-3)


# ---------------------------------------------------------------------------
# sensitivity experiment

def test_sensitivity_contracts_on_stable_fixed_point():
    params = LogisticParams(r=2.5, x0=0.6, n_keep=20)
    seps = sensitivity_divergence(params, 1e-8)
    assert seps[0] == 1e-8
    assert len(seps) == 21
    ratios = seps[1:11] / seps[:10]
    assert np.all((ratios > 0.49) & (ratios < 0.51))


def test_sensitivity_explodes_in_chaos():
    params = LogisticParams(r=4.0, x0=0.3, n_keep=60)
    seps = sensitivity_divergence(params, 1e-10)
    assert seps[0] == 1e-10
    assert np.max(seps) > 0.1
    first_large = int(np.argmax(seps > 0.1))
    assert first_large < 50


def test_sensitivity_zero_delta_gives_identical_orbits():
    seps = sensitivity_divergence(LogisticParams(r=3.9, x0=0.4, n_keep=50), 0.0)
    assert np.all(seps == 0.0)


def test_sensitivity_validation():
    with pytest.raises(ValidationError):
        sensitivity_divergence(LogisticParams(r=3.9, x0=0.4), 1e-3)
    with pytest.raises(ValidationError):
        sensitivity_divergence(LogisticParams(r=3.9, x0=1.0), 1e-8)


# ---------------------------------------------------------------------------
# Lotka-Volterra

def test_lv_first_integral_conserved():
    params = LotkaVolterraParams(**LV_DEMO, dt=1e-3, steps=20_000)
    orbit = integrate_lotka_volterra(params)
    v = lv_first_integral(params, orbit)
    drift = np.max(np.abs(v - v[0])) / abs(v[0])
    assert drift < 1e-10


def test_lv_equilibrium_is_stationary():
    params = LotkaVolterraParams(
        alpha=2 / 3, beta=4 / 3, gamma=1.0, delta=1.0, x0=1.0, y0=0.5, steps=5000
    )
    orbit = integrate_lotka_volterra(params)
    assert np.max(np.abs(orbit.values - orbit.values[0])) < 1e-12


def test_lv_orbit_closes():
    params = LotkaVolterraParams(**LV_DEMO, dt=1e-3, steps=10_000)
    orbit = integrate_lotka_volterra(params)
    gaps = np.linalg.norm(orbit.values[1000:] - orbit.values[0], axis=1)
    assert gaps.min() < 1e-3


def test_lv_positive_quadrant():
    orbit = integrate_lotka_volterra(LotkaVolterraParams(**LV_DEMO, steps=20_000))
    assert np.all(orbit.values > 0.0)
    assert orbit.dt == 1e-3
    assert orbit.values.shape == (20_001, 2)


def test_lv_halving_dt_shrinks_integral_drift():
    def drift(dt, steps):
        p = LotkaVolterraParams(**LV_DEMO, dt=dt, steps=steps)
        v = lv_first_integral(p, integrate_lotka_volterra(p))
        return np.max(np.abs(v - v[0]))

    coarse = drift(0.1, 200)
    fine = drift(0.05, 400)
    assert fine < coarse / 8.0  # RK4: global error is O(dt^4)


def test_lv_divergence_reports_step():
    params = LotkaVolterraParams(**LV_DEMO, dt=5.0, steps=100)
    with pytest.raises(SimulationDivergedError) as exc:
        integrate_lotka_volterra(params)
    assert exc.value.step >= 1
    assert exc.value.code == "SIM_DIVERGED"


def test_lv_validation():
    with pytest.raises(ValidationError):
        LotkaVolterraParams(alpha=-1.0, beta=1.0, gamma=1.0, delta=1.0, x0=1.0, y0=1.0)
    with pytest.raises(ValidationError):
        LotkaVolterraParams(**{**LV_DEMO, "x0": 0.0})
    with pytest.raises(ValidationError):
        LotkaVolterraParams(**LV_DEMO, dt=-0.1)


# ---------------------------------------------------------------------------
# occupancy histogram

def test_occupancy_constant_orbit_single_bin():
    # zero-range dimension gets a unit-width box instead of erroring
    hist = occupancy_histogram(Orbit(np.full(100, 0.37)), bins_per_dim=10)
    assert hist.probabilities.max() == pytest.approx(1.0)
    assert hist.probabilities.sum() == pytest.approx(1.0)
    assert hist.bin_edges[0][0] == pytest.approx(-0.13)
    assert hist.bin_edges[0][-1] == pytest.approx(0.87)


def test_occupancy_period_two_splits_evenly():
    orbit = iterate_logistic(LogisticParams(r=3.2, x0=0.2, n_transient=2000, n_keep=256))
    hist = occupancy_histogram(orbit, bins_per_dim=10)
    probs = np.sort(hist.probabilities)
    assert probs[-1] == pytest.approx(0.5)
    assert probs[-2] == pytest.approx(0.5)
    assert probs[:-2].sum() == 0.0


def test_occupancy_chaotic_density_is_edge_heavy():
    # invariant density of r=4 is 1/(pi sqrt(x(1-x))): mass piles at 0 and 1
    orbit = iterate_logistic(LogisticParams(r=4.0, x0=0.2, n_keep=20_000))
    hist = occupancy_histogram(orbit, bins_per_dim=20)
    probs = hist.probabilities
    assert probs[0] > probs[10]
    assert probs[-1] > probs[10]
    assert probs.sum() == pytest.approx(1.0)
    assert np.all(probs >= 0.0)


def test_occupancy_two_dimensional():
    orbit = integrate_lotka_volterra(LotkaVolterraParams(**LV_DEMO, steps=8000))
    hist = occupancy_histogram(orbit, bins_per_dim=12)
    assert hist.probabilities.shape == (12, 12)
    assert hist.probabilities.sum() == pytest.approx(1.0)
    assert len(hist.bin_edges) == 2
    assert len(hist.bin_edges[0]) == 13


def test_occupancy_validation():
    orbit = iterate_logistic(LogisticParams(r=3.9, x0=0.4, n_keep=100))
    with pytest.raises(ValidationError):
        occupancy_histogram(orbit, bins_per_dim=1)


# ---------------------------------------------------------------------------
# superposition check

def test_superposition_rejects_logistic():
    f = lambda s: 4.0 * s * (1.0 - s)  # noqa: E731
    check = superposition_check(f, 0.2, 0.3, 1.0, 1.0)
    assert check.residual == pytest.approx(0.48, abs=1e-12)
    assert not check.linear


def test_superposition_accepts_matrix_map():
    m = np.array([[1.0, 2.0], [-0.5, 3.0]])
    check = superposition_check(lambda s: m @ s, [1.0, 2.0], [-3.0, 0.5], 2.0, -1.5)
    assert check.linear
    assert check.residual <= 1e-12


def test_superposition_rejects_affine_offset():
    f = lambda s: 2.0 * s + 1.0  # noqa: E731
    check = superposition_check(f, 1.0, 2.0, 1.0, 1.0)
    # f(u+v) - (f(u)+f(v)) = -c for offset c
    assert check.residual == pytest.approx(1.0)
    assert not check.linear


@given(
    mat=st.lists(st.floats(min_value=-3, max_value=3), min_size=4, max_size=4),
    u=st.lists(st.floats(min_value=-3, max_value=3), min_size=2, max_size=2),
    v=st.lists(st.floats(min_value=-3, max_value=3), min_size=2, max_size=2),
    a=st.floats(min_value=-3, max_value=3),
    b=st.floats(min_value=-3, max_value=3),
)
@settings(max_examples=80, deadline=None)
def test_superposition_linear_property(mat, u, v, a, b):
    m = np.array(mat).reshape(2, 2)
    check = superposition_check(lambda s: m @ s, u, v, a, b)
    assert check.linear


def test_superposition_validation():
    with pytest.raises(ValidationError):
        superposition_check(lambda s: s, 1.0, 2.0, 1.0, 1.0, tol=-1.0)


# ---------------------------------------------------------------------------
# serialization

def test_orbit_csv_round_trip():
    orbit = iterate_logistic(LogisticParams(r=3.9, x0=0.4, n_transient=0, n_keep=5))
    lines = orbit_to_csv(orbit).strip().split("\n")
    assert lines[0] == "step,x"
    assert len(lines) == 6
    parsed = np.array([float(line.split(",")[1]) for line in lines[1:]])
    assert np.array_equal(parsed, orbit.values)


def test_lv_csv_has_time_column():
    orbit = integrate_lotka_volterra(LotkaVolterraParams(**LV_DEMO, steps=3))
    lines = orbit_to_csv(orbit).strip().split("\n")
    assert lines[0] == "t,x,y"
    assert float(lines[2].split(",")[0]) == pytest.approx(1e-3)


def test_diagram_csv_shape():
    diagram = bifurcation_scan(2.5, 2.9, 3, n_transient=2000, n_keep=32)
    lines = diagram_to_csv(diagram).strip().split("\n")
    assert lines[0] == "r,state"
    assert len(lines) == 4  # all three r values settle on a fixed point
    r0, s0 = lines[1].split(",")
    assert float(r0) == 2.5
    assert float(s0) == pytest.approx(0.6, abs=1e-6)


def test_dict_serializers_json_safe():
    import json

    orbit = iterate_logistic(LogisticParams(r=3.9, x0=0.4, n_keep=10))
    est = lyapunov_logistic(3.9, n=5000)
    hist = occupancy_histogram(orbit, bins_per_dim=4)
    diagram = bifurcation_scan(2.5, 4.0, 5, n_transient=2000, n_keep=64)
    for payload in (
        dynamics.orbit_to_dict(orbit),
        dynamics.lyapunov_to_dict(est),
        dynamics.histogram_to_dict(hist),
        dynamics.diagram_to_dict(diagram),
    ):
        json.dumps(payload)


def test_orbit_requires_values():
    with pytest.raises(ValidationError):
        Orbit(np.array([]))
