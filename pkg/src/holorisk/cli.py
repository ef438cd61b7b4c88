"""Command-line interface.

Every subcommand prints the same payload its HTTP counterpart serves
(shared serialization helpers, no divergent logic). Exit codes: 0 on
success, 1 on usage errors, 2 on runtime (domain) errors.
"""

from __future__ import annotations

import json
import sys

import click

from . import dynamics, life, market, metrics, workbench
from .errors import HoloriskError


def _echo_json(payload) -> None:
    click.echo(json.dumps(payload, indent=2))


def _parse_kv(pairs: tuple[str, ...]) -> dict:
    out = {}
    for item in pairs:
        key, sep, raw = item.partition("=")
        if not sep or not key:
            raise click.UsageError(f"override must look like key=value, got {item!r}")
        try:
            out[key] = json.loads(raw)
        except json.JSONDecodeError:
            out[key] = raw
    return out


def _parse_seeds(spec: str | None) -> list[int] | None:
    if not spec:
        return None
    if ":" in spec:
        lo, _, hi = spec.partition(":")
        return list(range(int(lo), int(hi)))
    return [int(s) for s in spec.split(",") if s.strip()]


@click.group(name="holorisk")
def cli():
    """Systemic complexity and risk analytics toolkit."""


@cli.command()
@click.option("--r-min", type=float, default=2.5, show_default=True)
@click.option("--r-max", type=float, default=4.0, show_default=True)
@click.option("--r-count", type=int, default=600, show_default=True)
@click.option("--x0", type=float, default=0.5, show_default=True)
@click.option("--n-transient", type=int, default=dynamics.DEFAULT_N_TRANSIENT, show_default=True)
@click.option("--n-keep", type=int, default=dynamics.DEFAULT_N_KEEP, show_default=True)
@click.option("--dedup-tol", type=float, default=dynamics.DEFAULT_DEDUP_TOL, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json", show_default=True)
def bifurcate(r_min, r_max, r_count, x0, n_transient, n_keep, dedup_tol, fmt):
    """Scan the logistic map over an r grid; emit asymptotic states."""
    diagram = dynamics.bifurcation_scan(
        r_min, r_max, r_count, x0=x0, n_transient=n_transient,
        n_keep=n_keep, dedup_tol=dedup_tol,
    )
    if fmt == "csv":
        click.echo(dynamics.diagram_to_csv(diagram), nl=False)
    else:
        _echo_json(dynamics.diagram_to_dict(diagram))


@cli.command()
@click.option("--r", type=float, required=True)
@click.option("--x0", type=float, default=0.2, show_default=True)
@click.option("--n", type=int, default=200_000, show_default=True)
@click.option("--n-transient", type=int, default=1000, show_default=True)
@click.option("--method", type=click.Choice(["derivative", "twin"]), default="derivative",
              show_default=True)
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json", show_default=True)
def lyapunov(r, x0, n, n_transient, method, fmt):
    """Estimate the logistic-map Lyapunov exponent."""
    if method == "derivative":
        est = dynamics.lyapunov_logistic(r, x0=x0, n=n, n_transient=n_transient)
    else:
        est = dynamics.lyapunov_twin_orbit(r, x0=x0, n_transient=n_transient)
    if fmt == "csv":
        click.echo("exponent,n_samples,converged")
        click.echo(f"{est.exponent!r},{est.n_samples},{est.converged}")
    else:
        _echo_json(dynamics.lyapunov_to_dict(est))


@cli.command()
@click.option("--alpha", type=float, default=2.0 / 3.0, show_default=True)
@click.option("--beta", type=float, default=4.0 / 3.0, show_default=True)
@click.option("--gamma", type=float, default=1.0, show_default=True)
@click.option("--delta", type=float, default=1.0, show_default=True)
@click.option("--x0", type=float, default=1.5, show_default=True)
@click.option("--y0", type=float, default=0.5, show_default=True)
@click.option("--dt", type=float, default=1e-3, show_default=True)
@click.option("--steps", type=int, default=10_000, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json", show_default=True)
def lotka(alpha, beta, gamma, delta, x0, y0, dt, steps, fmt):
    """Integrate the predator-prey system with fixed-step RK4."""
    params = dynamics.LotkaVolterraParams(
        alpha=alpha, beta=beta, gamma=gamma, delta=delta,
        x0=x0, y0=y0, dt=dt, steps=steps,
    )
    orbit = dynamics.integrate_lotka_volterra(params)
    if fmt == "csv":
        click.echo(dynamics.orbit_to_csv(orbit, columns=["prey", "predator"]), nl=False)
    else:
        _echo_json({"trajectory": orbit.values.tolist(), "dt": orbit.dt})


@cli.command(name="life")
@click.option("--input", "src", type=click.File("r"), required=True,
              help="grid file: rows of 0/1 characters ('-' for stdin)")
@click.option("--steps", type=int, default=1, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text",
              show_default=True)
def life_cmd(src, steps, fmt):
    """Advance a Game of Life grid."""
    grid = life.parse_grid(src.read())
    frames = life.run_life(grid, steps)
    if fmt == "text":
        click.echo(life.format_grid(frames[-1]))
    else:
        _echo_json({
            "steps": steps,
            "final": life.grid_to_dict(frames[-1]),
            "population_series": [g.population for g in frames],
        })


@cli.command(name="market")
@click.option("--preset", type=click.Choice(["stress", "calm"]), default="stress", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--steps", type=int, default=None)
@click.option("--n-fundamentalists", type=int, default=None)
@click.option("--n-chartists", type=int, default=None)
@click.option("--fundamental-value", type=float, default=None)
@click.option("--memory", "chartist_memory", type=int, default=None)
@click.option("--noise-scale", type=float, default=None)
@click.option("--liquidity", type=float, default=None)
@click.option("--max-leverage", type=float, default=None)
@click.option("--no-series", is_flag=True, help="omit per-step arrays from JSON output")
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json", show_default=True)
def market_cmd(preset, seed, no_series, fmt, **overrides):
    """Run the heterogeneous-agent market simulation."""
    kwargs = {k: v for k, v in overrides.items() if v is not None}
    factory = market.stress_config if preset == "stress" else market.calm_config
    config = factory(seed=seed, **kwargs)
    result = market.run_market_sim(config)
    if fmt == "csv":
        click.echo(market.prices_to_csv(result), nl=False)
    else:
        _echo_json(market.result_to_dict(result, include_series=not no_series))


@cli.command()
@click.option("--csv", "csv_file", type=click.File("r"), required=True,
              help="CSV with header row of channel names ('-' for stdin)")
@click.option("--edge-threshold", type=float, default=metrics.DEFAULT_EDGE_THRESHOLD,
              show_default=True)
@click.option("--mode", type=click.Choice(["levels", "returns"]), default="levels",
              show_default=True)
@click.option("--sigma-limit", type=float, default=None,
              help="also run the systemic-vs-individual comparison")
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json", show_default=True)
def complexity(csv_file, edge_threshold, mode, sigma_limit, fmt):
    """Score cross-channel coupling of a multivariate CSV series."""
    series = metrics.read_series_csv(csv_file.read())
    if sigma_limit is not None:
        cmp = metrics.systemic_vs_individual(
            series, sigma_limit=sigma_limit, edge_threshold=edge_threshold, mode=mode
        )
        payload = metrics.comparison_to_dict(cmp)
        report = cmp.complexity
    else:
        report = metrics.compute_complexity(series, edge_threshold=edge_threshold, mode=mode)
        payload = metrics.report_to_dict(report)
    if fmt == "csv":
        names = report.channel_names
        click.echo("channel," + ",".join(names))
        for name, row in zip(names, report.correlation_matrix):
            click.echo(name + "," + ",".join(repr(float(v)) for v in row))
    else:
        _echo_json(payload)


@cli.group()
@click.option("--store", "store_path", type=click.Path(), default=None,
              help="scenario store directory (default: $HOLORISK_STORE or ./holorisk_scenarios)")
@click.pass_context
def scenario(ctx, store_path):
    """Persist and run named what-if scenarios."""
    ctx.obj = workbench.ScenarioStore(workbench.resolve_store_path(store_path))


@scenario.command()
@click.option("--name", required=True)
@click.option("--kind", type=click.Choice(list(workbench.KINDS)), required=True)
@click.option("--config", "config_json", required=True,
              help="JSON object, or @path to a JSON file")
@click.pass_obj
def save(store, name, kind, config_json):
    """Validate and persist a scenario; prints the stored record."""
    if config_json.startswith("@"):
        with open(config_json[1:]) as fh:
            config_json = fh.read()
    try:
        config = json.loads(config_json)
    except json.JSONDecodeError as e:
        raise click.UsageError(f"--config is not valid JSON: {e}")
    defn = store.save(name=name, kind=kind, config=config)
    _echo_json(defn.to_dict())


@scenario.command(name="list")
@click.pass_obj
def list_cmd(store):
    """List stored scenarios in creation order."""
    _echo_json(store.list())


@scenario.command()
@click.argument("scenario_id")
@click.pass_obj
def show(store, scenario_id):
    """Print one stored scenario."""
    _echo_json(store.load(scenario_id).to_dict())


@scenario.command()
@click.argument("scenario_id")
@click.option("--seed", type=int, default=None)
@click.pass_obj
def run(store, scenario_id, seed):
    """Run a scenario; prints result payload and summary."""
    result = workbench.run_scenario(store, scenario_id, seed_override=seed)
    _echo_json(result.to_dict())


@scenario.command()
@click.argument("scenario_id")
@click.option("--override", "overrides", multiple=True,
              help="key=value (value parsed as JSON when possible); repeatable")
@click.option("--seed", type=int, default=None)
@click.pass_obj
def whatif(store, scenario_id, overrides, seed):
    """Baseline vs override comparison with a risk verdict."""
    result = workbench.what_if(store, scenario_id, _parse_kv(overrides), seed=seed)
    _echo_json(result.to_dict())


@scenario.command()
@click.argument("scenario_id")
@click.option("--params", required=True, help="comma-separated tunable parameter names")
@click.option("--fractions", default="0.1,-0.1", show_default=True,
              help="comma-separated signed step fractions")
@click.option("--seed", type=int, default=None)
@click.option("--seeds", default=None,
              help="seed list 'a,b,c' or range 'lo:hi' for median scoring")
@click.pass_obj
def counter(store, scenario_id, params, fractions, seed, seeds):
    """Rank one-at-a-time parameter adjustments by resulting risk."""
    try:
        fracs = [float(f) for f in fractions.split(",") if f.strip()]
    except ValueError:
        raise click.UsageError(f"--fractions must be comma-separated numbers, got {fractions!r}")
    ranking = workbench.propose_countermeasures(
        store,
        scenario_id,
        tunable_params=[p.strip() for p in params.split(",") if p.strip()],
        step_fractions=fracs,
        seed=seed,
        seeds=_parse_seeds(seeds),
    )
    _echo_json(ranking.to_dict())


@cli.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--store", "store_path", type=click.Path(), default=None)
def serve(host, port, store_path):
    """Serve the HTTP API."""
    from .server import run_server

    run_server(host=host, port=port, store_path=store_path)


def main(argv: list[str] | None = None) -> int:
    """Dispatch argv; returns the process exit code instead of exiting."""
    args = sys.argv[1:] if argv is None else list(argv)
    if not args:
        click.echo(cli.get_help(click.Context(cli, info_name="holorisk")), err=True)
        return 1
    try:
        cli.main(args=args, standalone_mode=False)
    except click.exceptions.Exit as e:
        return int(e.exit_code)
    except click.UsageError as e:
        e.show()
        return 1
    except click.Abort:
        return 1
    except HoloriskError as e:
        click.echo(f"error [{e.code}]: {e}", err=True)
        return 2
    except Exception as e:  # unexpected failure still gets a clean exit code
        click.echo(f"error [INTERNAL]: {e}", err=True)
        return 2
    return 0


def entry() -> None:
    sys.exit(main())
