import contextlib
import io
import json

import numpy as np
import pytest

from holorisk import workbench
from holorisk.cli import main as cli_main


@pytest.fixture
def store(tmp_path):
    return workbench.ScenarioStore(tmp_path / "scenarios")


@pytest.fixture
def client(tmp_path):
    from fastapi.testclient import TestClient

    from holorisk.server import create_app

    return TestClient(create_app(str(tmp_path / "scenarios")), raise_server_exceptions=False)


@pytest.fixture
def run_cli():
    """Invoke the CLI in-process; returns (exit_code, stdout, stderr)."""

    def invoke(*args):
        out, err = io.StringIO(), io.StringIO()
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
            code = cli_main([str(a) for a in args])
        return code, out.getvalue(), err.getvalue()

    return invoke


@pytest.fixture
def run_cli_json(run_cli):
    def invoke(*args):
        code, out, err = run_cli(*args)
        assert code == 0, f"CLI exited {code}: {err}"
        return json.loads(out)

    return invoke


@pytest.fixture
def coupled_csv(tmp_path):
    """Three exactly collinear channels plus a time column."""
    rng = np.random.default_rng(42)
    base = rng.standard_normal(200)
    lines = ["t,a,b,c"]
    for i, v in enumerate(base):
        v = float(v)
        lines.append(f"{i},{v!r},{2 * v + 1!r},{-3 * v + 5!r}")
    path = tmp_path / "coupled.csv"
    path.write_text("\n".join(lines) + "\n")
    return path


@pytest.fixture
def independent_csv(tmp_path):
    rng = np.random.default_rng(7)
    data = rng.standard_normal((10, 2000))
    lines = [",".join(f"c{i}" for i in range(10))]
    for k in range(data.shape[1]):
        lines.append(",".join(repr(float(v)) for v in data[:, k]))
    path = tmp_path / "independent.csv"
    path.write_text("\n".join(lines) + "\n")
    return path
