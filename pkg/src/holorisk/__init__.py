"""holorisk: systemic complexity and risk analytics.

Modules:
    dynamics   - logistic map, bifurcation, Lyapunov, Lotka-Volterra,
                 occupancy histograms, superposition testing
    life       - Conway's Game of Life engine
    market     - heterogeneous-agent market simulation (fat tails)
    metrics    - complexity/fragility scoring, Gaussian baseline, tails
    workbench  - scenario persistence, what-if runs, countermeasures
    cli/server - command-line and HTTP interfaces
"""

__version__ = "0.1.0"

from . import dynamics, life, market, metrics, workbench  # noqa: F401
from .errors import (  # noqa: F401
    DegenerateInputError,
    HoloriskError,
    NotFoundError,
    SimulationDivergedError,
    ValidationError,
)
