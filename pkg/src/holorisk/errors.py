"""Error hierarchy shared by every module and both external interfaces.

Each error carries a machine-readable ``code`` drawn from a fixed
enumeration so the CLI and HTTP layers can map failures to exit codes
and status codes without inspecting types from other modules.
"""

from __future__ import annotations

ERROR_CODES = ("VALIDATION", "NOT_FOUND", "DEGENERATE_INPUT", "SIM_DIVERGED", "INTERNAL")


class HoloriskError(Exception):
    """Base class for all domain errors raised by this package."""

    code = "INTERNAL"

    def __init__(self, message: str, detail: str | None = None):
        super().__init__(message)
        self.detail = detail

    def to_dict(self) -> dict:
        return {"code": self.code, "message": str(self), "detail": self.detail}


class ValidationError(HoloriskError):
    """A parameter or payload failed an invariant check."""

    code = "VALIDATION"


class NotFoundError(HoloriskError):
    """A referenced resource (scenario id) does not exist."""

    code = "NOT_FOUND"


class DegenerateInputError(HoloriskError):
    """Input is structurally valid but statistically unusable (e.g. constant series)."""

    code = "DEGENERATE_INPUT"


class SimulationDivergedError(HoloriskError):
    """A numerical run blew up; carries the step index where it happened."""

    code = "SIM_DIVERGED"

    def __init__(self, message: str, step: int, detail: str | None = None):
        super().__init__(message, detail=detail)
        self.step = step

    def to_dict(self) -> dict:
        d = super().to_dict()
        d["step"] = self.step
        return d
