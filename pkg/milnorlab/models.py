"""
Job and report models for the command-line front end.
"""
from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, Field, model_validator

from . import __version__
from .config import ZETA_CONVENTION

Command = Literal["newton", "multcond", "zeta", "zeta-mixed", "zeta3h", "jacobian", "puiseux", "fibration"]

COMMANDS_NEEDING_G = ("multcond", "zeta-mixed", "zeta3h", "jacobian", "fibration")


class Job(BaseModel):
    """One computation request, from the command line or a batch file."""
    command: Command = Field(..., description="Computation to run")
    f: str = Field(..., min_length=1, description="Expression for f (or k for puiseux)")
    g: Optional[str] = Field(None, description="Expression for g")
    variables: Optional[List[str]] = Field(None, description="Ordered variable names")
    order: int = Field(12, ge=4, description="Series terms beyond the leading term")
    tol: float = Field(1e-9, gt=0, description="Unit-modulus tolerance")
    samples: int = Field(4096, ge=256, description="Circle samples for the corroborator")
    radius: float = Field(1e-3, gt=0, description="Circle radius for the corroborator")
    format: str = Field("json", pattern="^(json|text)$", description="Output format")

    @model_validator(mode="after")
    def check_inputs(self):
        if self.command in COMMANDS_NEEDING_G and not self.g:
            raise ValueError(f"command '{self.command}' needs g")
        if self.variables is None:
            self.variables = ["z1", "z2", "z3"] if self.command == "zeta3h" else ["x", "y"]
        return self

    def echo(self) -> Dict[str, Any]:
        """The job's inputs as embedded in its report."""
        return {"f": self.f, "g": self.g, "variables": list(self.variables)}

    def tolerances(self) -> Dict[str, Any]:
        return {"order": self.order, "tol": self.tol, "samples": self.samples, "radius": self.radius}


class ErrorInfo(BaseModel):
    type: str
    message: str


class Report(BaseModel):
    """Deterministic result document of a single job."""
    tool: str = "milnorlab"
    version: str = __version__
    command: str
    input: Dict[str, Any]
    settings: Dict[str, Any]
    zeta_convention: str = ZETA_CONVENTION
    exit_code: int
    result: Optional[Dict[str, Any]] = None
    error: Optional[ErrorInfo] = None


class BatchReport(BaseModel):
    tool: str = "milnorlab"
    version: str = __version__
    exit_code: int
    reports: List[Report] = Field(default_factory=list)
