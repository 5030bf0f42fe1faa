"""
Runtime settings.

Defaults can be overridden through the environment (or a `.env` file in the
working directory) and then per job from the command line.
"""
import os
import logging

from dotenv import load_dotenv
from pydantic import BaseModel, Field

logger = logging.getLogger(__name__)

ZETA_CONVENTION = "corner-positive-edge-negative"


class Settings(BaseModel):
    """Numerical defaults shared by the CLI and the library entry points."""
    order: int = Field(12, ge=4, description="Series terms beyond the leading term")
    tol: float = Field(1e-9, gt=0, description="Unit-modulus tolerance for sigma(0)")
    samples: int = Field(4096, ge=256, description="Circle samples for the numeric corroborator")
    radius: float = Field(1e-3, gt=0, description="Circle radius for the numeric corroborator")
    threads: int = Field(1, ge=1, description="Batch parallelism")
    log_level: str = Field("WARNING", description="Logging level for stderr")


def get_settings() -> Settings:
    """Build settings from the environment, after loading `.env` if present."""
    load_dotenv()
    values = {}
    env_map = {
        "MILNORLAB_THREADS": "threads",
        "MILNORLAB_ORDER": "order",
        "MILNORLAB_TOL": "tol",
        "MILNORLAB_LOG_LEVEL": "log_level",
    }
    for env_name, field in env_map.items():
        raw = os.getenv(env_name)
        if raw:
            values[field] = raw
    settings = Settings(**values)
    logger.debug(f"Settings: {settings.model_dump()}")
    return settings
