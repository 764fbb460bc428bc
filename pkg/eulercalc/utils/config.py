"""
Run configuration: argparse flags layered over environment defaults.
"""

import os
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv

from eulercalc.lib.errors import EulerCalcError

OUTPUT_FORMATS = ("records", "csv", "plot-csv")


def load_environment(env_file: Optional[Path] = None) -> bool:
    """Load .env.local from the project root when present."""
    env_file = env_file or Path(__file__).resolve().parent.parent.parent / ".env.local"
    if env_file.exists():
        load_dotenv(env_file)
        return True
    return False


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise EulerCalcError(f"{name} must be an integer, got {raw!r}", exit_code=2)


def default_seed() -> int:
    return _env_int("EULERCALC_SEED", 0)


def default_refine_max() -> int:
    return _env_int("EULERCALC_REFINE_MAX", 6)


def default_workers() -> int:
    return _env_int("EULERCALC_WORKERS", 1)


def default_log_level() -> str:
    return os.getenv("EULERCALC_LOG_LEVEL", "INFO").upper()


@dataclass(frozen=True)
class RunConfig:
    """Everything a subcommand needs; the seed alone determines any randomized work."""
    subcommand: str
    input: Optional[str] = None
    directions: Optional[str] = None
    probes: Optional[str] = None
    pairs: Optional[str] = None
    queries: Optional[str] = None
    kernel: Optional[str] = None
    matrix: Optional[str] = None
    radius: Optional[str] = None
    direction_count: int = 16
    trials: int = 20
    seed: int = 0
    refine_max: int = 6
    workers: int = 1
    output_format: str = "records"
    output: Optional[str] = None

    def __post_init__(self):
        if self.output_format not in OUTPUT_FORMATS:
            raise EulerCalcError(f"Unknown output format {self.output_format!r}", exit_code=2)
        if self.refine_max < 0:
            raise EulerCalcError("--refine-max must be nonnegative", exit_code=2)
        if self.workers < 1:
            raise EulerCalcError("--workers must be at least 1", exit_code=2)
        if not 0 <= self.seed < 2 ** 64:
            raise EulerCalcError("--seed must be a 64-bit unsigned integer", exit_code=2)

    def require(self, name: str) -> str:
        value = getattr(self, name)
        if value is None:
            flag = "--" + name.replace("_", "-")
            raise EulerCalcError(f"{self.subcommand} needs {flag}", exit_code=2)
        return value
