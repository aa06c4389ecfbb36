"""
Toolkit configuration read from the environment (and an optional .env file).
"""

import os
import logging
from dataclasses import dataclass

from dotenv import load_dotenv

logger = logging.getLogger(__name__)

load_dotenv()


@dataclass(frozen=True)
class Settings:
    """Defaults that CLI flags may override."""

    seed: int = 0
    samples: int = 20
    output_dir: str = "./outputs"
    bruteforce_edges: int = 24
    dense_fill: float = 0.5


def _read_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        logger.warning(f"Ignoring non-integer {name}={raw!r}, using {default}")
        return default


def _read_float(name: str, default: float) -> float:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return float(raw)
    except ValueError:
        logger.warning(f"Ignoring non-numeric {name}={raw!r}, using {default}")
        return default


def get_settings() -> Settings:
    """Read the current settings from the environment."""
    return Settings(
        seed=_read_int("FROBENIUS_SEED", 0),
        samples=max(1, _read_int("FROBENIUS_SAMPLES", 20)),
        output_dir=os.environ.get("FROBENIUS_OUTPUT_DIR", "./outputs"),
        bruteforce_edges=_read_int("FROBENIUS_BRUTEFORCE_EDGES", 24),
        dense_fill=_read_float("FROBENIUS_DENSE_FILL", 0.5),
    )
