"""Configuration management for optuple."""

import copy
import os
from pathlib import Path
from typing import Any

from dotenv import load_dotenv

load_dotenv()


class Config:
    """Application configuration."""

    TOL: float = float(os.getenv("OPTUPLE_TOL", "1e-8"))
    SEED: int = int(os.getenv("OPTUPLE_SEED", "0"))
    REGISTRY_DIR: Path = Path(os.getenv("OPTUPLE_REGISTRY", "registry"))

    MAX_DIM: int = int(os.getenv("OPTUPLE_MAX_DIM", "256"))
    ALEPH_TOWER: int = int(os.getenv("OPTUPLE_ALEPH_TOWER", "3"))

    # Rank and clustering decisions
    RANK_GAP_FACTOR: float = 10.0
    CLUSTER_GAP_FACTOR: float = 10.0
    PROJECTION_RETRIES: int = 8
    INVERSE_B_MARGIN: float = 1e-10

    # Trace-word fingerprints
    KEY_ROUNDING: float = 1e-6
    MAX_WORD_LENGTH: int = 4
    MAX_KEY_WORDS: int = 2048
    SPECHT_MAX_DIM: int = 4
    SPECHT_TOL: float = 1e-8

    LOG_LEVEL: str = os.getenv("LOG_LEVEL", "INFO")

    def with_overrides(self, **overrides: Any) -> "Config":
        """Return a copy with the given attributes replaced (None values are ignored)."""
        updated = copy.copy(self)
        for key, value in overrides.items():
            if value is None:
                continue
            if not hasattr(Config, key):
                raise AttributeError(f"Unknown configuration key: {key}")
            setattr(updated, key, value)
        return updated

    def apply(self) -> None:
        """Install this configuration as the process-wide default."""
        for key in vars(Config):
            if key.isupper():
                setattr(config, key, getattr(self, key))

    @classmethod
    def ensure_directories(cls, registry_dir: Path) -> None:
        """Create the registry layout if it doesn't exist."""
        (registry_dir / "atoms").mkdir(parents=True, exist_ok=True)


config = Config()
