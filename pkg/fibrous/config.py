"""Configuration management for fibrous-spaces."""

from functools import lru_cache
from typing import Optional

from pydantic import Field
from pydantic_settings import BaseSettings


class FibrousSettings(BaseSettings):
    """Settings loaded from FTK_* environment variables."""

    # Largest carrier for which the 2^|X| subset scan is run as an oracle
    exhaustive_bound: int = Field(default=12, ge=0)

    # Search bound for the function-space alpha
    function_space_n_max: int = Field(default=64, ge=0)

    log_level: str = Field(default="WARNING")
    log_json: bool = Field(default=False, description="Emit logs as JSON lines")

    model_config = {
        "env_prefix": "FTK_",
        "env_file": ".env",
        "env_file_encoding": "utf-8",
        "extra": "ignore",
    }


@lru_cache()
def get_settings() -> FibrousSettings:
    """Return cached settings."""

    return FibrousSettings()


def resolve_bound(bound: Optional[int]) -> int:
    """Return the explicit exhaustive bound, or the configured default."""
    if bound is not None:
        return bound
    return get_settings().exhaustive_bound
