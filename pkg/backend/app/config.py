"""
Runtime settings.

Values come from environment variables prefixed with ``GEOPHASE_`` or from a
``.env`` file in the working directory, e.g.

  GEOPHASE_ADIABATIC_RATIO_THRESHOLD=1e-2
  GEOPHASE_WORKERS=4
  GEOPHASE_LOG_LEVEL=DEBUG
"""
import logging
from functools import lru_cache

from dotenv import load_dotenv
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

load_dotenv()


class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_prefix="GEOPHASE_", env_file=".env", extra="ignore")

    # field_model
    adiabatic_ratio_threshold: float = Field(1e-2, gt=0)
    overlap_threshold: float = Field(0.99, gt=0, le=1)

    # gauge
    gauge_dphi: float = Field(1e-4, gt=0, le=1e-3)

    # dynamics_oracle
    min_steps_per_period: int = Field(1000, ge=1)
    full_steps_per_period: int = Field(1500, ge=1)
    min_full_steps_per_period: int = Field(100, ge=1)
    checkpoints_per_cycle: int = Field(64, ge=8)
    unitarity_tolerance: float = 1e-9
    unitarity_abort: float = 1e-7
    mixing_tolerance: float = 1e-3

    # sensitivity
    mc_block_size: int = Field(16384, ge=1)

    # sweeps / output
    workers: int = Field(1, ge=1)
    float_format: str = "%.15g"

    log_level: str = "INFO"

    # HTTP surface. Localhost only by default; extra origins are a
    # comma-separated list so a deployment can add its domain without a code change.
    cors_origins: list[str] = ["http://localhost:8000", "http://127.0.0.1:8000"]
    extra_cors_origins: str = ""

    def allowed_origins(self) -> list[str]:
        extra = [o.strip() for o in self.extra_cors_origins.split(",") if o.strip()]
        return [*self.cors_origins, *extra]


@lru_cache
def get_settings() -> Settings:
    return Settings()


def configure_logging(level: str | None = None) -> None:
    """Send log records to stderr; stdout is reserved for datasets."""
    logging.basicConfig(
        level=(level or get_settings().log_level).upper(),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
