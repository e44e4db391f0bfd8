"""Runtime configuration via Pydantic settings."""

from functools import lru_cache

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Central configuration object loaded from environment variables."""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
        populate_by_name=True,
    )

    app_name: str = "Synaptic Events"
    log_level: str = Field("INFO", alias="LOG_LEVEL")
    output_dir: str = Field("out", alias="OUTPUT_DIR")
    default_seed: int = Field(20160101, alias="DEFAULT_SEED")
    sweep_workers: int = Field(1, ge=1, alias="SWEEP_WORKERS")

    default_max_time: float = Field(100.0, gt=0, alias="MAX_TIME")
    default_stop_residual: float = Field(1e-9, gt=0, alias="STOP_RESIDUAL")
    dense_samples_per_interval: int = Field(200, ge=1, alias="DENSE_SAMPLES")
    first_hit_radius: float = Field(1e-3, gt=0, alias="FIRST_HIT_RADIUS")

    power_iteration_tol: float = Field(1e-10, gt=0, alias="POWER_ITERATION_TOL")
    power_iteration_max_iter: int = Field(10_000, ge=1, alias="POWER_ITERATION_MAX_ITER")

    bracket_growth: float = Field(1.5, ge=1.0, alias="BRACKET_GROWTH")
    bracket_chunk: int = Field(32, ge=2, alias="BRACKET_CHUNK")


@lru_cache(1)
def get_settings() -> Settings:
    """Return a cached settings instance."""
    return Settings()


settings = get_settings()
