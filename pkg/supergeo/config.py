"""Library configuration using environment variables."""

from functools import lru_cache

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Settings loaded from SUPERGEO_* environment variables."""

    model_config = SettingsConfigDict(
        env_prefix="SUPERGEO_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
    )

    # Reproducibility
    seed: int = 1
    log_level: str = "INFO"

    # Grassmann algebra
    num_generators: int = 16
    num_physical: int = 8  # the rest is reserved for the AD layer

    # Tolerances
    exact_tol: float = 1e-12
    table_tol: float = 1e-9
    invariance_tol: float = 1e-9
    ode_tol: float = 1e-6

    # Series
    series_eps: float = 1e-16
    max_series_terms: int = 400

    # Integrator
    rk4_step: float = 1e-3
    rk4_span: float = 20.0

    # Output
    output_dir: str = "reports"
    record_timing: bool = False  # wall time breaks byte-identical reports

    @property
    def num_aux(self) -> int:
        """Number of generators the AD layer may claim."""
        return self.num_generators - self.num_physical


@lru_cache
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()
