"""Application settings and configuration."""

from typing import Optional

from pydantic import Field
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Application settings."""

    # Application
    app_name: str = Field(default="slowfast-ews", description="Application name")
    version: str = Field(default="1.0.0", description="Toolkit version")
    debug: bool = Field(default=False, description="Debug mode")

    # Output
    output_dir: str = Field(default="output", description="Default directory for run artifacts")

    # Integrator defaults
    rtol: float = Field(default=1e-8, gt=0, description="Relative tolerance of the adaptive integrator")
    atol: float = Field(default=1e-10, gt=0, description="Absolute tolerance of the adaptive integrator")
    max_step: float = Field(default=0.05, gt=0, description="Largest accepted integration step")
    integrator_method: str = Field(default="RK45", description="Embedded Runge-Kutta pair used by solve_ivp")

    # Equilibrium solver
    newton_tol: float = Field(default=1e-10, gt=0, description="Residual tolerance for equilibria")
    newton_max_iter: int = Field(default=100, gt=0, description="Newton iteration cap")

    # Early-warning defaults
    ews_k: int = Field(default=5, gt=4, description="Minimum oscillations per nested interval")
    ews_samples_per_window: int = Field(default=256, gt=8, description="Quadrature panels per averaging window")

    # Bifurcation sweep defaults
    sweep_h_min: float = Field(default=0.05, description="Lower end of the h sweep")
    sweep_h_max: float = Field(default=0.45, description="Upper end of the h sweep")
    sweep_h_step: float = Field(default=0.005, gt=0, description="Natural-parameter continuation step")
    sweep_workers: int = Field(default=3, gt=0, description="Branches continued concurrently")

    # Logging
    log_level: str = Field(default="INFO", description="Logging level")
    log_json: bool = Field(default=True, description="Render log events as JSON")
    log_file: Optional[str] = Field(default=None, description="Optional log file path")

    class Config:
        env_file = ".env"
        case_sensitive = False


# Global settings instance
_settings: Optional[Settings] = None


def get_settings() -> Settings:
    """Get application settings (singleton pattern)."""
    global _settings
    if _settings is None:
        _settings = Settings()
    return _settings


def reset_settings() -> None:
    """Drop the cached settings so the next access re-reads the environment."""
    global _settings
    _settings = None
