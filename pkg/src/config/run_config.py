"""Run configuration: flat ``key = value`` files plus command-line overrides."""

from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from ..core.errors import ConfigurationError
from ..models.enums import Command, OutputFormat
from ..models.params import ModelParams
from ..utils.file_utils import read_key_value_file
from .settings import get_settings

_PARAM_KEYS = frozenset(ModelParams.model_fields)

# File keys that differ from field names.
_ALIASES = {
    "tfinal": "t_final",
    "out": "out_dir",
    "output_dir": "out_dir",
    "n": "N",
    "integrator_method": "method",
}


class RunConfig(BaseModel):
    """Validated settings of one CLI invocation."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    command: Optional[Command] = None
    params: ModelParams = Field(default_factory=ModelParams)
    ic: Optional[Tuple[float, float, float]] = Field(
        default=None, description="Initial condition; (x, y, z) or (u, v, w) for classify")
    t_final: float = Field(default=500.0, gt=0.0)
    rtol: float = Field(default=1e-8, gt=0.0)
    atol: float = Field(default=1e-10, gt=0.0)
    max_step: float = Field(default=0.05, gt=0.0)
    method: str = "RK45"
    k: int = Field(default=5, gt=4, description="Minimum oscillations per nested interval")
    N: Optional[int] = Field(default=None, gt=0, description="Peaks used by the scan; None uses all")
    n_peaks: int = Field(default=18, gt=2, description="Peaks used by the averaged-system fit")
    alpha: Optional[float] = Field(default=None, description="Unfolding parameter for classify; None uses alpha(h)")
    leading_order: bool = False
    out_dir: str = "output"
    format: OutputFormat = OutputFormat.CSV
    h_min: float = 0.05
    h_max: float = 0.45
    h_step: float = Field(default=0.005, gt=0.0)
    fsn_h_min: float = Field(default=0.2, ge=0.0)
    fsn_h_max: float = Field(default=0.34, gt=0.0)

    @field_validator("ic", mode="before")
    @classmethod
    def _split_ic(cls, v: Any) -> Any:
        if isinstance(v, str):
            parts = [p for p in v.replace(" ", "").split(",") if p]
            if len(parts) != 3:
                raise ValueError("ic needs three comma-separated numbers")
            return tuple(float(p) for p in parts)
        return v

    @field_validator("N", "alpha", mode="before")
    @classmethod
    def _blank_is_none(cls, v: Any) -> Any:
        if isinstance(v, str) and v.strip().lower() in {"", "all", "none"}:
            return None
        return v

    @model_validator(mode="after")
    def _check_ranges(self) -> "RunConfig":
        if self.N is not None and self.N <= self.k:
            raise ValueError(f"N must exceed k (got N={self.N}, k={self.k})")
        if self.fsn_h_max <= self.fsn_h_min:
            raise ValueError("fsn_h_max must exceed fsn_h_min")
        return self

    @property
    def output_path(self) -> Path:
        return Path(self.out_dir)


def _defaults() -> Dict[str, Any]:
    settings = get_settings()
    return {
        "rtol": settings.rtol,
        "atol": settings.atol,
        "max_step": settings.max_step,
        "method": settings.integrator_method,
        "k": settings.ews_k,
        "out_dir": settings.output_dir,
        "h_min": settings.sweep_h_min,
        "h_max": settings.sweep_h_max,
        "h_step": settings.sweep_h_step,
    }


def _normalise(raw: Mapping[str, Any], source: str) -> Dict[str, Any]:
    values: Dict[str, Any] = {}
    for key, value in raw.items():
        name = _ALIASES.get(key.lower(), key)
        if name not in RunConfig.model_fields and name not in _PARAM_KEYS:
            raise ConfigurationError(
                f"Unknown configuration key '{key}' in {source}",
                suggestion="Check the key against the documented run-config keys",
                key=key,
            )
        values[name] = value
    return values


def load_run_config(
    path: Optional[Union[str, Path]] = None,
    overrides: Optional[Mapping[str, Any]] = None,
) -> RunConfig:
    """Build a RunConfig from settings defaults, an optional file and overrides.

    Precedence is overrides > file > settings. ``None`` override values are
    ignored so unset CLI flags do not mask file values.
    """
    merged: Dict[str, Any] = _defaults()
    if path is not None:
        path = Path(path)
        if not path.is_file():
            raise ConfigurationError(f"Configuration file not found: {path}", path=str(path))
        try:
            merged.update(_normalise(read_key_value_file(path), str(path)))
        except ValueError as e:
            if isinstance(e, ConfigurationError):
                raise
            raise ConfigurationError(f"Malformed configuration file {path}: {e}", path=str(path)) from e
    if overrides:
        merged.update(_normalise({k: v for k, v in overrides.items() if v is not None}, "overrides"))

    params = {k: merged.pop(k) for k in list(merged) if k in _PARAM_KEYS}
    try:
        return RunConfig(params=ModelParams(**params), **merged)
    except ValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(p) for p in first.get("loc", ())) or "config"
        raise ConfigurationError(f"Invalid configuration value for {where}: {first.get('msg')}") from e
