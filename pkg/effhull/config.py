"""
Numerical configuration: tolerances, iteration caps and experiment defaults
loaded from environment variables via pydantic-settings.  A single
`settings` instance is used across the package; every operation accepts an
explicit ``cfg`` that overrides it.
"""

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class ToleranceConfig(BaseSettings):
    """Typed, validated tolerances sourced from `.env` / ``EFFHULL_*`` variables."""

    model_config = SettingsConfigDict(
        env_prefix="EFFHULL_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
        frozen=True,
    )

    # ── Ratio comparisons ─────────────────────────────────────────────────
    rtol: float = Field(1e-9, gt=0, lt=1)        # equality of ratios
    edge_rtol: float = Field(1e-9, gt=0, lt=1)   # w_i >= a_ij w_j (1 - edge_rtol)

    # ── Power iteration ───────────────────────────────────────────────────
    power_tol: float = Field(1e-12, gt=0, lt=1)
    max_iters: int = Field(10_000, ge=1)

    # ── Witness ε-search ──────────────────────────────────────────────────
    eps0: float = Field(0.5, gt=0, lt=1)
    eps_shrink: float = Field(0.5, gt=0, lt=1)
    eps_max_steps: int = Field(60, ge=1)

    # ── Recursive efficiency test (oracle only) ───────────────────────────
    recursive_max_n: int = Field(12, ge=3)

    # ── Experiments ───────────────────────────────────────────────────────
    default_trials: int = Field(10_000, ge=1)
    compare_trials: int = Field(100, ge=1)
    workers: int = Field(1, ge=1)

    # ── Output ────────────────────────────────────────────────────────────
    significant_digits: int = Field(12, ge=1, le=17)
    log_level: str = "WARNING"

    def with_overrides(self, **overrides) -> "ToleranceConfig":
        """Return a re-validated copy with the non-``None`` overrides applied."""
        values = self.model_dump()
        values.update({k: v for k, v in overrides.items() if v is not None})
        return ToleranceConfig(**values)


settings = ToleranceConfig()
