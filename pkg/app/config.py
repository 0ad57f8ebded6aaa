"""
Configuration management for GPMColor.

Uses Pydantic Settings to load operational defaults (oracle limits, logging,
monitoring). Solver behaviour itself is driven by CLI flags only.
"""

from typing import Optional
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """
    Application settings loaded from environment variables or a .env file.

    Attributes:
        APP_TITLE: Name printed in the CLI help.
        APP_VERSION: Version string.
        LOG_LEVEL: Default logging level before -v/-q adjustments.
        BRUTE_MAX_ELEMENTS: Largest ground set the exhaustive oracles accept.
        BRUTE_MAX_LIST_PRODUCT: Largest product of list sizes brute_list_color accepts.
        CHECK_INVARIANTS: Re-verify kernels and the list-coloring ledger at runtime.
    """

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        env_prefix="GPMCOLOR_",
        case_sensitive=True,
        extra="ignore"
    )

    # Application
    APP_TITLE: str = "GPMColor"
    APP_VERSION: str = "1.0.0"
    APP_DESCRIPTION: str = (
        "Optimal and list colorings of the intersection of two "
        "generalized partition matroids"
    )
    LOG_LEVEL: str = "INFO"

    # Oracle guards
    BRUTE_MAX_ELEMENTS: int = 12
    BRUTE_MAX_LIST_PRODUCT: int = 10**7

    # Runtime assertions (kernel re-check, Γ/t/T ledger)
    CHECK_INVARIANTS: bool = True

    # Monitoring Configuration
    SENTRY_DSN: Optional[str] = None
    SENTRY_ENVIRONMENT: str = "production"
    SENTRY_TRACES_SAMPLE_RATE: float = 0.0

    def validate_settings(self) -> None:
        """
        Validate critical settings.

        Raises:
            ValueError: If a limit is not positive or the log level is unknown.
        """
        if self.BRUTE_MAX_ELEMENTS < 1 or self.BRUTE_MAX_LIST_PRODUCT < 1:
            raise ValueError("oracle limits must be positive")
        if self.LOG_LEVEL.upper() not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
            raise ValueError(f"unknown LOG_LEVEL {self.LOG_LEVEL!r}")


# Global settings instance
settings = Settings()
