"""
Monitoring and error tracking integration.

Supports Sentry for error tracking. Configure via environment variables;
nothing is sent unless GPMCOLOR_SENTRY_DSN is set.
"""

import logging
from typing import Optional

import sentry_sdk
from sentry_sdk.integrations.logging import LoggingIntegration

from app.config import settings


logger = logging.getLogger(__name__)


def init_sentry() -> bool:
    """
    Initialize the Sentry SDK when a DSN is configured.

    Configuration via environment variables:
        - GPMCOLOR_SENTRY_DSN: Sentry project DSN (required)
        - GPMCOLOR_SENTRY_ENVIRONMENT: Environment name
        - GPMCOLOR_SENTRY_TRACES_SAMPLE_RATE: Fraction of runs to trace (0.0-1.0)

    Returns:
        True if Sentry was initialized.
    """
    if not settings.SENTRY_DSN:
        logger.debug("Sentry DSN not configured. Skipping Sentry initialization.")
        return False

    try:
        logging_integration = LoggingIntegration(
            level=logging.INFO,        # Capture info and above as breadcrumbs
            event_level=logging.ERROR  # Send errors as events
        )
        sentry_sdk.init(
            dsn=settings.SENTRY_DSN,
            environment=settings.SENTRY_ENVIRONMENT,
            traces_sample_rate=settings.SENTRY_TRACES_SAMPLE_RATE,
            integrations=[logging_integration],
            release=settings.APP_VERSION,
            attach_stacktrace=True,
            send_default_pii=False,
        )
        sentry_sdk.set_tag("service", "gpmcolor-cli")
        sentry_sdk.set_tag("version", settings.APP_VERSION)
        logger.info(f"Sentry initialized. Environment: {settings.SENTRY_ENVIRONMENT}")
        return True

    except Exception as e:
        logger.error(f"Failed to initialize Sentry: {e}")
        return False


def capture_exception(error: Exception, context: Optional[dict] = None) -> None:
    """
    Manually capture an exception to Sentry.

    Args:
        error: The exception to capture.
        context: Additional context to attach to the event.

    Example:
        try:
            list_color(pair, lists)
        except InvariantViolation as e:
            capture_exception(e, {"run": {"command": "list-color"}})
    """
    if context:
        with sentry_sdk.push_scope() as scope:
            for key, value in context.items():
                scope.set_context(key, value)
            sentry_sdk.capture_exception(error)
    else:
        sentry_sdk.capture_exception(error)


def add_breadcrumb(message: str, category: str = "cli", level: str = "info", data: Optional[dict] = None) -> None:
    """
    Add a breadcrumb recording a step leading up to a possible error.

    Args:
        message: Breadcrumb message.
        category: Category for grouping (e.g., "cli", "solver").
        level: Severity level.
        data: Additional structured data.
    """
    sentry_sdk.add_breadcrumb(
        message=message,
        category=category,
        level=level,
        data=data or {}
    )
