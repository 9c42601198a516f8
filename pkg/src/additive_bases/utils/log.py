"""Structured logging setup shared by the library and the CLI."""

import logging
import sys

import structlog


_PROCESSORS = [
    structlog.stdlib.filter_by_level,
    structlog.stdlib.add_logger_name,
    structlog.stdlib.add_log_level,
    structlog.processors.TimeStamper(fmt="iso"),
    structlog.processors.format_exc_info,
    structlog.dev.ConsoleRenderer(colors=False),
]


def _ensure_configured() -> None:
    if not structlog.is_configured():
        structlog.configure(
            processors=_PROCESSORS,
            logger_factory=structlog.stdlib.LoggerFactory(),
            wrapper_class=structlog.stdlib.BoundLogger,
            cache_logger_on_first_use=False,
        )


def get_logger(name: str):
    """
    Return a structlog logger backed by the standard library logger `name`.

    Args:
        name: Logger name, usually the calling module's ``__name__``

    Returns:
        A bound structlog logger
    """
    _ensure_configured()
    return structlog.get_logger(name)


def configure_logging(level: str = "WARNING") -> None:
    """
    Route log records to stderr at the given level.

    Args:
        level: Standard logging level name (DEBUG, INFO, WARNING, ERROR)
    """
    numeric_level = getattr(logging, level.upper(), None)
    if not isinstance(numeric_level, int):
        raise ValueError(f"Unknown log level: {level}")

    logging.basicConfig(
        format="%(message)s",
        stream=sys.stderr,
        level=numeric_level,
        force=True,
    )
    _ensure_configured()
