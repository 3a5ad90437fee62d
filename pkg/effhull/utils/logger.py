"""
Structured logging configuration.

Usage:
    from effhull.utils.logger import get_logger
    logger = get_logger(__name__)
    logger.info("Cell done: n=%d a13=%g", n, a13)

Every logger is a child of the ``effhull`` package logger, which owns the only
handler.  Diagnostics go to stderr; stdout is reserved for command results.
"""

import logging
import sys
from typing import Optional

from effhull.config import settings

ROOT = "effhull"
FORMAT = "%(asctime)s | %(levelname)-8s | %(module_path)s | %(message)s"


class _StderrHandler(logging.StreamHandler):
    """Writes to whatever ``sys.stderr`` is at emit time."""

    def __init__(self):
        super().__init__(sys.stderr)

    @property
    def stream(self):
        return sys.stderr

    @stream.setter
    def stream(self, _value):
        pass


class _ModulePathFilter(logging.Filter):
    """``effhull.services.efficiency`` → ``services.efficiency``."""

    def filter(self, record: logging.LogRecord) -> bool:
        name = record.name
        record.module_path = name[len(ROOT) + 1:] if name.startswith(ROOT + ".") else name
        return True


def _package_logger() -> logging.Logger:
    root = logging.getLogger(ROOT)
    if not any(isinstance(h, _StderrHandler) for h in root.handlers):
        handler = _StderrHandler()
        handler.addFilter(_ModulePathFilter())
        handler.setFormatter(logging.Formatter(fmt=FORMAT, datefmt="%Y-%m-%d %H:%M:%S"))
        root.addHandler(handler)
        root.setLevel(settings.log_level.upper())
        root.propagate = False
    return root


def get_logger(name: Optional[str] = None) -> logging.Logger:
    """Return a logger under the ``effhull`` package logger.

    Args:
        name: Logger name, typically ``__name__`` of the calling module.
            Names outside the package are nested under ``effhull``.

    Returns:
        A ``logging.Logger`` whose records reach the shared stderr handler.
    """
    root = _package_logger()
    if not name or name == ROOT:
        return root
    if not name.startswith(ROOT + "."):
        name = f"{ROOT}.{name}"
    return logging.getLogger(name)


def set_level(level: str) -> None:
    """Change the threshold of every ``effhull`` logger at once."""
    _package_logger().setLevel(level.upper())
