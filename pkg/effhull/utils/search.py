"""
ε-search decorator for the inefficiency witness constructions.

The constructions only hold "for ε sufficiently small", so a candidate is
built for a decreasing sequence of ε values and the first one that passes
certification is returned.
"""

import functools
from typing import Callable

from effhull.errors import SearchExhaustedError
from effhull.utils.logger import get_logger

logger = get_logger(__name__)


class Rejected(Exception):
    """Raised by a wrapped builder to reject the candidate for the current ε."""


def shrinking_search(eps0: float, shrink: float, max_steps: int) -> Callable:
    """Decorator that retries a builder with ε = eps0, eps0·shrink, ... .

    Args:
        eps0: First ε tried.
        shrink: Multiplicative factor applied after each rejection.
        max_steps: Total number of attempts before giving up.

    The builder is called as ``func(eps, *args, **kwargs)``; it rejects a
    candidate by returning ``None`` or raising `Rejected`.  The last
    rejection reason is stored on the wrapper as ``.last_error``.
    """
    def decorator(func: Callable) -> Callable:
        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            eps = eps0
            wrapper.last_error = None
            for attempt in range(1, max_steps + 1):
                try:
                    result = func(eps, *args, **kwargs)
                    if result is None:
                        raise Rejected(f"{func.__name__} returned None")
                    wrapper.last_error = None
                    logger.debug("%s accepted at ε=%.3g (attempt %d).", func.__name__, eps, attempt)
                    return result
                except Rejected as exc:
                    wrapper.last_error = str(exc)
                    logger.debug(
                        "%s attempt %d/%d rejected at ε=%.3g (%s).",
                        func.__name__, attempt, max_steps, eps, exc,
                    )
                    eps *= shrink
            logger.error("%s exhausted %d ε steps: %s", func.__name__, max_steps, wrapper.last_error)
            raise SearchExhaustedError(
                f"{func.__name__}: no certified candidate after {max_steps} steps "
                f"(last: {wrapper.last_error})"
            )
        wrapper.last_error = None
        return wrapper
    return decorator
