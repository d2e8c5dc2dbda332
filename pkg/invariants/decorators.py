"""
Logging decorator for suite checks
"""
import logging
import time
from functools import wraps

logger = logging.getLogger('invariants')


def log_check(func):
    """
    Log start, verdicts and wall time of a function returning a Check or
    a list of Checks. Wall time goes to the log only, never to reports.
    """
    @wraps(func)
    def _wrapped(*args, **kwargs):
        logger.debug(f"starting {func.__name__}")
        started = time.perf_counter()
        result = func(*args, **kwargs)
        elapsed = time.perf_counter() - started
        checks = result if isinstance(result, list) else [result]
        for check in checks:
            level = logging.INFO if check.status == 'pass' else logging.WARNING
            logger.log(level, f"{check.name}: {check.status} [{check.mode}, {check.trials} trials]")
        logger.debug(f"{func.__name__} finished in {elapsed:.2f}s")
        return result
    return _wrapped
