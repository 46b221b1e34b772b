import json
import logging
import math
import time
from fractions import Fraction
from functools import wraps
from typing import Callable, Dict, Iterable, Optional, Tuple

from config import SCHEMA_VERSION
from errors import RootFindingError

logger = logging.getLogger(__name__)


class NumericUtils:
    """Utility class for exact/float conversions and root bracketing"""

    @staticmethod
    def to_fraction(value, max_denominator: Optional[int] = None) -> Fraction:
        """Convert int/float/str/Fraction to Fraction, optionally bounding the denominator"""
        if isinstance(value, Fraction):
            result = value
        elif isinstance(value, float):
            if not math.isfinite(value):
                raise ValueError(f"cannot convert {value!r} to a rational")
            result = Fraction(value)
        else:
            result = Fraction(value)
        if max_denominator is not None and result.denominator > max_denominator:
            result = result.limit_denominator(max_denominator)
        return result

    @staticmethod
    def bisect(func: Callable[[float], float], lo: float, hi: float,
               xtol: float, ftol: float, max_iter: int = 400) -> Tuple[float, float, int]:
        """
        Bracketing bisection for a continuous function with a sign change.

        Stops once the bracket is narrower than xtol and |f(mid)| <= ftol,
        or when the bracket can no longer be split in floating point.

        Args:
            func: function of one real variable
            lo, hi: bracket with func(lo) and func(hi) of opposite sign
            xtol: width tolerance on x
            ftol: residual tolerance on func

        Returns:
            (root, residual, iterations)
        """
        flo = func(lo)
        fhi = func(hi)
        if flo == 0:
            return lo, flo, 0
        if fhi == 0:
            return hi, fhi, 0
        if (flo > 0) == (fhi > 0):
            raise RootFindingError(
                "bracket has no sign change",
                {"lo": lo, "hi": hi, "f_lo": flo, "f_hi": fhi},
            )

        mid, fmid = lo, flo
        for iteration in range(1, max_iter + 1):
            mid = lo + (hi - lo) / 2
            if mid <= lo or mid >= hi:
                return mid, func(mid), iteration
            fmid = func(mid)
            if fmid == 0:
                return mid, fmid, iteration
            if (fmid > 0) == (flo > 0):
                lo, flo = mid, fmid
            else:
                hi = mid
            if hi - lo <= xtol and abs(fmid) <= ftol:
                return mid, fmid, iteration

        return mid, fmid, max_iter

    @staticmethod
    def exact_sum(values: Iterable[float]) -> float:
        """Correctly rounded sum; independent of order and of zero terms"""
        return math.fsum(values)


class JSONUtils:
    """Utility class for the machine-readable output surface"""

    @staticmethod
    def envelope(kind: str, payload: Dict) -> Dict:
        """Wrap a payload with the versioned schema tag"""
        return {"schema": SCHEMA_VERSION, "kind": kind, "data": payload}

    @staticmethod
    def finite_or_none(value):
        """Replace NaN and infinities, at any depth, with None"""
        if isinstance(value, float):
            return value if math.isfinite(value) else None
        if isinstance(value, dict):
            return {key: JSONUtils.finite_or_none(item) for key, item in value.items()}
        if isinstance(value, (list, tuple)):
            return [JSONUtils.finite_or_none(item) for item in value]
        return value

    @staticmethod
    def dumps(document: Dict) -> str:
        """Deterministic standard JSON (sorted keys, shortest round-trip floats, null for non-finite)"""
        return json.dumps(JSONUtils.finite_or_none(document), sort_keys=True, indent=2, allow_nan=False)

    @staticmethod
    def format_float(value) -> str:
        """17 significant digits, enough to round-trip any double"""
        if isinstance(value, bool) or value is None:
            return str(value)
        if isinstance(value, (int, Fraction)) and not isinstance(value, float):
            return str(value)
        return format(float(value), ".17g")


class LoggingUtils:
    """Utility class for logging operations"""

    @staticmethod
    def log_action(action: str, details: Optional[Dict] = None) -> Dict:
        """Log a command run as one structured line"""
        log_entry = {
            "action": action,
            "details": details or {},
        }
        logger.info(f"ACTION_LOG: {json.dumps(log_entry, default=str, sort_keys=True)}")
        return log_entry

    @staticmethod
    def log_error(error: Exception, context: Optional[Dict] = None) -> Dict:
        """Log an error with its context"""
        error_entry = {
            "error": str(error),
            "type": type(error).__name__,
            "context": context or {},
        }
        logger.error(f"ERROR_LOG: {json.dumps(error_entry, default=str, sort_keys=True)}")
        return error_entry


def log_command(action: str):
    """Decorator to log CLI command runs with their duration"""
    def decorator(f):
        @wraps(f)
        def decorated_function(args, *rest, **kwargs):
            start_time = time.perf_counter()
            try:
                result = f(args, *rest, **kwargs)
                LoggingUtils.log_action(action, {
                    "graph": getattr(args, "graph", None),
                    "duration_seconds": round(time.perf_counter() - start_time, 6),
                    "exit_code": result,
                })
                return result
            except Exception as e:
                LoggingUtils.log_error(e, {
                    "action": action,
                    "duration_seconds": round(time.perf_counter() - start_time, 6),
                })
                raise
        return decorated_function
    return decorator
