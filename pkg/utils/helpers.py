"""
General helper utilities.
"""

import hashlib
import json
import time
from datetime import datetime, timezone
from functools import wraps

import numpy as np


def get_current_timestamp():
    """
    Get current UTC timestamp.

    Returns:
        datetime: Current UTC timestamp
    """
    return datetime.now(timezone.utc)


def get_current_timestamp_iso():
    """
    Get current UTC timestamp as ISO string.

    Returns:
        str: Current UTC timestamp in ISO format
    """
    return get_current_timestamp().isoformat()


def measure_execution_time(logger):
    """
    Decorator to log function execution time at debug level.

    Args:
        logger: Logger receiving the timing line

    Returns:
        function: Decorator
    """
    def decorator(func):
        @wraps(func)
        def wrapper(*args, **kwargs):
            start_time = time.perf_counter()
            result = func(*args, **kwargs)
            execution_time = time.perf_counter() - start_time
            logger.debug(f"{func.__name__} executed in {execution_time:.3f} seconds")
            return result

        return wrapper
    return decorator


def parse_grid(description):
    """
    Parse a grid description into a list of floats.

    Accepts `start:stop:step` (inclusive of stop when it lies on the grid),
    a comma-separated list, or a single number.

    Args:
        description (str): Grid description

    Returns:
        list: Grid values in increasing order
    """
    text = str(description).strip()
    if ':' in text:
        parts = [float(part) for part in text.split(':')]
        if len(parts) != 3:
            raise ValueError(f"Grid '{description}' must look like start:stop:step")
        start, stop, step = parts
        if step <= 0 or stop < start:
            raise ValueError(f"Grid '{description}' must have step > 0 and stop >= start")
        count = int(np.floor((stop - start) / step + 1e-9)) + 1
        return [float(start + i * step) for i in range(count)]

    values = sorted(float(part) for part in text.split(',') if part.strip())
    if not values:
        raise ValueError(f"Grid '{description}' is empty")
    return values


def digest_inputs(payload):
    """
    Short stable digest of a JSON-serializable payload.

    Args:
        payload: Inputs of a computation

    Returns:
        str: First 12 hex digits of the SHA-256 of the canonical JSON
    """
    canonical = json.dumps(payload, sort_keys=True, default=float)
    return hashlib.sha256(canonical.encode('utf-8')).hexdigest()[:12]


def json_ready(value, digits=17):
    """
    Convert nested results into plain JSON types.

    numpy scalars and arrays become Python numbers and lists, floats keep
    `digits` significant digits, and NaN or infinities become None.

    Args:
        value: Nested dict/list/tuple of numbers, strings and arrays
        digits (int): Significant digits kept for floats

    Returns:
        Plain JSON-serializable structure
    """
    if isinstance(value, dict):
        return {str(key): json_ready(item, digits) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [json_ready(item, digits) for item in value]
    if isinstance(value, np.ndarray):
        return json_ready(value.tolist(), digits)
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        number = float(value)
        if not np.isfinite(number):
            return None
        return float(f"{number:.{digits}g}")
    return value
