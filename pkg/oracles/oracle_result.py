"""
Oracle Result Module
Reference value returned by every oracle.
"""

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class OracleResult:
    """Reference value, the method that produced it and an error bound when one exists."""

    value: float
    method: str
    certified_error: float = None
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if not np.isfinite(self.value):
            raise ValueError(f"oracle value must be finite, got {self.value}")
        if self.certified_error is not None and not self.certified_error >= 0:
            raise ValueError("certified_error must be non-negative")

    def as_dict(self):
        return {
            'value': self.value,
            'method': self.method,
            'certified_error': self.certified_error,
            **self.details,
        }
