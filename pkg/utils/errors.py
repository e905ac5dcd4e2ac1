"""
Error types shared by every stage.
Input problems map to exit code 2, numerical failures to exit code 3.
"""


class HalfSpecError(Exception):
    """Base class; `stage` names the computation that failed."""

    default_stage = "halfspec"

    def __init__(self, message, stage=None):
        super().__init__(message)
        self.stage = stage or self.default_stage


class InputError(HalfSpecError, ValueError):
    default_stage = "input"


class NumericalFailure(HalfSpecError, RuntimeError):
    default_stage = "numerics"


class InvalidParameters(InputError):
    default_stage = "params"


class IndexOutOfRange(InputError):
    default_stage = "spectrum"


class ZeroValueAtCritical(InputError):
    default_stage = "picard"


class SingularSlope(NumericalFailure):
    default_stage = "operator"


class QuadratureFailure(NumericalFailure):
    default_stage = "picard"


class NoConvergence(NumericalFailure):
    default_stage = "picard"


class CriticalProximity(NumericalFailure):
    default_stage = "integrator"

    def __init__(self, message, state=None, stage=None):
        super().__init__(message, stage)
        self.state = state


class StepFailure(NumericalFailure):
    default_stage = "integrator"


class StitchMismatch(NumericalFailure):
    default_stage = "stitching"


class OscillationTimeout(NumericalFailure):
    default_stage = "shooting"


class BracketFailure(NumericalFailure):
    default_stage = "annulus"


class PolicyCycleDetected(NumericalFailure):
    default_stage = "fd_pucci"


class NonConvergence(NumericalFailure):
    default_stage = "oracle"
