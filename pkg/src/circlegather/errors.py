"""Exception types shared across the package."""


class CircleGatherError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(CircleGatherError):
    """Malformed input document or angle literal."""


class MultiplicityPresent(CircleGatherError):
    """Operation requires a configuration with all robots at distinct points."""


class MultiplicityInSnapshot(CircleGatherError):
    """Hypothesis reasoning is only defined for multiplicity-free snapshots."""


class LengthMismatch(CircleGatherError):
    """Sequences of different lengths cannot be compared."""


class SymmetricConfiguration(CircleGatherError):
    """Operation requires a rotationally asymmetric configuration."""


class AmbiguousSymmetric(CircleGatherError):
    """Both antipodal hypotheses are rotationally symmetric.

    This cannot arise from a legal run and signals harness misuse.
    """


class NotConfusedLeader(CircleGatherError):
    """Operation is only defined for observers classified as confused leaders."""


class UnknownRobot(CircleGatherError):
    """Referenced robot id or position is not part of the configuration."""


class ContractViolation(CircleGatherError):
    """A value violates an interface contract (e.g. a snapshot offset of 1/2)."""


class InvariantViolation(CircleGatherError):
    """A checked model invariant failed; aborts with diagnostics."""


class ObserverMoving(CircleGatherError):
    """A robot never takes a snapshot during its own move."""


class TimeOutOfRange(CircleGatherError):
    """Queried time lies outside the simulated horizon."""


class ScheduleError(CircleGatherError):
    """A scripted schedule violates the per-robot activation rules."""


class GenerationExhausted(CircleGatherError):
    """Rejection sampling hit its retry cap without a legal configuration."""


class LimitExceeded(CircleGatherError):
    """Simulation hit its event or time limit; carries the partial trace."""

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace
