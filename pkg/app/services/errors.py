"""
Exception hierarchy shared by the solver services.

`InstanceError` covers bad input (CLI exit status 2); `InvariantViolation`
means the solver broke one of its own guarantees (exit status 3).
"""


class SolverError(Exception):
    """Base exception for GPMColor errors."""
    pass


class InstanceError(SolverError, ValueError):
    """Raised when an instance, coloring or list file is malformed."""
    pass


class InvariantViolation(SolverError, AssertionError):
    """Raised when an internal guarantee fails. Always a bug."""
    pass


# Matroid construction
class OverlappingParts(InstanceError):
    pass


class UncoveredElement(InstanceError):
    pass


class NonPositiveCap(InstanceError):
    pass


class LengthMismatch(InstanceError):
    pass


class EmptyPart(InstanceError):
    pass


# Index checks
class ElementOutOfRange(InstanceError):
    pass


class EdgeIndexOutOfRange(InstanceError):
    pass


class VertexOutOfRange(InstanceError):
    pass


class IsolatedVertex(InstanceError):
    pass


class MalformedInstance(InstanceError):
    pass


# Coloring and list inputs
class InvalidPartial(InstanceError):
    pass


class AlreadyCovered(InstanceError):
    pass


class IncompleteColoring(InstanceError):
    pass


class ListTooShort(InstanceError):
    """Raised when some list is shorter than χ; `elements` names the offenders."""

    def __init__(self, message: str, elements: tuple[int, ...] = ()):
        super().__init__(message)
        self.elements = elements


class InstanceTooLarge(InstanceError):
    pass


# Internal failures
class InternalInfeasible(InvariantViolation):
    pass


class NoKernelFound(InvariantViolation):
    pass


class InternalInvariantViolated(InvariantViolation):
    pass
