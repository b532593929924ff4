from typing import Any, Optional, Sequence


class PackingError(Exception):
    """Base class for every error raised by the packing toolkit."""


# --- Mesh ---

class MeshError(PackingError, ValueError):
    pass

class NonManifoldEdgeError(MeshError):
    pass

class NoBoundaryError(MeshError):
    pass

class FaceAllBoundaryError(MeshError):
    pass

class DegenerateFaceError(MeshError):
    pass

class IsolatedInteriorVertexError(MeshError):
    pass

class UnknownVertexError(MeshError, KeyError):
    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "unknown vertex"

class NotInteriorVertexError(MeshError):
    pass

class BoundaryMismatchError(MeshError):
    pass


# --- Geometry ---

class NonPositiveCurvatureError(PackingError, ValueError):
    pass

class DualCurvatureOutOfRangeError(PackingError, ValueError):
    pass


# --- Solver ---

class TooLargeForEnumerationError(PackingError, ValueError):
    pass

class InfeasibleTargetError(PackingError, ValueError):
    def __init__(self, message: str, witness: Sequence[int] = ()):
        super().__init__(message)
        self.witness = tuple(witness)

class NotConvergedError(PackingError, RuntimeError):
    """Raised when a solve stops without meeting its tolerance.

    `result` holds the last state as a SolveResult (converged=False), so the
    trace can still be written out.
    """

    def __init__(self, message: str, result: Optional[Any] = None):
        super().__init__(message)
        self.result = result

    @property
    def trace(self):
        return self.result.trace if self.result is not None else []

class SingularSystemError(PackingError, RuntimeError):
    pass

class JacobianInconsistencyError(PackingError, RuntimeError):
    pass


# --- Analysis ---

class MeshMismatchError(PackingError, ValueError):
    pass

class TargetMismatchError(PackingError, ValueError):
    pass

class HypothesisViolatedError(PackingError, ValueError):
    pass

class OrderingNotEstablishedError(PackingError, ValueError):
    pass

class InvalidChainError(PackingError, ValueError):
    pass


# --- Layout ---

class LayoutNotConvergedError(PackingError, RuntimeError):
    pass


# --- Files ---

class ProblemFileError(PackingError, ValueError):
    pass
