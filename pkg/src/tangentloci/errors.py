"""Exception hierarchy shared by all modules."""


class TangentLociError(Exception):
    """Base class for every error raised by this package."""


class InputError(TangentLociError, ValueError):
    pass


class DependentQuadrics(TangentLociError):
    pass


class RankMismatch(TangentLociError):
    pass


class RankTooLow(TangentLociError):
    pass


class PencilInsideDeterminantal(TangentLociError):
    """det(lam*Q1 + mu*Q2) vanishes identically along the pencil."""


class NotSingularPencil(TangentLociError):
    pass


class Indeterminate(TangentLociError):
    """A cross-ratio of the form 0/0."""


class DegenerateParameter(TangentLociError):
    pass


class NoIntersection(TangentLociError):
    pass


class NotFixedVertex(TangentLociError):
    pass


class ClusteredRoots(TangentLociError):
    pass


class NotInPerspective(TangentLociError):
    pass


class NoSolution(TangentLociError):
    pass


class PlaneThroughVertex(TangentLociError):
    pass


class CoincidentVertices(TangentLociError):
    pass


class CoincidentPoints(TangentLociError):
    pass


class AtInfinity(TangentLociError):
    pass


class NullDirection(TangentLociError):
    pass


class Singular(TangentLociError):
    pass


class NonGeneric(TangentLociError):
    pass


class NonGenericPair(NonGeneric):
    pass


class SingularIntersection(TangentLociError):
    pass


class DuplicateCenters(TangentLociError):
    pass


class ThreeCollinear(TangentLociError):
    pass


class FrameDegenerate(TangentLociError):
    pass


class DefectiveCount(TangentLociError):
    """The finite solver did not account for all twelve solutions."""

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class BorderlineGeometry(UserWarning):
    """Center geometry sits inside the hysteresis band between two regimes."""


class PerturbedSolution(UserWarning):
    """Tangents were recovered by the perturbation fallback."""
