"""Exception hierarchy shared by all modules."""


class Reflect6VError(Exception):
    """Base class for every error raised by this package."""


class SingularBoundary(Reflect6VError):
    pass


class SingularAlgebraCoefficient(Reflect6VError):
    pass


class SingularKernel(Reflect6VError):
    pass


class SingularAuxFunction(Reflect6VError):
    pass


class CoincidentParameters(Reflect6VError):
    pass


class DivisionByZeroPartition(Reflect6VError):
    pass


class MemoryBudget(Reflect6VError):
    pass


class SizeCap(Reflect6VError):
    pass


class NotSquare(Reflect6VError):
    pass


class IndexOutOfRange(Reflect6VError):
    pass


class TruncationTooShallow(Reflect6VError):
    pass


class DegenerateMoments(Reflect6VError):
    pass


class ConfigInvalid(Reflect6VError):
    pass
