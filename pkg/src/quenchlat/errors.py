"""Exception types raised across quenchlat."""


class QuenchlatError(Exception):
    """Base class for all package errors."""


class CellTooLarge(QuenchlatError):
    pass


class ZeroNorm(QuenchlatError):
    pass


class NotGaussian(QuenchlatError):
    """The cell state is not a Slater determinant (G is not a projector)."""


class NotACorrelationMatrix(QuenchlatError):
    pass


class DegenerateRegion(QuenchlatError):
    pass


class DegenerateVelocities(QuenchlatError):
    pass


class GeometryStateMismatch(QuenchlatError):
    pass


class NotClassical(QuenchlatError):
    pass


class IncommensurateCell(QuenchlatError):
    pass


class ConfigError(QuenchlatError):
    pass


class UnknownFigure(QuenchlatError):
    pass
