"""Exception types raised across the package."""


class PBMetricError(Exception):
    """Base class for every error raised by pbmetric."""


class StructuralError(PBMetricError, ValueError):
    """The distance table is malformed: negative, asymmetric, or mis-shaped."""


class AxiomError(PBMetricError, ValueError):
    """An operation needs axioms that the space does not satisfy."""


class ParameterError(PBMetricError, ValueError):
    """A numeric parameter lies outside its admissible range."""


class PreconditionError(PBMetricError, ValueError):
    """A mathematical precondition of an operation does not hold."""


class DivergenceError(PBMetricError, ArithmeticError):
    """A series that was required to converge does not."""

    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class GenerationError(PBMetricError, RuntimeError):
    """Random instance generation ran out of its resampling budget."""

    def __init__(self, message, seed=None):
        super().__init__(message)
        self.seed = seed


class FormatError(PBMetricError, ValueError):
    """A space, map or report file does not follow the expected layout."""

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field
