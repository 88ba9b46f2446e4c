class PhysarumError(Exception):
    """Base class for every error raised by this package."""


class GraphError(PhysarumError, ValueError):
    pass


class DisconnectedGraph(GraphError):
    pass


class DuplicateEdge(GraphError):
    pass


class NonPositiveWeight(GraphError):
    pass


class InvalidTerminal(GraphError):
    pass


class GenerationFailed(GraphError):
    pass


class ParseError(GraphError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class MetadataMismatch(ParseError):
    pass


class NonFiniteConductivity(PhysarumError, ValueError):
    pass


class SolveFailed(PhysarumError, ArithmeticError):
    """The pressure system could not be solved (collapsed or non-finite conductivities)."""


class DPathExtractionFailed(PhysarumError):
    pass


class Unconfirmed(PhysarumError):
    """The iteration budget ran out before a T-Point could be confirmed."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report
