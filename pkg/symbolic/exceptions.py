"""
Exception hierarchy for the symbolic engine
"""


class EngineError(Exception):
    """
    Base class for every error raised by the engine
    """

    def to_dict(self):
        return {'error': type(self).__name__, 'message': str(self)}


class InputError(EngineError):
    """
    Errors caused by user input (exit status 2)
    """


class VerificationError(EngineError):
    """
    Errors reporting a failed identity (exit status 1)
    """


class DivisionByZeroExpr(EngineError):
    pass


class CyclicBinding(EngineError):
    pass


class UnboundVariable(EngineError):
    pass


class PoleAtPoint(EngineError):
    """
    A denominator vanished at the evaluation point
    """


class ExpansionOverflow(InputError):
    pass


class SourceSyntaxError(InputError):
    """
    Syntax error carrying the (start, end) span of the offending text
    """

    def __init__(self, message, span=None):
        self.span = span
        if span is not None:
            message = f"{message} at {span[0]}:{span[1]}"
        super().__init__(message)

    def to_dict(self):
        data = super().to_dict()
        data['span'] = list(self.span) if self.span else None
        return data


class UnknownIdentifier(SourceSyntaxError):
    pass


class ZeroDenominator(SourceSyntaxError):
    """
    A quotient or negative power in the source whose denominator is
    identically zero
    """


class NotReal(InputError):
    def __init__(self, message, witness=None):
        self.witness = witness or {}
        super().__init__(message)

    def to_dict(self):
        data = super().to_dict()
        data['witness'] = self.witness
        return data


class IllegalVariable(InputError):
    pass


class JetOrderExceeded(InputError):
    pass


class SingularLocusExhausted(EngineError):
    pass


class DegreeOverflow(EngineError):
    pass


class UnrewritableCoefficient(EngineError):
    pass


class SingularBasis(EngineError):
    pass


class AlreadyBound(EngineError):
    pass


class UnboundSbar(EngineError):
    pass


class RenderTooLarge(InputError):
    pass


class SuiteFailed(VerificationError):
    def __init__(self, message, check=None):
        self.check = check
        super().__init__(message)
