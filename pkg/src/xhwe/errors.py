"""Exception hierarchy shared by every module of the package."""


class XHWEError(ValueError):
    """Base class for all domain errors raised by xhwe."""


class InputError(XHWEError):
    """Malformed input row; carries the 1-based line number."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class NegativeCount(InputError):
    pass


class NPRMaleHeterozygote(InputError):
    pass


class EmptySex(XHWEError):
    pass


class DegenerateLocus(XHWEError):
    """A frequency needed by a test is 0 or 1 (monomorphic sample)."""


class WrongRegion(XHWEError):
    pass


class ExternalFrequencyOutOfRange(XHWEError):
    pass


class VarianceNonpositive(XHWEError):
    pass


class InvalidDf(XHWEError):
    pass


class NegativeStatistic(XHWEError):
    pass


class WeightOutOfRange(XHWEError):
    pass


class AlphaOutOfRange(XHWEError):
    pass


class InfeasibleDisequilibrium(XHWEError):
    pass


class EmptyRun(XHWEError):
    pass


class MissingColumn(InputError):
    pass


class BadRegionTag(InputError):
    pass


class CountParseError(InputError):
    pass
