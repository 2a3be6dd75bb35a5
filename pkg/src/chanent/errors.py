"""Exception hierarchy shared by every module."""


class ChannelEntropyError(ValueError):
    """Base class for all errors raised by :mod:`chanent`."""


class NotHermitian(ChannelEntropyError):
    pass


class NotPSD(ChannelEntropyError):
    pass


class NotUnitary(ChannelEntropyError):
    pass


class DimensionMismatch(ChannelEntropyError):
    pass


class SingularState(ChannelEntropyError):
    pass


class ConvergenceFailure(ChannelEntropyError):
    pass


class NotTracePreserving(ChannelEntropyError):
    pass


class NotCPTP(ChannelEntropyError):
    pass


class NotUnital(ChannelEntropyError):
    pass


class NotQubit(ChannelEntropyError):
    pass


class POutOfRange(ChannelEntropyError):
    pass


class InvalidParameter(ChannelEntropyError):
    pass


class SingularMarginal(ChannelEntropyError):
    pass


class InsufficientTrials(ChannelEntropyError):
    pass


class ParseError(ChannelEntropyError):
    pass
