"""Exception hierarchy shared by every module of the package."""


class NpfkmError(Exception):
    """Base class for all errors raised by npfkm."""


class MalformedLine(NpfkmError, ValueError):
    def __init__(self, message, line_number=None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class EmptySelection(NpfkmError, ValueError):
    pass


class RaggedLengths(NpfkmError, ValueError):
    pass


class NonFiniteInput(NpfkmError, ValueError):
    pass


class DivergedTraining(NpfkmError, FloatingPointError):
    """Raised when an LSTM weight becomes NaN or infinite during training."""


class InsufficientHistory(NpfkmError, ValueError):
    pass


class SeriesTooShort(NpfkmError, ValueError):
    pass


class LengthMismatch(NpfkmError, ValueError):
    pass


class KTooLarge(NpfkmError, ValueError):
    """Invalid number of clusters (zero, negative, or more than the series count)."""


class SingleCluster(NpfkmError, ValueError):
    pass


class ReportWriteFailure(NpfkmError, OSError):
    pass
