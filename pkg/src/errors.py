class MipsError(Exception):
    """Base class for every error raised by the toolkit."""


class ArgumentError(MipsError, ValueError):
    pass


class VectorFormatError(MipsError, ValueError):
    pass


class VectorLengthError(MipsError, ValueError):
    pass


class VectorDataError(MipsError, ValueError):
    pass


class DegenerateDataError(MipsError, ValueError):
    pass


class StorageError(MipsError, OSError):
    pass


class CalibrationError(MipsError, RuntimeError):
    def __init__(self, message, achievable=None):
        super(CalibrationError, self).__init__(message)
        self.achievable = achievable
