"""Exception hierarchy shared by every stage of the pipeline."""


class EcgiError(Exception):
    """Base class; the CLI maps any subclass to exit code 1."""


class UnreadableFile(EcgiError):
    pass


class UnsupportedFormat(EcgiError):
    pass


class TooSmall(EcgiError):
    pass


class RoiOutOfBounds(EcgiError):
    pass


class DimensionMismatch(EcgiError):
    pass


class EmptyImage(EcgiError):
    pass


class InvalidPmf(EcgiError):
    pass


class LengthMismatch(EcgiError):
    pass


class TooFewSamples(EcgiError):
    pass


class ManifestError(EcgiError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"manifest line {line}: {message}"
        super().__init__(message)
