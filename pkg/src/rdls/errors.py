"""Exception hierarchy shared across the package."""


class RdlsError(Exception):
    """Base class for all errors raised by this package."""


class BoundsError(RdlsError):
    """A sample value violates its plane's declared bounds."""


class RoleError(RdlsError):
    """Component roles do not match what an operation expects."""


class LiftingConsistencyError(RdlsError):
    """A forward lifting step produced a value outside its declared bounds.

    This signals a wrong bounds declaration in a step definition, not bad
    user input.
    """


class ReconstructionError(RdlsError):
    """Inverse transform produced an out-of-range sample.

    Raised when the input is not a valid transformed image for the given
    descriptor (e.g. wrong filter weights), since silently clamping would
    break reversibility.
    """


class FormatError(RdlsError):
    """A file does not conform to one of the package's formats."""


class DecodeError(RdlsError):
    """Compressed plane payload is truncated or corrupt."""

    def __init__(self, message: str, byte_offset: int | None = None):
        if byte_offset is not None:
            message = f"{message} (at byte offset {byte_offset})"
        super().__init__(message)
        self.byte_offset = byte_offset
