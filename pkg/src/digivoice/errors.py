class DecodeError(Exception):
    """A receiver could not turn audio back into data."""


class AlignmentError(DecodeError, ValueError):
    """Buffer length is not a whole number of symbol intervals."""


class CalibrationError(DecodeError):
    """Calibration is missing a tone or shows no on/off contrast."""


class SyncError(DecodeError):
    """No preamble was found."""


class FrameError(DecodeError):
    pass


class CrcError(FrameError):
    """Frame checksum did not verify."""


class TruncatedFrameError(FrameError):
    """Fewer bytes than the frame header promises."""
