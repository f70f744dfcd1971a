"""Exception hierarchy shared by the binseg modules."""


class BinsegError(Exception):
    """Base class for every error raised by this package."""


class ImageIOError(BinsegError):
    """Reading or writing an image or field file failed."""


class UnreadableFileError(ImageIOError):
    pass


class UnsupportedFormatError(ImageIOError):
    """The file parses but uses a bit depth or mode we do not handle."""


class EmptyImageError(ImageIOError):
    pass


class NonBinaryMaskError(BinsegError, ValueError):
    pass


class DimensionMismatchError(BinsegError, ValueError):
    pass


class NonFiniteError(BinsegError, ValueError):
    pass


class EmptyRegionError(BinsegError):
    """The weighted denominator of a region average fell below the guard."""


class DegenerateBiasError(BinsegError):
    pass


class InvalidPhantomError(BinsegError, ValueError):
    pass


class UndefinedMetricError(BinsegError, ZeroDivisionError):
    pass
