"""Exception types shared across the pipeline."""


class ChromaforgeError(Exception):
    """Base class for all errors raised by this package."""


class ImageReadError(ChromaforgeError):
    """Base class for PNG decode failures."""


class MissingFileError(ImageReadError):
    """Input file does not exist or is not readable."""


class MalformedPngError(ImageReadError):
    """File is not a decodable PNG."""


class UnsupportedDepthError(ImageReadError):
    """PNG has a bit depth above 8; only 8-bit images are handled."""


class NoObjectError(ChromaforgeError):
    """A capture frame keyed down to an empty foreground mask."""


class IngestError(ChromaforgeError):
    """A capture class produced zero usable crops."""


class PlacementError(ChromaforgeError):
    """A crop cannot fit inside the background at the requested anchor."""


class ConfigError(ChromaforgeError):
    """Invalid pipeline configuration."""
