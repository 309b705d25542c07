"""Exception types shared across the toolkit."""


class StegoError(Exception):
    """Base class for all toolkit errors."""


class UnsupportedFormatError(StegoError):
    """Input file is a recognized image format we refuse to process."""


class CorruptImageError(StegoError):
    """File claims to be a BMP but its structure is broken."""


class BadChannelIndexError(StegoError):
    """Channel index outside 0..2."""


class InvalidKeyError(StegoError):
    """Key is not a single ASCII letter."""


class OutOfRangeError(StegoError):
    """Decryption produced a value outside the byte range."""


class PayloadTooLongError(StegoError):
    """Payload byte count does not fit the length field."""


class CapacityExceededError(StegoError):
    """Digit stream does not fit into one channel of the cover."""


class NoPayloadFoundError(StegoError):
    """No channel of the image decodes to a valid payload."""


class DimensionMismatchError(StegoError):
    """Two rasters that should share a shape do not."""


class ImageTooSmallError(StegoError):
    """Image is smaller than the operation requires."""


class GlyphMissingError(StegoError):
    """Requested character has no glyph in the database."""


class OverlayOutOfBoundsError(StegoError):
    """Rendered glyphs would not fit inside the image."""


class GlyphFileError(StegoError):
    """Glyph database file is malformed."""


class EmptyCorpusError(StegoError):
    """Corpus directory contains no readable covers."""


class EmptyInputError(StegoError):
    """An aggregate was requested over zero reports."""
