"""Exception types shared across the package."""


class SomAtlasError(Exception):
    """Base class for all package-specific errors."""


class CsvFormatError(SomAtlasError):
    """Malformed CSV input (ragged row, bad cell, missing header).

    Messages carry the 1-based physical row number of the offending line.
    """


class ModelFormatError(SomAtlasError):
    """Corrupt or unreadable model file; message names the first bad line."""


class SchemaMismatchError(SomAtlasError):
    """Input columns do not match the schema a model was trained with."""
