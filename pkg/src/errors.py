"""
Error kinds raised across the workbench
"""


class CellBlindError(ValueError):
    """Base class for every error raised by the package"""


class InvalidParameterError(CellBlindError):
    """A generator, scheme or run parameter is out of range"""


class ProblemParseError(CellBlindError):
    """
    A JSON document does not follow the expected schema

    The offending field is kept on the exception so callers can report it.
    """

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


class SchemeMismatchError(CellBlindError):
    """A built-in scheme was paired with a problem it was not built for"""


class UnsupportedConfigurationError(CellBlindError):
    """The requested analysis is not defined for this problem class"""
