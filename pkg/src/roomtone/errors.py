"""Exception types shared across the package."""


class RoomtoneError(Exception):
    """Base class for all package-specific errors."""


class ValidationError(RoomtoneError):
    """A parameter or input value violates a documented precondition."""


class MeshError(RoomtoneError):
    """A mesh is unusable for the requested operation (e.g. not watertight)."""


class MeshParseError(RoomtoneError):
    """Malformed mesh text; carries the 1-based line number when known."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ConfigError(RoomtoneError):
    """Malformed run-configuration file."""
