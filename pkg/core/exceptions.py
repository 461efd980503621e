"""Exceptions raised by the crystal engine."""


class CrystalEngineError(Exception):
    """Base class for every engine failure."""


class InvalidStateError(CrystalEngineError, ValueError):
    """A weight lies outside its chain: |m| > j or j - m not integral."""


class UnsupportedEventError(CrystalEngineError, ValueError):
    """A substitution the error model does not handle (U -> G, malformed events)."""


class ExpectationsError(CrystalEngineError):
    """An expectations file cannot be read, is malformed or names an unknown family."""


class ConfigurationError(CrystalEngineError):
    """Invalid combination of derivation flags."""
