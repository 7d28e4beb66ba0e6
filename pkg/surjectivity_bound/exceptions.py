"""
Error hierarchy for the surjectivity bound pipeline.

Every error carries a ``diagnostic`` dictionary so the CLI can emit a
structured report before exiting with status 1.
"""

from typing import Any, Dict, Optional


class SurjectivityBoundError(Exception):
    """
    Base class for all pipeline errors.
    """

    def __init__(self, message: str, diagnostic: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.diagnostic = dict(diagnostic or {})

    def to_dict(self) -> Dict[str, Any]:
        """
        Structured form of the error used by the CLI.

        Returns:
            Dictionary with the error kind, message and diagnostic fields
        """
        return {
            "error": type(self).__name__,
            "message": self.message,
            "diagnostic": {key: str(value) for key, value in sorted(self.diagnostic.items())},
        }


class FieldError(SurjectivityBoundError, ValueError):
    """A number field could not be built or failed one of its invariants."""


class IdealError(SurjectivityBoundError, ValueError):
    """Zero ideal, rank-deficient lattice or malformed HNF."""


class IrreducibilityError(SurjectivityBoundError):
    """The sign-pattern constants cannot be formed."""


class GroupError(SurjectivityBoundError, ValueError):
    """Invalid prime or matrix for the GL2 laboratory."""


class DatasetError(SurjectivityBoundError, ValueError):
    """Eigenform dataset schema or validation failure."""


class RemoteUnavailableError(SurjectivityBoundError):
    """Network failure with no usable cache entry."""


class RemoteFetchError(SurjectivityBoundError):
    """The remote endpoint answered with an unexpected status."""


class CacheIntegrityError(SurjectivityBoundError):
    """A cached dataset does not match its recorded checksum."""


class ConfigError(SurjectivityBoundError, ValueError):
    """Run configuration could not be parsed or validated."""


class CharacterError(SurjectivityBoundError):
    """Quadratic characters could not be enumerated."""
