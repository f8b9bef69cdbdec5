"""Exception hierarchy.

The CLI maps these onto exit codes: data and transport problems exit with 3,
numeric-contract violations with 4. Anything else derived from ``ValueError``
is treated as a validation error (exit 2).
"""


class ZetaSpectraError(Exception):
    """Base class for all errors raised by this package."""


class DataError(ZetaSpectraError):
    """Input data could not be read or is inconsistent."""


class ZeroTableParseError(DataError, ValueError):
    """A zero table contains a token that is not a decimal number."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ZeroTableValidationError(DataError, ValueError):
    """Parsed ordinates violate the zero-table invariants."""


class TransportError(DataError, OSError):
    """A remote table could not be downloaded and no cached copy exists."""


class CacheIntegrityError(DataError):
    """A cache entry does not match its metadata."""


class NumericContractError(ZetaSpectraError, ArithmeticError):
    """A numerical invariant was violated beyond its tolerance."""


class DomainError(NumericContractError, ValueError):
    """An argument lies outside the domain of a formula."""


class HermiticityError(NumericContractError):
    """A circulant built from a spectrum is not Hermitian."""


class NoCloudFound(NumericContractError):
    """No window in the scanned range has a negative smoothness score."""


class FitError(NumericContractError, ValueError):
    """A distribution fit is infeasible for the given samples."""
