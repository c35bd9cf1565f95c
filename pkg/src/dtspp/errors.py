"""Exception types shared across the package.

The CLI maps these onto its exit-code contract: ConfigError and
DegenerateInputError exit 1, I/O and format problems exit 2, numerical
failures exit 3.
"""


class DtsppError(Exception):
    """Base class for package errors."""


class ConfigError(DtsppError):
    """Bad or unknown configuration key/value."""


class FormatError(DtsppError):
    """Unsupported or malformed file content (WAV encoding, tap files)."""


class DegenerateInputError(DtsppError):
    """Input that is structurally valid but unusable (zero RMS, too short)."""


class StructuralError(DtsppError):
    """Mismatched shapes, subband counts, or broken filter invariants."""


class DomainError(DtsppError):
    """Argument outside a mathematical function's domain."""


class NumericalError(DtsppError):
    """NaN/Inf or non-convergence in the numeric pipeline."""
