"""Exception taxonomy shared across the package.

The split mirrors the CLI exit codes: parse/I-O problems (exit 1) versus
data problems such as unresolvable words or degenerate statistics (exit 2).
"""


class EmbiasError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(EmbiasError):
    """Malformed input file (embedding text, cache stream, CSV, JSON spec)."""


class ResolutionError(EmbiasError):
    """Words could not be resolved against the store, or sets became too small."""


class DegenerateStatisticError(EmbiasError):
    """A statistic is undefined for this input (zero variance, all ties)."""


class UsageError(EmbiasError):
    """Caller asked for something the API does not offer (bad id, bad option)."""
