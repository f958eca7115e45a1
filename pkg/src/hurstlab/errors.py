"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: usage problems exit 1, data problems
exit 2, numeric/degenerate failures exit 3.
"""


class HurstlabError(Exception):
    """Base class for all errors raised by hurstlab."""


class UsageError(HurstlabError):
    """Invalid command-line flags or parameter combinations."""


class DataError(HurstlabError):
    """Unreadable, malformed or contract-violating input data."""


class NumericError(HurstlabError):
    """The computation is undefined or degenerate for this input."""
