"""Exception hierarchy shared by all layers.

The CLI maps these onto exit codes, so keep the split stable:
InputFormatError -> 2, InvariantViolation -> 3.
"""


class CuspdistError(Exception):
    """Base class for all errors raised by this package."""


class InvariantViolation(CuspdistError):
    """A domain invariant or operation precondition does not hold."""


class WidthLimitExceeded(InvariantViolation):
    """An exact-integer computation would exceed the configured width."""


class InputFormatError(CuspdistError):
    """Malformed external input (JSON documents, CLI flag values)."""


class OracleFailure(CuspdistError):
    """A certified identity failed inside the finite-group oracle.

    This is a hard failure: it means either the table construction or the
    modular splitting contexts are inconsistent, never a property of the
    input data.
    """
