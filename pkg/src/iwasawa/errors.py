"""Exception hierarchy.

Every error class carries the process exit code the CLI reports for it, so the
mapping from failures to exit codes is total and one-to-one per class.
"""


class IwasawaError(Exception):
    exit_code = 1


class PrecisionExhausted(IwasawaError):
    """No certain answer can be extracted at the working precision."""

    exit_code = 2


class PreconditionError(IwasawaError):
    exit_code = 3


class HypothesisViolated(PreconditionError):
    """A standing hypothesis of a divisibility criterion fails (e.g. F | eta)."""


class ContextMismatch(PreconditionError):
    pass


class DivisionByZero(PreconditionError, ZeroDivisionError):
    pass


class OutOfDisk(PreconditionError):
    """Evaluation point or root outside the open unit disk."""


class InvalidGenerator(PreconditionError):
    """Configured image of the topological generator is not 1 mod p, non-1 mod p^2."""


class NotTorsion(PreconditionError):
    pass


class SchemaError(IwasawaError):
    """Malformed input document."""

    exit_code = 4
