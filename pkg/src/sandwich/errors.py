"""Exception hierarchy shared by every module."""


class SandwichError(Exception):
    """Base class for all library errors."""


class DomainError(SandwichError, ValueError):
    """A point or a function lies outside the domain an operation expects."""


class ParameterError(SandwichError, ValueError):
    """A scalar parameter (epsilon, lambda, tol, ...) is out of range."""


class DegenerateInputError(ParameterError):
    pass


class PreconditionError(SandwichError, ValueError):
    """An operation's mathematical precondition failed.

    ``witness`` carries whatever exhibits the failure (a point, a pair of
    indices, a ``(point, deficit)`` tuple); it may be ``None``.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotSemicontinuousError(PreconditionError):
    """Raised with ``point`` and ``deficit`` of the first semicontinuity failure."""

    def __init__(self, message, point, deficit):
        super().__init__(message, witness=(point, deficit))
        self.point = point
        self.deficit = deficit


class SeparationError(PreconditionError):
    def __init__(self, message, pair):
        super().__init__(message, witness=pair)
        self.pair = pair


class InternalInvariantError(SandwichError, RuntimeError):
    """A guarantee that should hold on valid input did not (a bug)."""


class ScheduleCapError(InternalInvariantError):
    pass


class ParseError(SandwichError, ValueError):
    def __init__(self, message, line=None, field=None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)
        self.line = line
        self.field = field
