"""Exception types shared across the package."""


class PreconditionError(ValueError):
    """Input does not satisfy an operation's stated precondition."""


class NotMissingEdge(PreconditionError):
    pass


class InstanceTooLarge(PreconditionError):
    pass


class NotMedianOrder(PreconditionError):
    pass


class NotGoodDigraph(PreconditionError):
    pass


class NotAnInterval(PreconditionError):
    pass


class Finding(Exception):
    """A computed object contradicts the statement being verified.

    Raised only where the theory says it cannot happen; callers in the
    harness treat it as a counterexample and dump the instance.
    """
