"""Exception hierarchy shared by every module."""


class SupercutError(Exception):
    """Base class for all library errors."""


class InputError(SupercutError, ValueError):
    """Malformed input: bad JSON, wrong table length, out-of-range label."""


class PreconditionError(SupercutError):
    """An operation was called outside its documented precondition."""


class InfeasibleBounds(PreconditionError):
    """The BGMC solution space {X : q <= |X| <= n - p} is empty."""


class NormalisationError(SupercutError):
    """A weighted relation does not correspond under normalisation to a k-set function.

    ``witness`` is the offending tuple.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ModeError(SupercutError):
    """An assignment violates the surjective / lower-bounded mode of an instance."""


class LanguageError(SupercutError):
    """The language lies outside the class a solver path requires."""


class BudgetExceeded(SupercutError):
    """An exhaustive sweep would exceed its evaluation budget."""
