class KoszulForgeError(Exception):
    """Base class for errors raised by this package."""


class CompletionBudgetExceeded(KoszulForgeError):
    """Groebner completion needed more rules than allowed.

    ``system`` holds the partial rewrite system; its ``complete_up_to`` stamp
    is the last degree that was fully processed.
    """

    def __init__(self, message, system=None):
        super().__init__(message)
        self.system = system


class WeightExceedsBound(KoszulForgeError):
    """A relator's Magnus expansion is trivial up to the truncation degree."""


class InternalInvariantError(KoszulForgeError):
    """An internal consistency check failed; this indicates a bug."""
