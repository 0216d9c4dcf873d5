"""Shared exception types."""


class CapExceededError(RuntimeError):
    """Dense computation would exceed the configured dimension cap."""


class HypothesisError(ValueError):
    """A stated hypothesis of an identity check is violated by the input.

    Distinct from a counterexample: the check was never run.
    """


class UnsupportedCaseError(ValueError):
    """The requested asymptotic regime is outside the supported range."""
