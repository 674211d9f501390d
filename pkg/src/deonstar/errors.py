"""Exception types shared across the package."""


class DeonstarError(Exception):
    """Base class for errors raised by this package."""


class ParseError(DeonstarError):
    """Malformed DSL input.  Carries the offset of the offending token."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class BudgetExceededError(DeonstarError):
    """The prover's node budget ran out.

    The calculus terminates on its own; hitting the budget signals a
    misconfigured limit or an adversarial input, not divergence.
    """


class InternalCheckError(DeonstarError):
    """A result failed its own verification step.  Always a bug."""


class UnknownCorpusError(DeonstarError):
    """Requested corpus name is not shipped with the package."""
