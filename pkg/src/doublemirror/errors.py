"""Exception types shared across the library."""


class DoubleMirrorError(Exception):
    """Base class for all library errors."""


class InputError(DoubleMirrorError, ValueError):
    """Malformed or inconsistent user input (files, dimensions, tags)."""


class VerificationError(DoubleMirrorError):
    """A named mathematical condition failed during a pipeline run.

    The message always states the violated condition in plain language so
    batch drivers can report exactly which axiom broke.
    """

    def __init__(self, condition: str, detail: str = ""):
        self.condition = condition
        self.detail = detail
        message = condition if not detail else f"{condition}: {detail}"
        super().__init__(message)


class InternalConsistencyError(DoubleMirrorError):
    """Two provably equivalent computations disagreed; indicates a bug."""
