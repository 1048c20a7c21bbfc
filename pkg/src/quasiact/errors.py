"""Exception types shared across the package."""


class QuasiactError(Exception):
    """Base class for all errors raised by this package."""


class CarrierMismatchError(QuasiactError):
    """Two maps on carriers of different sizes were combined."""


class GroupMismatchError(QuasiactError):
    """Elements or subsets of different groups were mixed."""


class DomainError(QuasiactError):
    """An argument lies outside the domain an operation accepts."""


class IncompleteSupportError(QuasiactError):
    """A quasi-action is missing an assignment on a required element."""

    def __init__(self, element_key: str, context: str = ""):
        self.element_key = element_key
        msg = f"no map assigned for element {element_key}"
        if context:
            msg += f" ({context})"
        super().__init__(msg)


class PreconditionError(QuasiactError):
    """A documented precondition of a construction does not hold."""


class SearchFailureError(QuasiactError):
    """A seeded search exhausted its schedule without success."""


class InvariantViolationError(QuasiactError):
    """An internal invariant failed; indicates a bug or corrupt input."""
