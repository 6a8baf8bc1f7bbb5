"""Exception types shared by every module."""


class Tw2KernelError(Exception):
    """Base class for all errors raised by this package."""


class PreconditionViolation(Tw2KernelError):
    """An operation was called on input outside its contract."""


class UnsupportedInput(Tw2KernelError):
    """The input is well formed but the operation is not defined for it."""


class RejectedApplication(Tw2KernelError):
    """A reduction rule was asked to fire but its preconditions do not hold."""


class ApproximatorContractError(Tw2KernelError):
    """An approximator returned a set that is not a modulator."""


class InvariantViolation(Tw2KernelError):
    """An internal invariant that should be guaranteed did not hold."""


class ScaleExceeded(Tw2KernelError):
    """The brute-force oracle refuses an instance that is too large."""


class ParseError(Tw2KernelError):
    """Malformed instance or trace text."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


def checks_enabled():
    """Debug-time invariant assertions; on unless TW2KERNEL_CHECKS=0."""
    import os
    return os.environ.get("TW2KERNEL_CHECKS", "1") != "0"


def check(condition, message):
    if not condition:
        raise InvariantViolation(message)
