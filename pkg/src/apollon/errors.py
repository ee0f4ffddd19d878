"""Exception hierarchy shared across the package.

The CLI maps these onto process exit codes: usage errors exit 2,
resource-cap errors exit 3, invariant violations exit 4.
"""


class ApollonError(Exception):
    """Base class for all package-specific errors."""


class UsageError(ApollonError):
    """Bad arguments or unusable input (CLI exit code 2)."""


class CapExceededError(ApollonError):
    """A documented size or depth cap was exceeded (CLI exit code 3)."""


class InvariantViolationError(ApollonError):
    """A runtime self-check failed; indicates a bug or bad data (CLI exit code 4)."""


class NotRepresentableError(UsageError):
    """The requested representation does not exist (e.g. p = x^2 + y^2 for p = 3 mod 4)."""


class InconsistentSamplesError(InvariantViolationError):
    """Sampled values that must agree did not; carries the raw samples."""

    def __init__(self, message, samples):
        super().__init__(f"{message}; samples: {samples!r}")
        self.samples = samples
