"""Exception hierarchy shared by the library and the CLI.

Every error carries the process exit code the CLI reports for it.
"""

from typing import Optional, Sequence


class OptupleError(ValueError):
    """Base class for all optuple errors."""

    exit_code: int = 1


class InputError(OptupleError):
    """Malformed input: bad JSON, mismatched dimensions or lengths, non-projections."""

    exit_code = 2


class ToleranceAmbiguityError(OptupleError):
    """A rank or clustering decision could not be made at the requested tolerance."""

    exit_code = 3

    def __init__(self, message: str, spectrum: Optional[Sequence[float]] = None):
        self.spectrum = [float(s) for s in spectrum] if spectrum is not None else []
        if self.spectrum:
            shown = ", ".join(f"{s:.3e}" for s in self.spectrum[:32])
            more = " ..." if len(self.spectrum) > 32 else ""
            message = f"{message} (spectrum: [{shown}{more}])"
        super().__init__(message)


class InternalConsistencyError(OptupleError):
    """A decomposition cross-check failed; usually the tolerance is too loose."""

    exit_code = 3


class DomainError(OptupleError):
    """Input outside the numerically supported domain."""

    exit_code = 3


class AdmissibilityError(OptupleError):
    """A multiplicity is not admissible for the kind of its label."""

    exit_code = 4


class PreconditionError(OptupleError):
    """An operation was called outside its precondition."""

    exit_code = 4


class NotComparableError(OptupleError):
    """No scalar relates the two classes."""

    exit_code = 4
