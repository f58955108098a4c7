"""Exception types shared across the package."""


class QftError(Exception):
    """Base class for all package errors."""


class InvalidSpec(QftError):
    """A shift specification is malformed or violates its invariants."""


class EmptyShift(QftError):
    """The presentation defines the empty subshift."""


class NotInLanguage(QftError):
    """A word was expected to be admitted but is not."""


class InvalidComparison(QftError):
    """Two follower signatures cannot be compared."""


class InvalidPath(QftError):
    """A vertex sequence does not follow the arrows of a diagram."""


class BudgetExceeded(QftError):
    """A computation exceeded its configured work or size budget."""


class ExplosionBudgetExceeded(BudgetExceeded):
    """A diagram construction produced more vertices than allowed."""


class SpectralFailure(QftError):
    """Power iteration did not converge."""

    def __init__(self, message: str, diagnostics: dict | None = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class SplitOutOfRange(QftError):
    """Block split parameters are inconsistent with the diagram."""
