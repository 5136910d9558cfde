"""Exception types raised across the package."""


class SepAttackError(Exception):
    """Base class for all package-specific errors."""


class EmptyTextError(SepAttackError, ValueError):
    """Raised when a raw string contains no tokens."""


class LengthMismatchError(SepAttackError, ValueError):
    """Raised when two texts that must be position-aligned differ in length."""


class LexiconFormatError(SepAttackError, ValueError):
    """Raised on a malformed lexicon file or an invalid synonym entry."""


class DegenerateCorpusError(SepAttackError, ValueError):
    """Raised when a training corpus cannot support classification (single class, too small)."""


class RemoteModelError(SepAttackError, RuntimeError):
    """Raised on remote-classifier transport failures or malformed responses."""


class QueryBudgetExceededError(SepAttackError, RuntimeError):
    """Raised when a victim query is attempted past the per-example budget."""


class NoReplaceablePositionsError(SepAttackError, ValueError):
    """Raised when importance scoring is requested for a text with no replaceable words."""


class DatasetFormatError(SepAttackError, ValueError):
    """Raised on malformed dataset files; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line
