"""Word-level text representation and perturbation distance.

Texts are lowercase word sequences with per-position provenance: every
position remembers the word it held before any substitution, so the set of
perturbed positions is always derivable by comparison. Tokenization is a
deterministic whitespace split with leading/trailing punctuation detached
into separate tokens; it is intentionally model-independent so that the
surrogate ensemble and any victim see the same word boundaries.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import EmptyTextError, LengthMismatchError

__all__ = [
    "TokenizedText",
    "tokenize",
    "detokenize",
    "is_punctuation",
    "perturbation_distance",
]


def is_punctuation(token: str) -> bool:
    """True when a token contains no letters or digits (e.g. ",", "...")."""
    return bool(token) and all(not ch.isalnum() for ch in token)


@dataclass(frozen=True)
class TokenizedText:
    """A word sequence plus the original word at every position.

    ``tokens`` is the current (possibly perturbed) sequence and ``origin``
    the words the text started with. Both are tuples of equal length, so
    instances are immutable and safe to share across workers.
    """

    tokens: tuple[str, ...]
    origin: tuple[str, ...] = field(default=())

    def __post_init__(self):
        if not self.origin:
            object.__setattr__(self, "origin", self.tokens)
        if len(self.tokens) == 0:
            raise EmptyTextError("a text must contain at least one token")
        if len(self.tokens) != len(self.origin):
            raise LengthMismatchError(
                f"tokens ({len(self.tokens)}) and origin ({len(self.origin)}) differ in length"
            )

    def __len__(self) -> int:
        return len(self.tokens)

    @property
    def length(self) -> int:
        return len(self.tokens)

    def perturbed_positions(self) -> tuple[int, ...]:
        """Positions where the current token differs from the original word."""
        return tuple(i for i, (t, o) in enumerate(zip(self.tokens, self.origin)) if t != o)

    def replace(self, position: int, word: str) -> "TokenizedText":
        """A copy with ``word`` installed at ``position``; provenance is kept."""
        tokens = list(self.tokens)
        tokens[position] = word
        return TokenizedText(tuple(tokens), self.origin)

    def restore(self, position: int) -> "TokenizedText":
        """A copy with the original word put back at ``position``."""
        return self.replace(position, self.origin[position])

    def restore_all(self) -> "TokenizedText":
        """A copy with every position restored to its original word."""
        return TokenizedText(self.origin, self.origin)

    def as_string(self) -> str:
        return detokenize(self.tokens)


def tokenize(raw: str) -> TokenizedText:
    """Split a raw string into a lowercase word sequence.

    Whitespace separates chunks; punctuation at either end of a chunk is
    peeled off into standalone tokens ("weird," -> "weird" ","), while
    word-internal punctuation ("it's", "well-made") is preserved.

    Raises :class:`EmptyTextError` when the string holds no tokens.
    """
    tokens: list[str] = []
    for chunk in raw.lower().split():
        tail: list[str] = []
        while chunk and is_punctuation(chunk[0]):
            tokens.append(chunk[0])
            chunk = chunk[1:]
        while chunk and is_punctuation(chunk[-1]):
            tail.append(chunk[-1])
            chunk = chunk[:-1]
        if chunk:
            tokens.append(chunk)
        tokens.extend(reversed(tail))
    if not tokens:
        raise EmptyTextError("input contains no tokens")
    return TokenizedText(tuple(tokens))


def detokenize(tokens: tuple[str, ...] | list[str]) -> str:
    """Join tokens with single spaces; punctuation attaches to the preceding word."""
    parts: list[str] = []
    for token in tokens:
        if parts and is_punctuation(token):
            parts[-1] = parts[-1] + token
        else:
            parts.append(token)
    return " ".join(parts)


def perturbation_distance(a: TokenizedText, b: TokenizedText) -> float:
    """Fraction of positions where two equal-length texts disagree.

    This is the word-modification rate: changed positions divided by length,
    always k/L for an integer k. Raises :class:`LengthMismatchError` when
    the texts are not position-aligned.
    """
    if len(a) != len(b):
        raise LengthMismatchError(f"cannot compare texts of length {len(a)} and {len(b)}")
    changed = sum(1 for x, y in zip(a.tokens, b.tokens) if x != y)
    return changed / len(a)
