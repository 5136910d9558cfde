"""Synonym lexicon: per-word POS tags and similarity-ranked substitution sets.

The lexicon is a plain-file asset rather than a runtime POS tagger or
embedding index: one UTF-8 line per word, ``word<TAB>pos<TAB>syn:sim,...``
with synonyms sorted by similarity descending. A word absent from the
lexicon is simply not replaceable. A small bundled lexicon covering a toy
movie-review vocabulary ships with the package for tests and demos.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .errors import LexiconFormatError
from .text import TokenizedText

__all__ = [
    "POS_TAGS",
    "REPLACEABLE_POS",
    "SynonymEntry",
    "SynonymLexicon",
    "load_lexicon",
    "save_lexicon",
    "load_bundled_lexicon",
    "replaceable_positions",
]

POS_TAGS = ("noun", "verb", "adverb", "adjective", "other")

# Only content words may be substituted.
REPLACEABLE_POS = frozenset({"noun", "verb", "adverb", "adjective"})


@dataclass(frozen=True)
class SynonymEntry:
    """POS tag and similarity-scored synonyms for one word."""

    word: str
    pos: str = "other"
    synonyms: tuple[tuple[str, float], ...] = ()

    def __post_init__(self):
        if self.pos not in POS_TAGS:
            raise LexiconFormatError(f"unknown POS tag {self.pos!r} for {self.word!r}")
        prev = 1.0
        for syn, sim in self.synonyms:
            if syn == self.word:
                raise LexiconFormatError(f"{self.word!r} lists itself as a synonym")
            if not 0.0 <= sim <= 1.0:
                raise LexiconFormatError(f"similarity {sim} for {self.word!r} outside [0, 1]")
            if sim > prev:
                raise LexiconFormatError(f"synonyms of {self.word!r} are not sorted by similarity")
            prev = sim

    @property
    def words(self) -> tuple[str, ...]:
        return tuple(syn for syn, _ in self.synonyms)

    def closest(self) -> str | None:
        """The highest-similarity synonym, or None when the set is empty."""
        return self.synonyms[0][0] if self.synonyms else None


_EMPTY = SynonymEntry("")


@dataclass(frozen=True)
class SynonymLexicon:
    """Word -> SynonymEntry map; unknown words resolve to POS ``other`` and no synonyms."""

    entries: dict[str, SynonymEntry] = field(default_factory=dict)

    def lookup(self, word: str) -> SynonymEntry:
        entry = self.entries.get(word)
        if entry is None:
            return SynonymEntry(word) if word else _EMPTY
        return entry

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, word: str) -> bool:
        return word in self.entries


def load_lexicon(path: str | Path) -> SynonymLexicon:
    """Parse a TSV lexicon file. Raises :class:`LexiconFormatError` with the line number."""
    entries: dict[str, SynonymEntry] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            fields = line.split("\t")
            if len(fields) not in (2, 3):
                raise LexiconFormatError(f"line {lineno}: expected 2 or 3 tab-separated fields")
            word, pos = fields[0], fields[1]
            synonyms: list[tuple[str, float]] = []
            if len(fields) == 3 and fields[2]:
                for item in fields[2].split(","):
                    try:
                        syn, sim = item.rsplit(":", 1)
                        synonyms.append((syn, float(sim)))
                    except ValueError as exc:
                        raise LexiconFormatError(
                            f"line {lineno}: bad synonym item {item!r}"
                        ) from exc
            try:
                entries[word] = SynonymEntry(word, pos, tuple(synonyms))
            except LexiconFormatError as exc:
                raise LexiconFormatError(f"line {lineno}: {exc}") from exc
    return SynonymLexicon(entries)


def save_lexicon(lex: SynonymLexicon, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for word in sorted(lex.entries):
            entry = lex.entries[word]
            syns = ",".join(f"{syn}:{sim:g}" for syn, sim in entry.synonyms)
            fh.write(f"{word}\t{entry.pos}\t{syns}\n")


def load_bundled_lexicon() -> SynonymLexicon:
    """The small lexicon shipped with the package (toy movie-review vocabulary)."""
    ref = resources.files("sep_attack").joinpath("data/toy_lexicon.tsv")
    with resources.as_file(ref) as path:
        return load_lexicon(path)


def replaceable_positions(text: TokenizedText, lex: SynonymLexicon) -> tuple[int, ...]:
    """Positions whose original word is a content word with at least one synonym.

    Filtering is on the original word at each position, so the set is fixed
    for the life of a text regardless of substitutions already applied.
    """
    return tuple(
        i
        for i, word in enumerate(text.origin)
        if lex.lookup(word).pos in REPLACEABLE_POS and lex.lookup(word).synonyms
    )
