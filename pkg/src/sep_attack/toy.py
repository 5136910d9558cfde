"""Synthetic text worlds with controllable surrogate/victim disagreement.

The sentiment world trains every model on its own corpus drawn from a
shared template: common filler words, common strongly and mildly polar
adjectives, plus a pool of rare "drift" words that appear as lexicon
synonyms of the polar adjectives. Each model's corpus shows each drift
word in only one class, and that class is the word's global polarity with
probability ``DRIFT_AGREEMENT`` (independently per model). Models
therefore agree on the common vocabulary but hold correlated-yet-different
opinions about exactly the words an attack can swap in, which is the
regime where transfer either succeeds or fails in an interesting way.

Victim and surrogates draw disjoint seeds, so the victim is held out by
construction. A small four-topic world is included for multi-class
training checks.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .lexicon import SynonymEntry, SynonymLexicon, save_lexicon
from .models import Ensemble, TextClassifier, save_model, train_builtin

__all__ = [
    "FILLERS",
    "STRONG_POS",
    "MILD_POS",
    "STRONG_NEG",
    "MILD_NEG",
    "DRIFT_WORDS",
    "ToyWorld",
    "build_lexicon",
    "drift_assignment",
    "make_sentiment_corpus",
    "make_eval_dataset",
    "make_topic_corpus",
    "build_toy_world",
    "materialize_toy_world",
]

FILLERS = (
    "the", "a", "this", "that", "film", "movie", "story", "plot", "cast",
    "scene", "script", "it", "was", "is", "with", "and", "of", "about",
    "in", "one", "really", "quite", "rather", "very", "audience",
    "character", "director", "acting", "tone", "pace", "ending", "moments",
    "feels", "seems", "overall", "style", "theme", "dialogue", "narrative",
    "screen",
)

STRONG_POS = ("wonderful", "great", "excellent", "brilliant", "superb", "fantastic", "marvelous", "engaging")
MILD_POS = ("good", "decent", "solid", "pleasant", "charming", "enjoyable")
STRONG_NEG = ("terrible", "awful", "dreadful", "horrible", "atrocious", "abysmal", "boring", "painful")
MILD_NEG = ("bad", "weak", "dull", "bland", "flat", "tedious")

_DRIFT_POS_SIDE = ("extraordinaire", "whopping", "sublime", "rousing", "transcendent", "luminous", "dazzling", "majestic")
_DRIFT_NEG_SIDE = ("abominable", "dire", "lamentable", "woeful", "dismal", "grim", "wretched", "harrowing")
_SOFTENERS = ("adequate", "passable", "middling", "serviceable")
DRIFT_WORDS = _DRIFT_POS_SIDE + _DRIFT_NEG_SIDE + _SOFTENERS

DRIFT_AGREEMENT = 0.75
DRIFT_COVERAGE = 0.7

TOPIC_WORDS = {
    0: ("match", "team", "season", "coach", "league", "striker", "tournament", "goal"),
    1: ("market", "shares", "bank", "profit", "investors", "trading", "revenue", "stocks"),
    2: ("researchers", "experiment", "protein", "spacecraft", "physics", "laboratory", "genome", "climate"),
    3: ("gallery", "painting", "novel", "orchestra", "exhibition", "sculpture", "poetry", "theater"),
}

# spare general-vocabulary entries so the lexicon is not purely sentiment
_EXTRA_ENTRIES = (
    ("jobs", "noun", (("tasks", 0.85), ("duties", 0.8))),
    ("workers", "noun", (("assistants", 0.8), ("laborers", 0.78))),
    ("employers", "noun", (("employing", 0.6),)),
    ("organisation", "noun", (("institution", 0.8), ("organisms", 0.55))),
    ("next", "adverb", (("follows", 0.6),)),
    ("fake", "adjective", (("fraudulent", 0.85), ("bogus", 0.8))),
    ("portrays", "verb", (("depicts", 0.88), ("exemplifies", 0.7))),
    ("circumstances", "noun", (("situations", 0.85), ("screenplays", 0.5))),
    ("challenged", "verb", (("contested", 0.8), ("disproved", 0.7))),
    ("also", "adverb", (("additionally", 0.8), ("instead", 0.55))),
    ("supporting", "verb", (("backing", 0.75), ("aid", 0.65))),
)


def build_lexicon() -> SynonymLexicon:
    """Synonym table for the toy worlds.

    Strong adjectives point at four drift words apiece (rotating through
    the pool so sources share levers) plus one mild same-polarity
    adjective; mild adjectives point at softeners.
    """
    entries: dict[str, SynonymEntry] = {}

    def add(word: str, pos: str, synonyms: tuple) -> None:
        entries[word] = SynonymEntry(word=word, pos=pos, synonyms=tuple(synonyms))

    for i, word in enumerate(STRONG_POS):
        drift = [_DRIFT_POS_SIDE[(i + j) % len(_DRIFT_POS_SIDE)] for j in range(4)]
        add(word, "adjective", (
            (drift[0], 0.93), (drift[1], 0.9), (drift[2], 0.87), (drift[3], 0.84),
            (MILD_POS[i % len(MILD_POS)], 0.7),
        ))
    for i, word in enumerate(STRONG_NEG):
        drift = [_DRIFT_NEG_SIDE[(i + j) % len(_DRIFT_NEG_SIDE)] for j in range(4)]
        add(word, "adjective", (
            (drift[0], 0.93), (drift[1], 0.9), (drift[2], 0.87), (drift[3], 0.84),
            (MILD_NEG[i % len(MILD_NEG)], 0.7),
        ))
    for i, word in enumerate(MILD_POS):
        add(word, "adjective", (
            (_SOFTENERS[i % len(_SOFTENERS)], 0.8),
            (_SOFTENERS[(i + 1) % len(_SOFTENERS)], 0.76),
            (MILD_POS[(i + 1) % len(MILD_POS)], 0.65),
        ))
    for i, word in enumerate(MILD_NEG):
        add(word, "adjective", (
            (_SOFTENERS[i % len(_SOFTENERS)], 0.8),
            (_SOFTENERS[(i + 1) % len(_SOFTENERS)], 0.76),
            (MILD_NEG[(i + 1) % len(MILD_NEG)], 0.65),
        ))
    for word, pos, synonyms in _EXTRA_ENTRIES:
        add(word, pos, synonyms)
    return SynonymLexicon(entries)


def _global_polarity(seed: int) -> dict[str, int]:
    rng = np.random.default_rng(np.random.SeedSequence([int(seed), 1000]))
    return {word: int(rng.integers(0, 2)) for word in DRIFT_WORDS}


def drift_assignment(
    seed: int,
    model_idx: int,
    q: float = DRIFT_AGREEMENT,
    coverage: float = DRIFT_COVERAGE,
) -> dict[str, int]:
    """Class in which each drift word appears in model ``model_idx``'s corpus.

    Each model sees only a ``coverage`` fraction of the drift pool at all
    (absent words never enter its vocabulary and score zero). A seen word
    lands in its global-polarity class with probability ``q``, so any two
    models that both know a word agree on it with q^2 + (1-q)^2.
    """
    polarity = _global_polarity(seed)
    rng = np.random.default_rng(np.random.SeedSequence([int(seed), 2000 + int(model_idx)]))
    assignment = {}
    for word, pol in polarity.items():
        known = rng.random() < coverage
        flipped = rng.random() >= q
        if known:
            assignment[word] = (1 - pol) if flipped else pol
    return assignment


MILD_NOISE = 0.25


def _sentiment_text(
    rng: np.random.Generator,
    label: int,
    n_strong: int,
    n_mild: int,
    drift_words: list[str],
    length_range: tuple[int, int] = (14, 21),
) -> str:
    """One text: pure strong polar words, noisy mild ones, filler padding.

    Each mild slot draws from the opposite-polarity list with probability
    MILD_NOISE, which keeps mild words weakly informative in every trained
    model and leaves the strong words carrying the label.
    """
    strong = STRONG_POS if label == 1 else STRONG_NEG
    mild, mild_other = (MILD_POS, MILD_NEG) if label == 1 else (MILD_NEG, MILD_POS)
    words = list(rng.choice(strong, size=n_strong, replace=False))
    for _ in range(n_mild):
        source = mild_other if rng.random() < MILD_NOISE else mild
        words.append(str(rng.choice(source)))
    words += drift_words
    target_len = int(rng.integers(length_range[0], length_range[1]))
    n_fill = max(target_len - len(words), 4)
    words += list(rng.choice(FILLERS, size=n_fill, replace=True))
    rng.shuffle(words)
    return " ".join(words)


def make_sentiment_corpus(
    n: int,
    seed: int,
    assignment: dict[str, int] | None = None,
    drift_rate: float = 0.0,
) -> list[tuple[str, int]]:
    """Balanced training corpus; drift words appear only in their assigned class."""
    rng = np.random.default_rng(np.random.SeedSequence([int(seed), 3000]))
    corpus = []
    for i in range(n):
        label = i % 2
        drift: list[str] = []
        if assignment and drift_rate > 0.0 and rng.random() < drift_rate:
            eligible = [w for w, lab in assignment.items() if lab == label]
            if eligible:
                k = min(int(rng.integers(1, 4)), len(eligible))
                drift = list(rng.choice(eligible, size=k, replace=False))
        n_strong = int(rng.integers(2, 4))
        n_mild = int(rng.integers(0, 3))
        corpus.append((_sentiment_text(rng, label, n_strong, n_mild, drift), label))
    return corpus


def make_eval_dataset(n: int, seed: int) -> list[tuple[str, str, int]]:
    """Attackable examples: drift-free, 3 strong + 4 mild polar words, L in 22-27.

    At those lengths the distance budget 0.15 admits three swaps (four at
    L 27), so an attack can displace the strong words but must leave most
    of the mild ones.
    """
    rng = np.random.default_rng(np.random.SeedSequence([int(seed), 4000]))
    dataset = []
    for i in range(n):
        label = i % 2
        text = _sentiment_text(rng, label, 3, 4, [], length_range=(22, 28))
        dataset.append((f"toy-{i:04d}", text, label))
    return dataset


def make_topic_corpus(n: int, seed: int) -> list[tuple[str, int]]:
    """Four-class topic corpus for multi-class training checks."""
    rng = np.random.default_rng(np.random.SeedSequence([int(seed), 5000]))
    corpus = []
    for i in range(n):
        label = i % 4
        words = list(rng.choice(TOPIC_WORDS[label], size=3, replace=False))
        words += list(rng.choice(FILLERS, size=int(rng.integers(8, 13)), replace=True))
        rng.shuffle(words)
        corpus.append((" ".join(words), label))
    return corpus


@dataclass
class ToyWorld:
    ensemble: Ensemble
    victim: TextClassifier
    lexicon: SynonymLexicon
    dataset: list[tuple[str, str, int]]


_SURROGATE_KINDS = ("builtin-linear", "builtin-nb", "builtin-linear", "builtin-nb")
_VICTIM_IDX = 5


def build_toy_world(
    seed: int = 0,
    train_size: int = 400,
    eval_size: int = 200,
    drift_rate: float = 0.9,
) -> ToyWorld:
    """Train 4 surrogates and a held-out victim, plus an attackable dataset."""
    surrogates = []
    for idx, kind in enumerate(_SURROGATE_KINDS):
        assignment = drift_assignment(seed, idx + 1)
        corpus = make_sentiment_corpus(
            train_size, seed=seed * 10 + idx + 1, assignment=assignment, drift_rate=drift_rate
        )
        surrogates.append(
            train_builtin(kind, corpus, seed=seed + idx, name=f"surrogate-{idx}")
        )
    victim_assignment = drift_assignment(seed, _VICTIM_IDX)
    victim_corpus = make_sentiment_corpus(
        train_size, seed=seed * 10 + _VICTIM_IDX, assignment=victim_assignment, drift_rate=drift_rate
    )
    victim = train_builtin("builtin-linear", victim_corpus, seed=seed + _VICTIM_IDX, name="victim")
    return ToyWorld(
        ensemble=Ensemble(surrogates),
        victim=victim,
        lexicon=build_lexicon(),
        dataset=make_eval_dataset(eval_size, seed),
    )


def materialize_toy_world(out_dir: str | Path, seed: int = 0, eval_size: int = 200) -> dict[str, Path]:
    """Write the toy world to disk in the formats the CLI consumes."""
    out = Path(out_dir)
    (out / "models").mkdir(parents=True, exist_ok=True)
    world = build_toy_world(seed=seed, eval_size=eval_size)

    paths = {
        "lexicon": out / "lexicon.tsv",
        "dataset": out / "dataset.jsonl",
        "ensemble": out / "ensemble.json",
        "victim": out / "victim.json",
        "config": out / "config.json",
    }
    save_lexicon(world.lexicon, paths["lexicon"])
    with paths["dataset"].open("w", encoding="utf-8") as fh:
        for ex_id, text, label in world.dataset:
            fh.write(json.dumps({"id": ex_id, "text": text, "label": label}) + "\n")

    descriptors = []
    for idx, model in enumerate(world.ensemble.submodels):
        rel = f"models/surrogate_{idx}.json"
        save_model(model, out / rel)
        descriptors.append({"kind": model.kind, "path": rel})
    paths["ensemble"].write_text(json.dumps({"models": descriptors}), encoding="utf-8")

    save_model(world.victim, out / "models" / "victim_model.json")
    paths["victim"].write_text(
        json.dumps({"kind": world.victim.kind, "path": "models/victim_model.json"}),
        encoding="utf-8",
    )
    from .attack import AttackConfig

    paths["config"].write_text(
        json.dumps(AttackConfig(seed=seed).to_dict(), indent=2), encoding="utf-8"
    )
    return paths
