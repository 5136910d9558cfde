"""Transferability scoring of pooled candidates and top-K selection.

A candidate sitting in a flat low-confidence region of the surrogate
landscape is more likely to transfer to an unseen victim than one in a
sharp minimum. Flatness is probed cheaply: perturb a few of the
candidate's swapped positions once more (its adjacency region) and
average the equal-weight ensemble confidence over those neighbors. The
negated average is the transferability score tau; the K highest-tau
candidates go to the victim.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .attack import ScoredCandidate, _deltas
from .lexicon import SynonymLexicon
from .models import CountingEnsemble, Ensemble, equal_weights
from .text import TokenizedText

__all__ = [
    "AdjacencyRegion",
    "build_adjacency",
    "transferability_score",
    "score_transferability",
    "select_top_k",
]


@dataclass(frozen=True)
class AdjacencyRegion:
    """m single-swap neighbors of a candidate, one per sampled perturbed position."""

    center: ScoredCandidate
    neighbors: tuple[TokenizedText, ...]
    m: int


def _neighbor_word(text: TokenizedText, position: int, lex: SynonymLexicon) -> str:
    """Closest synonym of the ORIGINAL word that differs from the current token.

    When every synonym coincides with the current token (or none exist),
    fall back to restoring the original word, which always differs at a
    perturbed position.
    """
    current = text.tokens[position]
    for word, _ in lex.lookup(text.origin[position]).synonyms:
        if word != current:
            return word
    return text.origin[position]


def build_adjacency(
    center: ScoredCandidate,
    lex: SynonymLexicon,
    gamma: float,
    seed: int | np.random.Generator | None = None,
) -> AdjacencyRegion:
    """Sample m = ceil(gamma*L) perturbed positions and swap each once more.

    Positions come uniformly without replacement from the candidate's
    perturbed set; fewer perturbed positions than m means all are used.
    """
    L = len(center.text)
    # tiny slack so gamma*L that is mathematically integral never rounds up
    m = math.ceil(gamma * L - 1e-9)
    perturbed = center.text.perturbed_positions()
    if m <= 0 or not perturbed:
        return AdjacencyRegion(center, (), 0)
    if m >= len(perturbed):
        chosen = list(perturbed)
    else:
        rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
        picked = rng.choice(len(perturbed), size=m, replace=False)
        chosen = sorted(perturbed[j] for j in picked)
    neighbors = tuple(
        center.text.replace(i, _neighbor_word(center.text, i, lex)) for i in chosen
    )
    return AdjacencyRegion(center, neighbors, m)


def transferability_score(
    ens: Ensemble | CountingEnsemble,
    region: AdjacencyRegion,
    y: int,
) -> float:
    """tau = negated mean equal-weight confidence over the region.

    An empty region (gamma rounds to zero swaps) falls back to the
    candidate's own equal-weight confidence, reducing selection to
    lowest-confidence ranking.
    """
    w_bar = equal_weights(ens.size)
    if region.neighbors:
        texts = [n.as_string() for n in region.neighbors]
    else:
        texts = [region.center.text.as_string()]
    return float(-_deltas(ens, texts, y, w_bar).mean())


def score_transferability(
    ens: Ensemble | CountingEnsemble,
    pool: Sequence[ScoredCandidate],
    y: int,
    lex: SynonymLexicon,
    gamma: float,
    seed: int = 0,
) -> None:
    """Fill tau on every pooled candidate in place; deterministic per seed."""
    for idx, cand in enumerate(pool):
        rng = np.random.default_rng(np.random.SeedSequence([int(seed), idx]))
        region = build_adjacency(cand, lex, gamma, seed=rng)
        cand.tau = transferability_score(ens, region, y)


def select_top_k(pool: Sequence[ScoredCandidate], K: int) -> list[ScoredCandidate]:
    """First min(K, |pool|) candidates by tau descending.

    Ties prefer lower distance, then earlier pool position. Every
    candidate must already carry a tau.
    """
    if any(c.tau is None for c in pool):
        raise ValueError("select_top_k requires tau on every candidate")
    if K < 1:
        raise ValueError(f"K must be >= 1, got {K}")
    ranked = sorted(
        range(len(pool)), key=lambda i: (-pool[i].tau, pool[i].distance, i)
    )
    return [pool[i] for i in ranked[: min(K, len(pool))]]
