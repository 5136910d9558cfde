"""Candidate generation on the surrogate ensemble.

One weight vector drives one greedy session: score word importance by
deletion, sample an update order, swap words toward low ensemble
confidence until the perturbation rate overshoots eta, then restore the
least useful swaps until the rate is back under epsilon. Iterating T times
per weight vector and pooling across the E weight vectors yields up to
E*T admissible candidates, all within the epsilon budget.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import NoReplaceablePositionsError
from .lexicon import SynonymLexicon, replaceable_positions
from .models import CountingEnsemble, Ensemble
from .text import TokenizedText, detokenize
from .dpp import SelectedWeights

__all__ = [
    "AttackConfig",
    "ImportanceVector",
    "ScoredCandidate",
    "word_importance",
    "sampling_distribution",
    "replacement_order",
    "update_important_words",
    "remove_unimportant_words",
    "generate_candidates",
]

log = logging.getLogger(__name__)

ORDER_MODES = ("sampled", "descending")


@dataclass(frozen=True)
class AttackConfig:
    """Attack hyperparameters with the reference defaults.

    epsilon is the admissible perturbation rate, eta the deliberate
    overshoot during the update phase, T the iterations per weight vector,
    gamma the adjacency-region size coefficient, K the victim query
    budget. num_weights (E) and weight_space_size (D) drive weight
    selection when no precomputed weights are supplied.
    """

    epsilon: float = 0.15
    eta: float = 0.2
    T: int = 10
    gamma: float = 0.02
    K: int = 10
    order_mode: str = "sampled"
    seed: int = 0
    num_weights: int = 4
    weight_space_size: int = 100

    def __post_init__(self):
        if not 0.0 < self.epsilon < self.eta <= 1.0:
            raise ValueError(
                f"need 0 < epsilon < eta <= 1, got epsilon={self.epsilon}, eta={self.eta}"
            )
        if self.T < 1:
            raise ValueError(f"T must be >= 1, got {self.T}")
        if not 0.0 <= self.gamma <= 1.0:
            raise ValueError(f"gamma must be in [0,1], got {self.gamma}")
        if self.K < 1:
            raise ValueError(f"K must be >= 1, got {self.K}")
        if self.order_mode not in ORDER_MODES:
            raise ValueError(f"order_mode must be one of {ORDER_MODES}, got {self.order_mode!r}")
        if self.num_weights < 1:
            raise ValueError(f"num_weights must be >= 1, got {self.num_weights}")
        if self.weight_space_size < self.num_weights:
            raise ValueError(
                f"weight_space_size {self.weight_space_size} < num_weights {self.num_weights}"
            )

    @classmethod
    def from_dict(cls, payload: dict) -> "AttackConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(payload) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**payload)

    @classmethod
    def from_file(cls, path: str | Path) -> "AttackConfig":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def with_overrides(self, **kwargs) -> "AttackConfig":
        return replace(self, **kwargs)


@dataclass(frozen=True)
class ImportanceVector:
    """Deletion-based importance per replaceable position."""

    positions: tuple[int, ...]
    scores: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.scores, dtype=float)
        if s.shape != (len(self.positions),):
            raise ValueError("scores and positions lengths differ")
        object.__setattr__(self, "scores", s)

    def __len__(self) -> int:
        return len(self.positions)


@dataclass
class ScoredCandidate:
    """One pooled adversarial candidate with its provenance and scores.

    tau stays None until the transfer-selection stage fills it.
    """

    text: TokenizedText
    weight_index: int
    iteration: int
    confidence: float
    distance: float
    tau: float | None = None


def _distance(cand: TokenizedText) -> float:
    return len(cand.perturbed_positions()) / len(cand)


def _deltas(ens: Ensemble | CountingEnsemble, texts: Sequence[str], y: int, w: np.ndarray) -> np.ndarray:
    return ens.margins(texts, y) @ np.asarray(w, dtype=float)


def word_importance(
    ens: Ensemble | CountingEnsemble,
    text: TokenizedText,
    y: int,
    w_e: np.ndarray,
    lex: SynonymLexicon,
) -> ImportanceVector:
    """Importance of each replaceable position: negated confidence with it deleted.

    Deletions are applied to the current candidate text, so scores shift as
    the candidate evolves across iterations.
    """
    positions = replaceable_positions(text, lex)
    if not positions:
        raise NoReplaceablePositionsError("text has no replaceable positions under this lexicon")
    deleted = [
        detokenize(text.tokens[:i] + text.tokens[i + 1 :]) for i in positions
    ]
    scores = -_deltas(ens, deleted, y, w_e)
    return ImportanceVector(tuple(positions), scores)


def sampling_distribution(iv: ImportanceVector, literal_exponent: bool = False) -> np.ndarray:
    """Softmax over importance scores rescaled toward unit range.

    The scores are multiplied by 10^ceil(-log10(max - min)) before the
    softmax so sub-unit score ranges still produce a sharply peaked
    distribution. ``literal_exponent`` flips the exponent sign to
    10^ceil(log10(range)) for comparison runs. Equal scores yield the
    exact uniform distribution.
    """
    scores = iv.scores
    lo, hi = float(scores.min()), float(scores.max())
    if hi == lo:
        return np.full(len(scores), 1.0 / len(scores))
    span = hi - lo
    exponent = math.ceil(math.log10(span)) if literal_exponent else math.ceil(-math.log10(span))
    scaled = scores * (10.0 ** exponent)
    shifted = scaled - scaled.max()
    expd = np.exp(shifted)
    return expd / expd.sum()


def replacement_order(
    P: np.ndarray | Sequence[float],
    mode: str = "sampled",
    seed: int | np.random.Generator | None = None,
) -> tuple[int, ...]:
    """Visit order over the positions of P (indices into P, not the text).

    ``sampled`` draws without replacement proportional to remaining mass,
    falling back to uniform when the remaining mass is zero;
    ``descending`` sorts by probability, ties to the lower index.
    """
    P = np.asarray(P, dtype=float)
    n = len(P)
    if mode == "descending":
        return tuple(sorted(range(n), key=lambda j: (-P[j], j)))
    if mode != "sampled":
        raise ValueError(f"unknown order mode {mode!r}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    order: list[int] = []
    remaining = list(range(n))
    while remaining:
        mass = P[remaining]
        total = mass.sum()
        if total <= 0.0:
            probs = np.full(len(remaining), 1.0 / len(remaining))
        else:
            probs = mass / total
        pick = remaining[int(rng.choice(len(remaining), p=probs))]
        order.append(pick)
        remaining.remove(pick)
    return tuple(order)


def update_important_words(
    ens: Ensemble | CountingEnsemble,
    cand: TokenizedText,
    y: int,
    w_e: np.ndarray,
    O: Sequence[int],
    lex: SynonymLexicon,
    eta: float,
) -> TokenizedText:
    """Walk the order, installing at each position the confidence-minimizing word.

    The candidate set at position i is the current token plus the
    synonyms of the ORIGINAL word there, so a swap happens only when some
    synonym strictly lowers the ensemble confidence. Stops once the
    perturbation rate reaches eta.
    """
    for i in O:
        entry = lex.lookup(cand.origin[i])
        current = cand.tokens[i]
        words = [current] + [s for s, _ in entry.synonyms if s != current]
        if len(words) > 1:
            texts = [cand.replace(i, word).as_string() for word in words]
            deltas = _deltas(ens, texts, y, w_e)
            best = int(np.argmin(deltas))
            if best > 0:
                cand = cand.replace(i, words[best])
        if _distance(cand) >= eta:
            break
    return cand


def remove_unimportant_words(
    ens: Ensemble | CountingEnsemble,
    cand: TokenizedText,
    y: int,
    w_e: np.ndarray,
    epsilon: float,
    trace: list | None = None,
) -> TokenizedText:
    """Restore original words, least-useful first, until distance <= epsilon.

    Each pass scores every perturbed position with the confidence the
    candidate would have after restoring it, then restores the minimum
    (ties to the lowest position). ``trace`` collects
    (restored_position, {position: alpha}) tuples for auditing.
    """
    while _distance(cand) > epsilon:
        perturbed = cand.perturbed_positions()
        texts = [cand.restore(i).as_string() for i in perturbed]
        alphas = _deltas(ens, texts, y, w_e)
        best = perturbed[int(np.argmin(alphas))]
        if trace is not None:
            trace.append((best, dict(zip(perturbed, alphas.tolist()))))
        cand = cand.restore(best)
    return cand


def generate_candidates(
    ens: Ensemble | CountingEnsemble,
    original: TokenizedText,
    y: int,
    weights: SelectedWeights,
    cfg: AttackConfig,
    lex: SynonymLexicon,
    seed: int | None = None,
) -> list[ScoredCandidate]:
    """Run T update/remove iterations per weight vector; pool every result.

    Each weight vector restarts from the original text; within one weight
    vector the candidate carries over between iterations. Texts with no
    replaceable position degrade to no-op candidates (logged once). All
    pooled candidates satisfy distance <= cfg.epsilon.
    """
    base_seed = cfg.seed if seed is None else int(seed)
    pool: list[ScoredCandidate] = []
    warned = False
    for e_idx, w_e in enumerate(weights):
        rng = np.random.default_rng(np.random.SeedSequence([base_seed, e_idx]))
        cand = original
        for t in range(cfg.T):
            try:
                iv = word_importance(ens, cand, y, w_e, lex)
            except NoReplaceablePositionsError:
                if not warned:
                    log.warning(
                        "no replaceable positions; emitting unmodified candidates"
                    )
                    warned = True
                pool.append(
                    ScoredCandidate(
                        text=cand,
                        weight_index=e_idx,
                        iteration=t,
                        confidence=float(_deltas(ens, [cand.as_string()], y, w_e)[0]),
                        distance=_distance(cand),
                    )
                )
                continue
            P = sampling_distribution(iv)
            order = replacement_order(P, mode=cfg.order_mode, seed=rng)
            text_order = [iv.positions[j] for j in order]
            cand = update_important_words(ens, cand, y, w_e, text_order, lex, cfg.eta)
            cand = remove_unimportant_words(ens, cand, y, w_e, cfg.epsilon)
            pool.append(
                ScoredCandidate(
                    text=cand,
                    weight_index=e_idx,
                    iteration=t,
                    confidence=float(_deltas(ens, [cand.as_string()], y, w_e)[0]),
                    distance=_distance(cand),
                )
            )
    return pool
