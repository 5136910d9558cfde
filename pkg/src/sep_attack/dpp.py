"""Diversity-based selection of ensemble weight vectors.

A weight space of D candidate vectors (rows uniform on [0,1]^N) induces the
kernel K = W W^T, whose principal minors measure how spread out a subset of
rows is: det(K_S) is the squared volume spanned by those rows. Subsets are
ranked by this volume, so near-duplicate weightings are excluded and the E
chosen vectors probe genuinely different mixtures of the surrogates.

Note K has rank at most N, so any global normalization by det(K) would be
zero for D > N; only the subset determinant matters for ranking. Selection
is greedy volume maximization at fixed cardinality E by default, with a
stochastic sequential mode behind ``mode="sampled"``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

__all__ = [
    "WeightSpace",
    "SelectedWeights",
    "generate_weight_space",
    "kernel_matrix",
    "subset_score",
    "select_diverse_weights",
    "save_weights",
    "load_weights",
]


@dataclass(frozen=True)
class WeightSpace:
    """D candidate weight vectors over N submodels, entries in [0,1]."""

    matrix: np.ndarray
    seed: int

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
            raise ValueError(f"weight space must be 2-d and non-empty, got shape {m.shape}")
        if m.min() < 0.0 or m.max() > 1.0:
            raise ValueError("weight space entries must lie in [0,1]")
        object.__setattr__(self, "matrix", m)

    @property
    def num_candidates(self) -> int:
        return self.matrix.shape[0]

    @property
    def num_models(self) -> int:
        return self.matrix.shape[1]


@dataclass(frozen=True)
class SelectedWeights:
    """E weight vectors chosen from a weight space.

    ``indices`` records the source rows; it is None for synthetic vectors
    that never lived in a weight space (the equal-weights baseline).
    """

    vectors: np.ndarray
    indices: tuple[int, ...] | None = None

    def __post_init__(self):
        v = np.atleast_2d(np.asarray(self.vectors, dtype=float))
        if self.indices is not None:
            idx = tuple(int(i) for i in self.indices)
            if len(idx) != v.shape[0]:
                raise ValueError("indices length must match number of vectors")
            if len(set(idx)) != len(idx):
                raise ValueError("selected indices must be distinct")
            object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "vectors", v)

    @property
    def size(self) -> int:
        return self.vectors.shape[0]

    def __iter__(self):
        return iter(self.vectors)


def generate_weight_space(D: int, N: int, seed: int) -> WeightSpace:
    """D x N matrix of i.i.d. uniform [0,1] entries; deterministic per seed."""
    if D < 1 or N < 1:
        raise ValueError(f"need D >= 1 and N >= 1, got D={D}, N={N}")
    rng = np.random.default_rng(np.random.SeedSequence([int(seed), 0]))
    return WeightSpace(rng.uniform(0.0, 1.0, size=(D, N)), seed=int(seed))


def kernel_matrix(ws: WeightSpace) -> np.ndarray:
    """Similarity kernel K = W W^T, shape [D, D], symmetric PSD."""
    return ws.matrix @ ws.matrix.T


def subset_score(K: np.ndarray, subset: Sequence[int]) -> float:
    """det of the principal submatrix of K at ``subset``; empty subset scores 1.

    Index order does not matter. Near-singular submatrices can produce a
    tiny negative determinant from rounding; those are retried with a
    1e-12 diagonal jitter and clamped at zero.
    """
    idx = [int(i) for i in subset]
    if len(set(idx)) != len(idx):
        raise ValueError(f"duplicate index in subset {idx}")
    D = K.shape[0]
    for i in idx:
        if not 0 <= i < D:
            raise ValueError(f"index {i} out of range for D={D}")
    if not idx:
        return 1.0
    sub = K[np.ix_(idx, idx)]
    det = float(np.linalg.det(sub))
    if det < 0.0:
        det = float(np.linalg.det(sub + 1e-12 * np.eye(len(idx))))
        if -1e-9 < det < 0.0:
            det = 0.0
    return det


def select_diverse_weights(
    ws: WeightSpace,
    E: int,
    mode: str = "map",
    seed: int | None = None,
) -> SelectedWeights:
    """Pick E rows of the weight space by determinant volume.

    ``mode="map"`` (default) is greedy maximization: grow the subset one
    row at a time, always taking the row with the largest augmented score,
    ties to the lowest index. Deterministic given the weight space.

    ``mode="sampled"`` draws each next row with probability proportional
    to its (non-negative) score gain, seeded from ``seed`` (defaults to
    the weight space seed), for callers that want the stochastic variant.
    """
    if E < 1:
        raise ValueError(f"E must be positive, got {E}")
    if E > ws.num_candidates:
        raise ValueError(f"cannot select E={E} from D={ws.num_candidates} candidates")
    if mode not in ("map", "sampled"):
        raise ValueError(f"unknown selection mode {mode!r}")

    K = kernel_matrix(ws)
    rng = None
    if mode == "sampled":
        base = ws.seed if seed is None else int(seed)
        rng = np.random.default_rng(np.random.SeedSequence([base, 1]))

    chosen: list[int] = []
    remaining = list(range(ws.num_candidates))
    for _ in range(E):
        scores = np.array([subset_score(K, chosen + [i]) for i in remaining])
        if rng is None:
            pick = remaining[int(np.argmax(scores))]
        else:
            mass = np.clip(scores, 0.0, None)
            if mass.sum() <= 0.0:
                probs = np.full(len(remaining), 1.0 / len(remaining))
            else:
                probs = mass / mass.sum()
            pick = remaining[int(rng.choice(len(remaining), p=probs))]
        chosen.append(pick)
        remaining.remove(pick)
    return SelectedWeights(ws.matrix[chosen], indices=tuple(chosen))


def save_weights(selected: SelectedWeights, path: str | Path) -> None:
    """Write the selected vectors as a JSON array of arrays."""
    Path(path).write_text(json.dumps(selected.vectors.tolist()), encoding="utf-8")


def load_weights(path: str | Path) -> SelectedWeights:
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    vectors = np.asarray(payload, dtype=float)
    if vectors.ndim != 2:
        raise ValueError(f"weights file must hold an array of arrays, got shape {vectors.shape}")
    return SelectedWeights(vectors)
