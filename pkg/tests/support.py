"""Test helpers shared across modules."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from sep_attack.models import TextClassifier


class PresetClassifier(TextClassifier):
    """Returns hand-set probability rows per exact input string."""

    kind = "preset"

    def __init__(
        self,
        rows: dict[str, Sequence[float]],
        num_classes: int,
        default: Sequence[float] | None = None,
        name: str = "preset",
    ):
        self.rows = {k: np.asarray(v, dtype=float) for k, v in rows.items()}
        self.num_classes = num_classes
        self.default = (
            np.asarray(default, dtype=float)
            if default is not None
            else np.full(num_classes, 1.0 / num_classes)
        )
        self.name = name

    def predict_proba(self, texts: Sequence[str]) -> np.ndarray:
        if len(texts) == 0:
            raise ValueError("empty batch")
        return np.stack([self.rows.get(t, self.default) for t in texts])
