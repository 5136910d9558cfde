"""Loading and batch inference for saved bag-of-words classifiers.

A saved model is a single JSON object with a ``kind`` of
``"builtin-linear"`` or ``"builtin-nb"``, a vocabulary list, and the
fitted parameters.  Both kinds
score a document the same way at serving time: build a word-count row
over the vocabulary, apply one affine map, and normalize with softmax.
The two kinds only differ in how the matrix and offset were fitted and
in the field names they are stored under.
"""

import json
import string
from dataclasses import dataclass, field

import numpy as np

_PUNCT = set(string.punctuation)

_PARAM_FIELDS = {
    "builtin-linear": ("weights", "bias"),
    "builtin-nb": ("log_likelihood", "log_prior"),
}


class ModelLoadError(Exception):
    """Raised when a model file is missing, malformed, or incomplete."""


def _words(text):
    """Lowercase tokens with edge punctuation stripped, empties dropped."""
    out = []
    for raw in text.lower().split():
        start, end = 0, len(raw)
        while start < end and raw[start] in _PUNCT:
            start += 1
        while end > start and raw[end - 1] in _PUNCT:
            end -= 1
        if end > start:
            out.append(raw[start:end])
    return out


def _count_matrix(texts, vocab):
    counts = np.zeros((len(texts), len(vocab)))
    for i, text in enumerate(texts):
        for word in _words(text):
            j = vocab.get(word)
            if j is not None:
                counts[i, j] += 1.0
    return counts


def _softmax(logits):
    shifted = logits - logits.max(axis=1, keepdims=True)
    expd = np.exp(shifted)
    return expd / expd.sum(axis=1, keepdims=True)


@dataclass
class ServedModel:
    """A loaded classifier plus the limits it is served under.

    ``coef`` and ``intercept`` hold the affine parameters regardless of
    kind.  ``device`` is an advisory hint only; inference here is plain
    numpy on the CPU.
    """

    name: str
    kind: str
    num_classes: int
    vocab: dict = field(repr=False)
    coef: np.ndarray = field(repr=False)
    intercept: np.ndarray = field(repr=False)
    max_batch: int = 32
    device: str = "cpu"

    def predict_proba(self, texts):
        """Probability rows for a batch of texts, shape (len(texts), C)."""
        counts = _count_matrix(texts, self.vocab)
        return _softmax(counts @ self.coef + self.intercept)


def load_served_model(path, max_batch=32, device="cpu"):
    """Load a saved classifier from ``path`` into a ServedModel.

    Raises ModelLoadError on unreadable files, bad JSON, unknown kinds,
    missing fields, or parameter shapes that disagree with the header.
    """
    try:
        with open(path, encoding="utf-8") as handle:
            payload = json.load(handle)
    except OSError as exc:
        raise ModelLoadError(f"cannot read model file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ModelLoadError(f"model file {path} is not valid JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise ModelLoadError(f"model file {path} must hold a JSON object")

    kind = payload.get("kind")
    if kind not in _PARAM_FIELDS:
        raise ModelLoadError(f"unsupported model kind {kind!r} in {path}")
    coef_key, intercept_key = _PARAM_FIELDS[kind]
    for key in ("name", "num_classes", "vocab", coef_key, intercept_key):
        if key not in payload:
            raise ModelLoadError(f"model file {path} is missing field {key!r}")

    num_classes = int(payload["num_classes"])
    vocab = {word: j for j, word in enumerate(payload["vocab"])}
    coef = np.asarray(payload[coef_key], dtype=float)
    intercept = np.asarray(payload[intercept_key], dtype=float)
    if coef.shape != (len(vocab), num_classes):
        raise ModelLoadError(
            f"model file {path}: parameter matrix shape {coef.shape} does not "
            f"match vocabulary {len(vocab)} x classes {num_classes}"
        )
    if intercept.shape != (num_classes,):
        raise ModelLoadError(
            f"model file {path}: offset shape {intercept.shape} does not "
            f"match {num_classes} classes"
        )
    return ServedModel(
        name=str(payload["name"]),
        kind=kind,
        num_classes=num_classes,
        vocab=vocab,
        coef=coef,
        intercept=intercept,
        max_batch=int(max_batch),
        device=device,
    )
