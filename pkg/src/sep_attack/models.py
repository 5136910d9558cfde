"""Classifier contract, builtin desk-scale models, remote client, and query accounting.

Every classifier exposes ``predict_proba(texts) -> [batch, num_classes]``
rows that sum to one. Surrogate submodels are scored without limit; the
victim is reachable only through :func:`victim_predict`, which yields hard
labels and charges a per-example :class:`QueryLedger`.

The builtin kinds are deliberately lightweight stand-ins for large neural
families: a multinomial logistic regression and a multinomial naive Bayes
over bag-of-words counts. They train deterministically in milliseconds yet
have genuinely different decision boundaries, which is the property an
ensemble attack actually needs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np
import requests

from .errors import (
    DegenerateCorpusError,
    QueryBudgetExceededError,
    RemoteModelError,
)
from .text import TokenizedText, is_punctuation

__all__ = [
    "TextClassifier",
    "LinearBowClassifier",
    "NaiveBayesClassifier",
    "RemoteClassifier",
    "Ensemble",
    "CountingEnsemble",
    "QueryLedger",
    "train_builtin",
    "confidence_score",
    "equal_weights",
    "predict_label",
    "victim_predict",
    "save_model",
    "load_model",
    "load_descriptor",
    "load_ensemble",
]

PROBABILITY_TOL = 1e-6


def _words(text: str) -> list[str]:
    """Model-side word extraction: lowercase split with edge punctuation stripped."""
    out = []
    for word in text.lower().split():
        while word and is_punctuation(word[0]):
            word = word[1:]
        while word and is_punctuation(word[-1]):
            word = word[:-1]
        if word:
            out.append(word)
    return out


class TextClassifier:
    """Uniform probability-scoring contract over text inputs."""

    name: str
    kind: str
    num_classes: int

    def predict_proba(self, texts: Sequence[str]) -> np.ndarray:
        """Probability rows, shape ``[len(texts), num_classes]``, each summing to 1."""
        raise NotImplementedError


def _count_matrix(texts: Sequence[str], vocab: dict[str, int]) -> np.ndarray:
    counts = np.zeros((len(texts), len(vocab)))
    for row, text in enumerate(texts):
        for word in _words(text):
            idx = vocab.get(word)
            if idx is not None:
                counts[row, idx] += 1.0
    return counts


def _softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=1, keepdims=True)
    expd = np.exp(shifted)
    return expd / expd.sum(axis=1, keepdims=True)


class LinearBowClassifier(TextClassifier):
    """Multinomial logistic regression on bag-of-words counts."""

    kind = "builtin-linear"

    def __init__(self, vocab: dict[str, int], weights: np.ndarray, bias: np.ndarray, name: str = "linear"):
        weights = np.asarray(weights, dtype=float)
        bias = np.asarray(bias, dtype=float)
        if weights.shape != (len(vocab), bias.shape[0]):
            raise ValueError(f"weights {weights.shape} inconsistent with vocab/bias")
        self.vocab = vocab
        self.weights = weights
        self.bias = bias
        self.name = name
        self.num_classes = int(bias.shape[0])

    def predict_proba(self, texts: Sequence[str]) -> np.ndarray:
        if len(texts) == 0:
            raise ValueError("empty batch")
        counts = _count_matrix(texts, self.vocab)
        return _softmax(counts @ self.weights + self.bias)


class NaiveBayesClassifier(TextClassifier):
    """Multinomial naive Bayes with add-one smoothing on bag-of-words counts."""

    kind = "builtin-nb"

    def __init__(self, vocab: dict[str, int], log_prior: np.ndarray, log_likelihood: np.ndarray, name: str = "nb"):
        log_prior = np.asarray(log_prior, dtype=float)
        log_likelihood = np.asarray(log_likelihood, dtype=float)
        if log_likelihood.shape != (len(vocab), log_prior.shape[0]):
            raise ValueError("log_likelihood shape inconsistent with vocab/prior")
        self.vocab = vocab
        self.log_prior = log_prior
        self.log_likelihood = log_likelihood
        self.name = name
        self.num_classes = int(log_prior.shape[0])

    def predict_proba(self, texts: Sequence[str]) -> np.ndarray:
        if len(texts) == 0:
            raise ValueError("empty batch")
        counts = _count_matrix(texts, self.vocab)
        return _softmax(counts @ self.log_likelihood + self.log_prior)


class RemoteClassifier(TextClassifier):
    """Client for the HTTP prediction protocol (POST /v1/predict)."""

    kind = "remote"

    def __init__(self, url: str, num_classes: int | None = None, timeout: float = 30.0):
        self.url = url.rstrip("/")
        self.name = self.url
        self.timeout = timeout
        self._num_classes = num_classes

    @property
    def num_classes(self) -> int:
        if self._num_classes is None:
            try:
                resp = requests.get(f"{self.url}/v1/health", timeout=self.timeout)
                resp.raise_for_status()
                self._num_classes = int(resp.json()["num_classes"])
            except (requests.RequestException, KeyError, ValueError, TypeError) as exc:
                raise RemoteModelError(f"health check failed for {self.url}: {exc}") from exc
        return self._num_classes

    def predict_proba(self, texts: Sequence[str]) -> np.ndarray:
        if len(texts) == 0:
            raise ValueError("empty batch")
        try:
            resp = requests.post(
                f"{self.url}/v1/predict", json={"texts": list(texts)}, timeout=self.timeout
            )
        except requests.RequestException as exc:
            raise RemoteModelError(f"transport failure for {self.url}: {exc}") from exc
        if resp.status_code != 200:
            raise RemoteModelError(f"{self.url} returned {resp.status_code}: {resp.text[:200]}")
        try:
            body = resp.json()
            num_classes = int(body["num_classes"])
            probs = np.asarray(body["probabilities"], dtype=float)
        except (ValueError, KeyError, TypeError) as exc:
            raise RemoteModelError(f"malformed response from {self.url}: {exc}") from exc
        if self._num_classes is None:
            self._num_classes = num_classes
        if num_classes != self._num_classes or probs.shape != (len(texts), num_classes):
            raise RemoteModelError(
                f"dimension mismatch from {self.url}: got {probs.shape}, "
                f"expected {(len(texts), self._num_classes)}"
            )
        if not np.allclose(probs.sum(axis=1), 1.0, atol=PROBABILITY_TOL):
            raise RemoteModelError(f"probability rows from {self.url} do not sum to 1")
        return probs


def train_builtin(
    kind: str,
    corpus: Sequence[tuple[str, int]],
    seed: int = 0,
    name: str | None = None,
) -> TextClassifier:
    """Train a builtin classifier on (text, label) pairs; deterministic per seed.

    ``builtin-linear`` runs full-batch gradient descent on the softmax
    cross-entropy; ``builtin-nb`` fits closed-form smoothed counts. Raises
    :class:`DegenerateCorpusError` when the corpus has fewer than two
    classes or fewer than ten examples.
    """
    if len(corpus) < 10:
        raise DegenerateCorpusError(f"corpus too small ({len(corpus)} examples, need >= 10)")
    labels = np.array([label for _, label in corpus], dtype=int)
    classes = set(labels.tolist())
    if len(classes) < 2:
        raise DegenerateCorpusError("corpus covers a single class")
    num_classes = int(labels.max()) + 1

    vocab_words = sorted({word for text, _ in corpus for word in _words(text)})
    vocab = {word: idx for idx, word in enumerate(vocab_words)}
    counts = _count_matrix([text for text, _ in corpus], vocab)

    if kind == "builtin-linear":
        rng = np.random.default_rng(seed)
        weights = rng.normal(0.0, 0.01, size=(len(vocab), num_classes))
        bias = np.zeros(num_classes)
        onehot = np.eye(num_classes)[labels]
        lr, l2 = 0.5, 1e-3
        for _ in range(300):
            probs = _softmax(counts @ weights + bias)
            grad = counts.T @ (probs - onehot) / len(corpus)
            weights -= lr * (grad + l2 * weights)
            bias -= lr * (probs - onehot).mean(axis=0)
        return LinearBowClassifier(vocab, weights, bias, name=name or "linear")

    if kind == "builtin-nb":
        word_counts = np.zeros((len(vocab), num_classes))
        class_counts = np.zeros(num_classes)
        for row, label in enumerate(labels):
            word_counts[:, label] += counts[row]
            class_counts[label] += 1
        log_prior = np.log(np.maximum(class_counts, 1e-12) / len(corpus))
        log_likelihood = np.log(
            (word_counts + 1.0) / (word_counts.sum(axis=0, keepdims=True) + len(vocab))
        )
        return NaiveBayesClassifier(vocab, log_prior, log_likelihood, name=name or "nb")

    raise ValueError(f"unknown builtin kind {kind!r}")


@dataclass
class Ensemble:
    """N surrogate submodels sharing one label space."""

    submodels: list[TextClassifier]

    def __post_init__(self):
        if not self.submodels:
            raise ValueError("an ensemble needs at least one submodel")
        num_classes = {m.num_classes for m in self.submodels}
        if len(num_classes) != 1:
            raise ValueError(f"submodels disagree on num_classes: {sorted(num_classes)}")

    @property
    def size(self) -> int:
        return len(self.submodels)

    @property
    def num_classes(self) -> int:
        return self.submodels[0].num_classes

    def margins(self, texts: Sequence[str], y: int) -> np.ndarray:
        """Per-submodel margin p(y) - max p(y'≠y) for each text; shape ``[batch, N]``."""
        cols = []
        for model in self.submodels:
            probs = model.predict_proba(texts)
            others = np.delete(probs, y, axis=1)
            cols.append(probs[:, y] - others.max(axis=1))
        return np.stack(cols, axis=1)


class CountingEnsemble:
    """View of an ensemble that counts how many texts it has scored.

    One view per attacked example keeps the tally private to that example,
    so concurrent sessions over the same shared ensemble never race.
    """

    def __init__(self, ensemble: Ensemble):
        self._ensemble = ensemble
        self.texts_scored = 0

    @property
    def size(self) -> int:
        return self._ensemble.size

    @property
    def num_classes(self) -> int:
        return self._ensemble.num_classes

    @property
    def submodels(self) -> list[TextClassifier]:
        return self._ensemble.submodels

    def margins(self, texts: Sequence[str], y: int) -> np.ndarray:
        self.texts_scored += len(texts)
        return self._ensemble.margins(texts, y)


def equal_weights(n: int) -> np.ndarray:
    return np.full(n, 1.0 / n)


def confidence_score(
    ens: Ensemble | CountingEnsemble,
    text: TokenizedText | str,
    y: int,
    w: np.ndarray | Sequence[float],
) -> float:
    """Weighted margin sum over submodels: sum_n w_n * (p_n(y) - max p_n(y'≠y)).

    Positive means the ensemble is confidently correct on label ``y``; the
    attack drives this down.
    """
    w = np.asarray(w, dtype=float)
    if w.shape != (ens.size,):
        raise ValueError(f"weight vector has shape {w.shape}, expected ({ens.size},)")
    raw = text.as_string() if isinstance(text, TokenizedText) else text
    return float(ens.margins([raw], y)[0] @ w)


@dataclass
class QueryLedger:
    """Per-example victim query counter with a hard budget."""

    budget: int
    count: int = 0

    def __post_init__(self):
        if self.budget < 1:
            raise ValueError("budget must be positive")

    @property
    def remaining(self) -> int:
        return self.budget - self.count

    def charge(self) -> None:
        if self.count >= self.budget:
            raise QueryBudgetExceededError(
                f"victim query budget of {self.budget} exhausted"
            )
        self.count += 1


def predict_label(c: TextClassifier, text: TokenizedText | str) -> int:
    """Uncounted argmax label; used for the pre-attack correctness check only."""
    raw = text.as_string() if isinstance(text, TokenizedText) else text
    return int(np.argmax(c.predict_proba([raw])[0]))


def victim_predict(c: TextClassifier, ledger: QueryLedger, text: TokenizedText | str) -> int:
    """Hard-label victim access: charges the ledger, then returns the argmax label."""
    ledger.charge()
    return predict_label(c, text)


# ---------------------------------------------------------------------------
# Persistence: saved-model JSON and descriptor files.

def save_model(model: TextClassifier, path: str | Path) -> None:
    if isinstance(model, LinearBowClassifier):
        payload = {
            "kind": model.kind,
            "name": model.name,
            "num_classes": model.num_classes,
            "vocab": sorted(model.vocab, key=model.vocab.get),
            "weights": model.weights.tolist(),
            "bias": model.bias.tolist(),
        }
    elif isinstance(model, NaiveBayesClassifier):
        payload = {
            "kind": model.kind,
            "name": model.name,
            "num_classes": model.num_classes,
            "vocab": sorted(model.vocab, key=model.vocab.get),
            "log_prior": model.log_prior.tolist(),
            "log_likelihood": model.log_likelihood.tolist(),
        }
    else:
        raise ValueError(f"cannot save classifier of kind {model.kind!r}")
    Path(path).write_text(json.dumps(payload), encoding="utf-8")


def load_model(path: str | Path) -> TextClassifier:
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    vocab = {word: idx for idx, word in enumerate(payload["vocab"])}
    kind = payload["kind"]
    if kind == "builtin-linear":
        return LinearBowClassifier(
            vocab,
            np.array(payload["weights"]),
            np.array(payload["bias"]),
            name=payload.get("name", "linear"),
        )
    if kind == "builtin-nb":
        return NaiveBayesClassifier(
            vocab,
            np.array(payload["log_prior"]),
            np.array(payload["log_likelihood"]),
            name=payload.get("name", "nb"),
        )
    raise ValueError(f"cannot load classifier of kind {kind!r}")


def load_descriptor(descriptor: dict | str | Path, base_dir: str | Path | None = None) -> TextClassifier:
    """Resolve a classifier descriptor: ``{"kind": ..., "path"|"url": ...}``.

    Relative model paths resolve against ``base_dir`` (normally the
    directory of the descriptor file itself).
    """
    if not isinstance(descriptor, dict):
        file_path = Path(descriptor)
        base_dir = file_path.parent
        descriptor = json.loads(file_path.read_text(encoding="utf-8"))
    kind = descriptor.get("kind")
    if kind == "remote":
        return RemoteClassifier(descriptor["url"])
    if kind in ("builtin-linear", "builtin-nb"):
        model_path = Path(descriptor["path"])
        if not model_path.is_absolute() and base_dir is not None:
            model_path = Path(base_dir) / model_path
        model = load_model(model_path)
        if model.kind != kind:
            raise ValueError(f"descriptor kind {kind!r} but file holds {model.kind!r}")
        return model
    raise ValueError(f"unknown descriptor kind {kind!r}")


def load_ensemble(path: str | Path) -> Ensemble:
    """Load an ensemble file: ``{"models": [descriptor, ...]}``."""
    file_path = Path(path)
    payload = json.loads(file_path.read_text(encoding="utf-8"))
    models = [load_descriptor(d, base_dir=file_path.parent) for d in payload["models"]]
    return Ensemble(models)
