"""End-to-end orchestration: dataset in, per-example attack, report out.

Per example the flow is: check the victim is right on the original
(uncounted; wrong originals are excluded from the success-rate
denominator), generate the candidate pool on the surrogates, rank by
transferability, then submit candidates best-first to the victim until a
label flip or the query budget runs out. Remote-victim transport failures
mark the example errored and drop it from the denominator instead of
polluting the rate.

Reports are written with stable field order and no timing data, so two
runs with the same seed produce byte-identical files.
"""

from __future__ import annotations

import csv
import json
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .attack import AttackConfig, ScoredCandidate, generate_candidates
from .dpp import SelectedWeights, generate_weight_space, select_diverse_weights
from .errors import DatasetFormatError, RemoteModelError
from .lexicon import SynonymLexicon
from .models import (
    CountingEnsemble,
    Ensemble,
    QueryLedger,
    TextClassifier,
    predict_label,
    victim_predict,
)
from .selection import score_transferability, select_top_k
from .text import tokenize

__all__ = [
    "AttackRecord",
    "RunSummary",
    "load_dataset",
    "run_attack",
    "equal_weights_baseline",
    "write_report",
]

log = logging.getLogger(__name__)

Example = tuple[str, str, int]


@dataclass
class AttackRecord:
    """Outcome of attacking one example. wall_time_ms is never persisted."""

    example_id: str
    text: str
    label: int
    victim_correct: bool
    errored: bool = False
    selected: list[ScoredCandidate] = field(default_factory=list)
    queries_used: int = 0
    success: bool = False
    final: ScoredCandidate | None = None
    surrogate_evals: int = 0
    wall_time_ms: float = 0.0


@dataclass(frozen=True)
class RunSummary:
    dataset_name: str
    victim_name: str
    evaluated: int
    successes: int
    asr: float
    errored: int
    mean_queries: float
    mean_perturbation: float
    mean_surrogate_evals: float
    config: dict


def load_dataset(path: str | Path) -> list[Example]:
    """Read (id, text, label) examples from JSONL or two-column CSV.

    JSONL rows need "id", "text", and a non-negative integer "label".
    CSV rows are (text, label) with ids auto-assigned; a leading header
    row is recognized by its non-numeric label column.
    """
    file_path = Path(path)
    raw = file_path.read_text(encoding="utf-8")
    stripped = raw.lstrip()
    if stripped.startswith("{"):
        return _load_jsonl(raw)
    return _load_csv(raw)


def _load_jsonl(raw: str) -> list[Example]:
    examples: list[Example] = []
    for lineno, line in enumerate(raw.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            row = json.loads(line)
        except json.JSONDecodeError as exc:
            raise DatasetFormatError(f"invalid JSON ({exc.msg})", line=lineno) from exc
        if not isinstance(row, dict) or not {"id", "text", "label"} <= set(row):
            raise DatasetFormatError('expected keys "id", "text", "label"', line=lineno)
        label = row["label"]
        if not isinstance(label, int) or isinstance(label, bool) or label < 0:
            raise DatasetFormatError(f"label must be a non-negative integer, got {label!r}", line=lineno)
        text = row["text"]
        if not isinstance(text, str) or not text.strip():
            raise DatasetFormatError("text must be a non-empty string", line=lineno)
        examples.append((str(row["id"]), text, label))
    if not examples:
        raise DatasetFormatError("dataset contains no examples")
    return examples


def _load_csv(raw: str) -> list[Example]:
    examples: list[Example] = []
    rows = list(csv.reader(raw.splitlines()))
    start = 0
    if rows and len(rows[0]) >= 2 and not rows[0][1].strip().lstrip("-").isdigit():
        start = 1
    for lineno, row in enumerate(rows[start:], start=start + 1):
        if not row:
            continue
        if len(row) != 2:
            raise DatasetFormatError(f"expected 2 columns, got {len(row)}", line=lineno)
        text, label_raw = row
        try:
            label = int(label_raw)
        except ValueError as exc:
            raise DatasetFormatError(f"label must be an integer, got {label_raw!r}", line=lineno) from exc
        if label < 0:
            raise DatasetFormatError(f"label must be non-negative, got {label}", line=lineno)
        if not text.strip():
            raise DatasetFormatError("text must be non-empty", line=lineno)
        examples.append((f"ex-{len(examples):04d}", text, label))
    if not examples:
        raise DatasetFormatError("dataset contains no examples")
    return examples


def _default_weights(cfg: AttackConfig, num_models: int) -> SelectedWeights:
    ws = generate_weight_space(cfg.weight_space_size, num_models, cfg.seed)
    return select_diverse_weights(ws, cfg.num_weights)


def _attack_one(
    index: int,
    example: Example,
    ensemble: Ensemble,
    victim: TextClassifier,
    lexicon: SynonymLexicon,
    cfg: AttackConfig,
    weights: SelectedWeights,
) -> AttackRecord:
    ex_id, text, y = example
    started = time.perf_counter()
    record = AttackRecord(example_id=ex_id, text=text, label=y, victim_correct=False)
    seeder = np.random.default_rng(np.random.SeedSequence([cfg.seed, index]))
    gen_seed = int(seeder.integers(2**31))
    sel_seed = int(seeder.integers(2**31))
    try:
        tokenized = tokenize(text)
        victim_label = predict_label(victim, text)
        if victim_label != y:
            return record
        record.victim_correct = True

        counting = CountingEnsemble(ensemble)
        pool = generate_candidates(counting, tokenized, y, weights, cfg, lexicon, seed=gen_seed)
        score_transferability(counting, pool, y, lexicon, cfg.gamma, seed=sel_seed)
        record.selected = select_top_k(pool, cfg.K)
        record.surrogate_evals = counting.texts_scored

        ledger = QueryLedger(cfg.K)
        queried: set[tuple[str, ...]] = set()
        for cand in record.selected:
            # identical texts would waste budget on a known answer
            if cand.text.tokens in queried:
                continue
            queried.add(cand.text.tokens)
            new_label = victim_predict(victim, ledger, cand.text)
            record.queries_used = ledger.count
            if new_label != victim_label:
                record.success = True
                record.final = cand
                break
    except RemoteModelError as exc:
        log.warning("example %s errored: %s", ex_id, exc)
        record.errored = True
    finally:
        record.wall_time_ms = (time.perf_counter() - started) * 1000.0
    return record


def run_attack(
    dataset: Sequence[Example],
    ensemble: Ensemble,
    victim: TextClassifier,
    lexicon: SynonymLexicon,
    cfg: AttackConfig,
    weights: SelectedWeights | None = None,
    max_workers: int = 1,
    dataset_name: str = "dataset",
) -> tuple[list[AttackRecord], RunSummary]:
    """Attack every example; return per-example records and the aggregate summary.

    ``weights`` defaults to diversity-selected vectors from a fresh weight
    space under cfg's seed. Examples run concurrently when max_workers > 1;
    records always come back in input order.
    """
    if not dataset:
        raise ValueError("dataset is empty")
    if victim.num_classes != ensemble.num_classes:
        raise ValueError(
            f"victim has {victim.num_classes} classes but ensemble has {ensemble.num_classes}"
        )
    if weights is None:
        weights = _default_weights(cfg, ensemble.size)
    if weights.vectors.shape[1] != ensemble.size:
        raise ValueError(
            f"weight vectors cover {weights.vectors.shape[1]} submodels, ensemble has {ensemble.size}"
        )

    if max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            records = list(
                pool.map(
                    lambda pair: _attack_one(
                        pair[0], pair[1], ensemble, victim, lexicon, cfg, weights
                    ),
                    enumerate(dataset),
                )
            )
    else:
        records = [
            _attack_one(i, ex, ensemble, victim, lexicon, cfg, weights)
            for i, ex in enumerate(dataset)
        ]

    return records, summarize(records, cfg, dataset_name=dataset_name, victim_name=victim.name)


def summarize(
    records: Sequence[AttackRecord],
    cfg: AttackConfig,
    dataset_name: str = "dataset",
    victim_name: str = "victim",
) -> RunSummary:
    active = [r for r in records if r.victim_correct and not r.errored]
    errored = sum(r.errored for r in records)
    successes = sum(r.success for r in active)
    if active:
        asr = successes / len(active)
    else:
        log.warning("no victim-correct examples; reporting ASR as 0.0")
        asr = 0.0
    succ_dists = [r.final.distance for r in active if r.final is not None]
    return RunSummary(
        dataset_name=dataset_name,
        victim_name=victim_name,
        evaluated=len(active),
        successes=successes,
        asr=asr,
        errored=errored,
        mean_queries=float(np.mean([r.queries_used for r in active])) if active else 0.0,
        mean_perturbation=float(np.mean(succ_dists)) if succ_dists else 0.0,
        mean_surrogate_evals=float(np.mean([r.surrogate_evals for r in active])) if active else 0.0,
        config=cfg.to_dict(),
    )


def equal_weights_baseline(
    dataset: Sequence[Example],
    ensemble: Ensemble,
    victim: TextClassifier,
    lexicon: SynonymLexicon,
    cfg: AttackConfig,
    max_workers: int = 1,
    dataset_name: str = "dataset",
) -> RunSummary:
    """Single-candidate reference: one equal-weight vector, one iteration.

    No diversity selection, no transferability ranking benefit (one
    candidate is submitted either way), so the gap to run_attack isolates
    what the weighted pool buys.
    """
    baseline_cfg = cfg.with_overrides(T=1, num_weights=1)
    flat = SelectedWeights(np.full((1, ensemble.size), 1.0 / ensemble.size))
    _, summary = run_attack(
        dataset,
        ensemble,
        victim,
        lexicon,
        baseline_cfg,
        weights=flat,
        max_workers=max_workers,
        dataset_name=dataset_name,
    )
    return summary


def _candidate_payload(cand: ScoredCandidate) -> dict:
    return {
        "text": cand.text.as_string(),
        "tokens": list(cand.text.tokens),
        "weight_index": cand.weight_index,
        "iteration": cand.iteration,
        "confidence": cand.confidence,
        "distance": cand.distance,
        "tau": cand.tau,
    }


def write_report(
    records: Sequence[AttackRecord],
    summary: RunSummary,
    out_dir: str | Path,
) -> tuple[Path, Path]:
    """Persist records.jsonl and summary.json; stable ordering, no wall times."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    records_path = out / "records.jsonl"
    summary_path = out / "summary.json"

    with records_path.open("w", encoding="utf-8") as fh:
        for r in records:
            row = {
                "id": r.example_id,
                "text": r.text,
                "label": r.label,
                "victim_correct": r.victim_correct,
                "errored": r.errored,
                "queries_used": r.queries_used,
                "success": r.success,
                "surrogate_evals": r.surrogate_evals,
                "selected": [_candidate_payload(c) for c in r.selected],
                "final": _candidate_payload(r.final) if r.final else None,
            }
            fh.write(json.dumps(row) + "\n")

    payload = {
        "dataset_name": summary.dataset_name,
        "victim_name": summary.victim_name,
        "evaluated": summary.evaluated,
        "successes": summary.successes,
        "asr": summary.asr,
        "errored": summary.errored,
        "mean_queries": summary.mean_queries,
        "mean_perturbation": summary.mean_perturbation,
        "mean_surrogate_evals": summary.mean_surrogate_evals,
        "config": summary.config,
    }
    summary_path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    return records_path, summary_path
