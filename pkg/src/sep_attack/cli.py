"""Command-line front end.

Four subcommands mirror the pipeline stages: gen-weights (diverse weight
vectors to JSON), attack (candidate pools to JSONL), select
(transferability-ranked top-K per example), eval (full run against a
victim with a persisted report). The environment variable SEP_ATTACK_SEED
overrides the seed of any loaded config file.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from .attack import AttackConfig, ScoredCandidate, generate_candidates
from .dpp import (
    generate_weight_space,
    load_weights,
    save_weights,
    select_diverse_weights,
)
from .errors import SepAttackError
from .harness import load_dataset, run_attack, write_report
from .lexicon import load_lexicon
from .models import load_descriptor, load_ensemble
from .selection import score_transferability, select_top_k
from .text import TokenizedText, tokenize

SEED_ENV_VAR = "SEP_ATTACK_SEED"


def _load_config(path: str) -> AttackConfig:
    cfg = AttackConfig.from_file(path)
    env_seed = os.environ.get(SEED_ENV_VAR)
    if env_seed is not None:
        cfg = cfg.with_overrides(seed=int(env_seed))
    return cfg


def _example_seed(cfg_seed: int, index: int) -> int:
    seeder = np.random.default_rng(np.random.SeedSequence([cfg_seed, index]))
    return int(seeder.integers(2**31))


def _candidate_row(ex_id: str, label: int, cand: ScoredCandidate) -> dict:
    return {
        "id": ex_id,
        "label": label,
        "text": cand.text.as_string(),
        "tokens": list(cand.text.tokens),
        "origin": list(cand.text.origin),
        "weight_index": cand.weight_index,
        "iteration": cand.iteration,
        "confidence": cand.confidence,
        "distance": cand.distance,
        "tau": cand.tau,
    }


def _cmd_gen_weights(args: argparse.Namespace) -> int:
    ws = generate_weight_space(args.d, args.n, args.seed)
    selected = select_diverse_weights(ws, args.e, mode=args.mode)
    save_weights(selected, args.out)
    print(f"wrote {selected.size} weight vectors to {args.out}")
    return 0


def _cmd_attack(args: argparse.Namespace) -> int:
    dataset = load_dataset(args.dataset)
    lex = load_lexicon(args.lexicon)
    ens = load_ensemble(args.ensemble)
    weights = load_weights(args.weights)
    cfg = _load_config(args.config)
    if weights.vectors.shape[1] != ens.size:
        raise SepAttackError(
            f"weights cover {weights.vectors.shape[1]} submodels, ensemble has {ens.size}"
        )
    n_rows = 0
    with Path(args.out).open("w", encoding="utf-8") as fh:
        for i, (ex_id, text, y) in enumerate(dataset):
            pool = generate_candidates(
                ens, tokenize(text), y, weights, cfg, lex, seed=_example_seed(cfg.seed, i)
            )
            for cand in pool:
                fh.write(json.dumps(_candidate_row(ex_id, y, cand)) + "\n")
                n_rows += 1
    print(f"wrote {n_rows} candidates for {len(dataset)} examples to {args.out}")
    return 0


def _read_pool(path: str) -> list[dict]:
    rows = []
    with Path(path).open(encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                rows.append(json.loads(line))
    return rows


def _cmd_select(args: argparse.Namespace) -> int:
    rows = _read_pool(args.pool)
    lex = load_lexicon(args.lexicon)
    ens = load_ensemble(args.ensemble)

    groups: dict[str, list[dict]] = {}
    for row in rows:
        groups.setdefault(row["id"], []).append(row)

    n_rows = 0
    with Path(args.out).open("w", encoding="utf-8") as fh:
        for gi, (ex_id, group) in enumerate(groups.items()):
            labels = {row["label"] for row in group}
            if len(labels) != 1:
                raise SepAttackError(f"example {ex_id} has conflicting labels {sorted(labels)}")
            y = labels.pop()
            cands = [
                ScoredCandidate(
                    text=TokenizedText(tuple(row["tokens"]), tuple(row["origin"])),
                    weight_index=row["weight_index"],
                    iteration=row["iteration"],
                    confidence=row["confidence"],
                    distance=row["distance"],
                )
                for row in group
            ]
            score_transferability(
                ens, cands, y, lex, args.gamma, seed=_example_seed(args.seed, gi)
            )
            for cand in select_top_k(cands, args.k):
                fh.write(json.dumps(_candidate_row(ex_id, y, cand)) + "\n")
                n_rows += 1
    print(f"selected {n_rows} candidates across {len(groups)} examples to {args.out}")
    return 0


def _cmd_eval(args: argparse.Namespace) -> int:
    dataset = load_dataset(args.dataset)
    lex = load_lexicon(args.lexicon)
    ens = load_ensemble(args.ensemble)
    victim = load_descriptor(args.victim)
    cfg = _load_config(args.config)
    weights = load_weights(args.weights) if args.weights else None
    records, summary = run_attack(
        dataset,
        ens,
        victim,
        lex,
        cfg,
        weights=weights,
        max_workers=args.max_workers,
        dataset_name=Path(args.dataset).stem,
    )
    records_path, summary_path = write_report(records, summary, args.report)
    print(f"evaluated={summary.evaluated} successes={summary.successes} asr={summary.asr:.3f}")
    print(f"report: {records_path} {summary_path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sep-attack",
        description="Transfer-based word-substitution attacks on text classifiers.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-weights", help="select diverse ensemble weight vectors")
    p.add_argument("--n", type=int, required=True, help="number of ensemble submodels")
    p.add_argument("--e", type=int, required=True, help="number of weight vectors to select")
    p.add_argument("--d", type=int, default=100, help="weight space size")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", choices=("map", "sampled"), default="map")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_gen_weights)

    p = sub.add_parser("attack", help="generate candidate pools on the surrogate ensemble")
    p.add_argument("--dataset", required=True)
    p.add_argument("--lexicon", required=True)
    p.add_argument("--ensemble", required=True)
    p.add_argument("--weights", required=True)
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_attack)

    p = sub.add_parser("select", help="rank pooled candidates by transferability")
    p.add_argument("--pool", required=True)
    p.add_argument("--lexicon", required=True)
    p.add_argument("--ensemble", required=True)
    p.add_argument("--gamma", type=float, default=0.02)
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_select)

    p = sub.add_parser("eval", help="full attack run against a victim, with report")
    p.add_argument("--dataset", required=True)
    p.add_argument("--lexicon", required=True)
    p.add_argument("--ensemble", required=True)
    p.add_argument("--victim", required=True)
    p.add_argument("--config", required=True)
    p.add_argument("--report", required=True)
    p.add_argument("--weights", default=None, help="optional precomputed weights file")
    p.add_argument("--max-workers", type=int, default=1)
    p.set_defaults(func=_cmd_eval)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SepAttackError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
