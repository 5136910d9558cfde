"""End-to-end evaluation through the command-line interface.

Materialize a complete toy world to disk (models, lexicon, dataset,
config), then drive the four pipeline stages exactly as an external user
would: gen-weights -> attack -> select -> eval. The eval stage writes a
records.jsonl + summary.json report; the same seed always reproduces the
same files byte for byte.
"""

import json
import subprocess
import sys
import tempfile
from pathlib import Path

from sep_attack import AttackConfig, equal_weights_baseline, load_dataset
from sep_attack.lexicon import load_lexicon
from sep_attack.models import load_descriptor, load_ensemble
from sep_attack.toy import materialize_toy_world


def run(*args: str) -> str:
    cmd = [sys.executable, "-m", "sep_attack.cli", *args]
    proc = subprocess.run(cmd, capture_output=True, text=True, check=True)
    return proc.stdout.strip()


with tempfile.TemporaryDirectory() as tmp:
    out = Path(tmp)
    print("materializing the toy world ...")
    paths = materialize_toy_world(out, seed=0, eval_size=30)
    for name, p in paths.items():
        print(f"  {name:9s} {p.relative_to(out)}")

    # --- stage 1: diverse weight vectors ----------------------------------
    weights = out / "weights.json"
    print("\n$ sep-attack gen-weights --n 4 --e 4 --out weights.json")
    print(" ", run("gen-weights", "--n", "4", "--e", "4", "--out", str(weights)))

    # --- stage 2: candidate pools on the surrogates ------------------------
    pool = out / "pool.jsonl"
    print("\n$ sep-attack attack --dataset ... --out pool.jsonl")
    print(" ", run(
        "attack",
        "--dataset", str(paths["dataset"]), "--lexicon", str(paths["lexicon"]),
        "--ensemble", str(paths["ensemble"]), "--weights", str(weights),
        "--config", str(paths["config"]), "--out", str(pool),
    ))

    # --- stage 3: transferability ranking ----------------------------------
    selected = out / "selected.jsonl"
    print("\n$ sep-attack select --pool pool.jsonl --out selected.jsonl")
    print(" ", run(
        "select",
        "--pool", str(pool), "--lexicon", str(paths["lexicon"]),
        "--ensemble", str(paths["ensemble"]), "--out", str(selected),
    ))

    # --- stage 4: submit to the victim under the query budget --------------
    report = out / "report"
    print("\n$ sep-attack eval --victim victim.json --report report/")
    print(" ", run(
        "eval",
        "--dataset", str(paths["dataset"]), "--lexicon", str(paths["lexicon"]),
        "--ensemble", str(paths["ensemble"]), "--victim", str(paths["victim"]),
        "--config", str(paths["config"]), "--weights", str(weights),
        "--report", str(report),
    ).replace("\n", "\n  "))

    summary = json.loads((report / "summary.json").read_text())
    print("\nsummary.json:")
    for key in ("evaluated", "successes", "asr", "mean_queries", "mean_perturbation"):
        print(f"  {key}: {summary[key]}")

    # --- how much did the diverse weighted pool buy? -----------------------
    print("\nrerunning with a single equal-weight vector for comparison ...")
    base = equal_weights_baseline(
        load_dataset(paths["dataset"]),
        load_ensemble(paths["ensemble"]),
        load_descriptor(paths["victim"]),
        load_lexicon(paths["lexicon"]),
        AttackConfig.from_file(paths["config"]),
    )
    print(f"  equal-weight baseline ASR: {base.asr:.3f}")
    print(f"  weighted-pool ASR:         {summary['asr']:.3f}")
