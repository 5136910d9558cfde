"""Train bag-of-words surrogates and read the weighted ensemble margin.

The attack never touches victim probabilities. Everything it optimizes is
the weighted confidence over an ensemble of attacker-owned models: the
weighted sum of per-model margins p(true) - max p(other). Driving that
below zero means every heavily weighted surrogate is fooled.
"""

import numpy as np

from sep_attack import (
    Ensemble,
    QueryLedger,
    confidence_score,
    equal_weights,
    predict_label,
    victim_predict,
)
from sep_attack.models import train_builtin
from sep_attack.toy import drift_assignment, make_sentiment_corpus

# --- train two kinds of surrogate on slightly different corpora -----------
# each corpus shows the rare "drift" adjectives in model-specific classes,
# so the models agree on common words but not on the attack's substitutes
models = []
for idx, kind in enumerate(("builtin-linear", "builtin-nb")):
    corpus = make_sentiment_corpus(
        300, seed=idx + 1, assignment=drift_assignment(0, idx + 1), drift_rate=0.9
    )
    models.append(train_builtin(kind, corpus, seed=idx, name=f"surrogate-{idx}"))

ens = Ensemble(models)
print(f"ensemble of {ens.size} models, {ens.num_classes} classes")

# --- margins and the weighted confidence ----------------------------------
pos_review = "the film was wonderful and the acting excellent overall"
neg_review = "a dull script and a terrible dreadful ending"

for text, y in ((pos_review, 1), (neg_review, 0)):
    margins = ens.margins([text], y)[0]
    print(f"\n{text!r} (label {y})")
    for model, m in zip(ens.submodels, margins):
        print(f"  {model.name}: margin {m:+.3f}")
    print("  equal-weight confidence:", round(confidence_score(ens, text, y, equal_weights(2)), 3))

# weights redistribute trust between submodels; the attack explores many
w_skewed = np.array([0.9, 0.1])
print("\nskewed-weight confidence on the positive review:",
      round(confidence_score(ens, pos_review, 1, w_skewed), 3))

# --- hard-label victim access under a budget ------------------------------
# the victim exposes labels only, and every query is charged to a ledger
victim = models[0]
ledger = QueryLedger(budget=3)
print("\nvictim says:", victim_predict(victim, ledger, neg_review), f"({ledger.remaining} queries left)")
print("uncharged correctness check:", predict_label(victim, neg_review), f"({ledger.remaining} queries left)")

for _ in range(ledger.remaining):
    victim_predict(victim, ledger, pos_review)
try:
    victim_predict(victim, ledger, pos_review)
except Exception as exc:
    print("budget exhausted:", type(exc).__name__)
