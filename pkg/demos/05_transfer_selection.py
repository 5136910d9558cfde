"""Rank pooled candidates by how well they should transfer to an unseen model.

Fooling the surrogates is necessary, not sufficient. A candidate sitting
in a flat low-confidence region (its single-swap neighbors are also
low-confidence) is much more likely to fool a model nobody optimized
against than one balanced on a sharp minimum. The transferability score
tau is the negated mean equal-weight confidence over a small sample of
those neighbors; only the top-K candidates ever reach the victim.
"""

import numpy as np

from sep_attack import (
    AttackConfig,
    build_adjacency,
    generate_candidates,
    generate_weight_space,
    score_transferability,
    select_diverse_weights,
    select_top_k,
    tokenize,
    transferability_score,
)
from sep_attack.toy import build_toy_world

world = build_toy_world(seed=0, train_size=300, eval_size=8)
ens, lex = world.ensemble, world.lexicon
cfg = AttackConfig()
weights = select_diverse_weights(
    generate_weight_space(cfg.weight_space_size, ens.size, cfg.seed), cfg.num_weights
)

ex_id, raw, y = world.dataset[2]
text = tokenize(raw)
pool = generate_candidates(ens, text, y, weights, cfg, lex)
print(f"example {ex_id}: pool of {len(pool)} candidates")

# --- one candidate's adjacency region -------------------------------------
cand = pool[0]
region = build_adjacency(cand, lex, gamma=0.10, seed=0)
print(f"\ncandidate distance {cand.distance:.3f}, confidence {cand.confidence:+.3f}")
print(f"adjacency region: m={region.m}, {len(region.neighbors)} one-swap neighbors")
for n in region.neighbors:
    changed = [i for i in range(len(n)) if n.tokens[i] != cand.text.tokens[i]]
    i = changed[0]
    print(f"  swap {cand.text.tokens[i]!r} -> {n.tokens[i]!r}")
print("tau of this candidate:", round(transferability_score(ens, region, y), 3))

# --- score the whole pool and keep the top K -------------------------------
score_transferability(ens, pool, y, lex, cfg.gamma, seed=0)
selected = select_top_k(pool, cfg.K)
print(f"\ntop {len(selected)} of {len(pool)} by tau:")
for c in selected[:5]:
    print(f"  tau {c.tau:+.3f}  confidence {c.confidence:+.3f}  distance {c.distance:.3f}")

taus = np.array([c.tau for c in pool])
print("\npool tau spread: min %+.3f  median %+.3f  max %+.3f"
      % (taus.min(), np.median(taus), taus.max()))

# high tau and low confidence usually agree, but not always: tau looks at
# the neighborhood, confidence at the single point. The disagreements are
# exactly the sharp minima the selection is built to avoid.
by_conf = min(pool, key=lambda c: c.confidence)
by_tau = max(pool, key=lambda c: c.tau)
print("\nlowest-confidence pick is also the tau pick:", by_conf is by_tau)
