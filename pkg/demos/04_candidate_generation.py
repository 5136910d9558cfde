"""Walk one text through importance scoring, greedy swaps, and repair.

One weight vector drives one greedy session: find the words whose
deletion hurts ensemble confidence most, visit them in a sampled order,
swap each toward lower confidence until the perturbation rate overshoots
eta, then restore the least useful swaps until it is back under epsilon.
Pooling T iterations across E weight vectors yields the candidate pool.
"""

import numpy as np

from sep_attack import (
    AttackConfig,
    generate_candidates,
    generate_weight_space,
    remove_unimportant_words,
    replacement_order,
    sampling_distribution,
    select_diverse_weights,
    tokenize,
    update_important_words,
    word_importance,
)
from sep_attack.toy import build_toy_world

world = build_toy_world(seed=0, train_size=300, eval_size=5)
ens, lex = world.ensemble, world.lexicon
ex_id, raw, y = world.dataset[0]
text = tokenize(raw)
print(f"example {ex_id} (label {y}, {len(text)} words):")
print(" ", raw)

cfg = AttackConfig()
weights = select_diverse_weights(
    generate_weight_space(cfg.weight_space_size, ens.size, cfg.seed), cfg.num_weights
)
w = weights.vectors[0]
print("\nfirst weight vector:", np.round(w, 3))

# --- deletion-based importance --------------------------------------------
iv = word_importance(ens, text, y, w, lex)
print(f"\n{len(iv)} replaceable positions; most important first:")
for j in np.argsort(-iv.scores)[:5]:
    pos = iv.positions[j]
    print(f"  {text.tokens[pos]:12s} importance {iv.scores[j]:+.3f}")

# --- importance -> visit order --------------------------------------------
# the softmax is rescaled toward unit range so even tiny score spreads
# still concentrate mass on the top words
P = sampling_distribution(iv)
print("\nsampling distribution (top 3 mass):", np.round(np.sort(P)[::-1][:3], 3))
order = replacement_order(P, mode="sampled", seed=0)
print("sampled visit order (first 5):", [text.tokens[iv.positions[j]] for j in order[:5]])

# --- overshoot then repair ------------------------------------------------
visit = [iv.positions[j] for j in order]
overshot = update_important_words(ens, text, y, w, visit, lex, cfg.eta)
print(f"\nafter swapping to eta={cfg.eta}: distance {len(overshot.perturbed_positions())}/{len(text)}")
for i in overshot.perturbed_positions():
    print(f"  {overshot.origin[i]} -> {overshot.tokens[i]}")

repaired = remove_unimportant_words(ens, overshot, y, w, cfg.epsilon)
print(f"after restoring to epsilon={cfg.epsilon}: distance {len(repaired.perturbed_positions())}/{len(text)}")
for i in repaired.perturbed_positions():
    print(f"  {repaired.origin[i]} -> {repaired.tokens[i]}")

# --- the full pool ---------------------------------------------------------
pool = generate_candidates(ens, text, y, weights, cfg, lex)
distinct = {c.text.tokens for c in pool}
print(f"\npool: {len(pool)} candidates ({len(distinct)} distinct texts)")
print("confidence range: "
      f"{min(c.confidence for c in pool):+.3f} .. {max(c.confidence for c in pool):+.3f}")
print("all within budget:", all(c.distance <= cfg.epsilon for c in pool))
