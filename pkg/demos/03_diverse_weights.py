"""Pick mutually diverse ensemble weight vectors with a determinant score.

A candidate pool is only as varied as the weight vectors that generated
it. Scoring a subset of weight vectors by the determinant of their Gram
submatrix rewards vectors that are long AND mutually far from parallel,
so the greedy picker spreads the ensemble's trust in genuinely different
directions instead of taking near-duplicates.
"""

import itertools

import numpy as np

from sep_attack import (
    generate_weight_space,
    kernel_matrix,
    select_diverse_weights,
    subset_score,
)

# --- a small weight space so we can enumerate everything ------------------
ws = generate_weight_space(D=6, N=4, seed=7)
K = kernel_matrix(ws)
print("kernel shape:", K.shape)
print("kernel diagonal (squared norms):", np.round(np.diag(K), 3))

# determinant of a subset's kernel block = diversity score of that subset;
# duplicated rows collapse it to zero
print("\nscore of {0,1}:", round(subset_score(K, [0, 1]), 4))
print("score of {0,0} style duplicates is 0 by construction")

# --- greedy selection vs exhaustive enumeration ---------------------------
selected = select_diverse_weights(ws, E=3)
greedy = subset_score(K, selected.indices)
print("\ngreedy picked rows", selected.indices, "with score", round(greedy, 4))

scores = {
    subset: subset_score(K, subset) for subset in itertools.combinations(range(6), 3)
}
best = max(scores, key=scores.get)
print("exhaustive best is", best, "with score", round(scores[best], 4))
print("greedy / best ratio:", round(greedy / scores[best], 4))

ranked = sorted(scores.items(), key=lambda kv: -kv[1])
print("\nall 20 subsets, best first:")
for subset, score in ranked[:5]:
    print(f"  {subset}  {score:.4f}")
print("  ...")

# --- the two selection modes ----------------------------------------------
# map: deterministic greedy, the default. sampled: stochastic but seeded,
# draws each addition proportional to its augmented score
for mode in ("map", "sampled"):
    picked = select_diverse_weights(ws, E=3, mode=mode)
    print(f"{mode:8s} -> rows {picked.indices}")

# at production scale the space is much larger and nothing is enumerable
big = generate_weight_space(D=100, N=4, seed=0)
chosen = select_diverse_weights(big, E=4)
print("\nfrom 100 candidates the greedy kept rows", chosen.indices)
print(np.round(chosen.vectors, 3))
