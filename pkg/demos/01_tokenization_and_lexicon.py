"""Word-level text handling: tokenize, perturb, measure, and look up synonyms.

Everything downstream works on TokenizedText objects, which remember the
original word at every position. That provenance is what makes the
perturbation rate a one-liner at any point of an attack.
"""

from sep_attack import (
    load_bundled_lexicon,
    perturbation_distance,
    replaceable_positions,
    tokenize,
)

# --- tokenization ---------------------------------------------------------
# whitespace split, edge punctuation peeled into its own tokens,
# word-internal punctuation kept
text = tokenize("It's a weird, wonderful film -- truly engaging.")
print("tokens:  ", text.tokens)
print("length:  ", len(text))

# --- perturbation tracking ------------------------------------------------
# replace() swaps a word but keeps the original around; distance is the
# fraction of positions that currently differ from the original
swapped = text.replace(4, "sublime").replace(9, "rousing")
print("\nafter two swaps:", swapped.as_string())
print("perturbed positions:", swapped.perturbed_positions())
print("distance:", perturbation_distance(swapped, text))

# restoring a position undoes exactly that swap
print("restored:", swapped.restore(4).as_string())

# --- the synonym lexicon --------------------------------------------------
lex = load_bundled_lexicon()
entry = lex.lookup("wonderful")
print(f"\n'wonderful' ({entry.pos}) has {len(entry.synonyms)} synonyms:")
for word, sim in entry.synonyms:
    print(f"  {word:16s} similarity {sim:.2f}")

# unknown words come back as empty entries rather than KeyErrors
print("unknown word synonyms:", lex.lookup("zyzzyva").synonyms)

# --- replaceable positions ------------------------------------------------
# a position qualifies when its ORIGINAL word is a content word with
# synonyms; fillers and punctuation never qualify, and a position stays
# replaceable after a swap because the filter looks at the origin
positions = replaceable_positions(swapped, lex)
print("\nreplaceable positions of the swapped text:", positions)
for i in positions:
    print(f"  position {i}: origin '{swapped.origin[i]}', current '{swapped.tokens[i]}'")
