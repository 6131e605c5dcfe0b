"""
Factual association: do vectors know who holds which jobs?
==========================================================

A per-word normalized association score locates each occupation word on a
female/male axis; regressing the real labor-force gender percentage on that
score measures how much workforce fact the embedding absorbed.

With EMBIAS_GLOVE and EMBIAS_BLS_CSV set this reproduces the reference
analysis; otherwise it builds a small synthetic embedding whose geometry
encodes a known gender split, so the recovery is visible end to end.
"""

import os

import numpy as np

from embias import (
    EmbeddingStore,
    builtin_occupation_mapping,
    builtin_wefat,
    load_occupations_csv,
    occupation_properties,
    parse_embedding_text,
    run_wefat,
)

targets, female_attrs, male_attrs = builtin_wefat("occupations")

glove_path = os.environ.get("EMBIAS_GLOVE")
bls_path = os.environ.get("EMBIAS_BLS_CSV")

if glove_path and bls_path:
    store, _ = parse_embedding_text(glove_path)
    records, skipped = load_occupations_csv(bls_path)
    print(f"loaded {len(records)} occupation rows ({skipped} without data)")
    # multi-word categories reduce to their head word when it is one of the
    # 50 reference occupations ("chemical engineer" -> "engineer")
    properties, unmapped = occupation_properties(
        records, builtin_occupation_mapping()
    )
    print(f"{len(properties)} single-word occupations ({len(unmapped)} unmappable)")
else:
    print("EMBIAS_GLOVE/EMBIAS_BLS_CSV not set; building a synthetic space\n")
    rng = np.random.default_rng(3)
    female_axis = np.zeros(24)
    female_axis[0] = 1.0
    male_axis = np.zeros(24)
    male_axis[1] = 1.0
    tokens, rows, properties = [], [], {}
    for i, word in enumerate(targets.words):
        share_female = i / (len(targets.words) - 1)  # the "ground truth"
        properties[word] = 100.0 * share_female
        direction = share_female * female_axis + (1 - share_female) * male_axis
        tokens.append(word)
        rows.append(direction + rng.normal(scale=0.08, size=24))
    for word in female_attrs.words:
        tokens.append(word)
        rows.append(female_axis + rng.normal(scale=0.03, size=24))
    for word in male_attrs.words:
        tokens.append(word)
        rows.append(male_axis + rng.normal(scale=0.03, size=24))
    store = EmbeddingStore(tokens, np.array(rows, dtype=np.float32))

result = run_wefat(
    list(targets.words), properties, female_attrs.words, male_attrs.words, store
)

print(f"points: {len(result.points)}   dropped: {len(result.dropped)}")
print(f"pearson rho = {result.pearson_rho:+.3f} (p = {result.pearson_p:.3g})")
print(f"spearman rho = {result.spearman_rho:+.3f}")
print(f"fit: pct_women = {result.slope:.2f} * score + {result.intercept:.2f}")

print("\nmost female-associated and male-associated words:")
by_score = sorted(result.points, key=lambda p: p[1])
for word, score, pct in (*by_score[:3], *by_score[-3:]):
    print(f"  {word:15s} score {score:+.3f}   pct women {pct:5.1f}")
