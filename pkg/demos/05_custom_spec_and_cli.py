"""
Custom test specs and the command line
======================================

Association tests are not limited to the built-ins: any four word sets make
a spec. This script authors a spec as JSON, runs it through the library,
then runs the identical test through the CLI and reads the JSON report back.
"""

import json
import subprocess
import sys
import tempfile
from pathlib import Path

import numpy as np

from embias import EmbeddingStore, load_spec, run_weat, save_cache

workdir = Path(tempfile.mkdtemp(prefix="embias_demo_"))

# A toy domain: programming languages vs. musical genres, against
# "fast/slow" attribute words. Vectors are engineered so languages sit
# near "fast" words.
rng = np.random.default_rng(5)
fast_axis = rng.normal(size=12)
slow_axis = rng.normal(size=12)
vocab = {}
for word in ("python", "rust", "go", "fortran"):
    vocab[word] = fast_axis + 0.7 * rng.normal(size=12)
for word in ("jazz", "blues", "folk", "opera"):
    vocab[word] = slow_axis + 0.7 * rng.normal(size=12)
for word in ("quick", "speedy"):
    vocab[word] = fast_axis + 0.4 * rng.normal(size=12)
for word in ("lazy", "sluggish"):
    vocab[word] = slow_axis + 0.4 * rng.normal(size=12)

store = EmbeddingStore(
    list(vocab), np.array(list(vocab.values()), dtype=np.float32)
)

spec_doc = {
    "test_id": "languages_vs_genres",
    "X": {"label": "languages", "words": ["python", "rust", "go", "fortran"]},
    "Y": {"label": "genres", "words": ["jazz", "blues", "folk", "opera"]},
    "A": {"label": "fast", "words": ["quick", "speedy"]},
    "B": {"label": "slow", "words": ["lazy", "sluggish"]},
    "source": "made up for this demo",
}
spec_path = workdir / "spec.json"
spec_path.write_text(json.dumps(spec_doc, indent=2))

# library route
result = run_weat(load_spec(spec_path), store)
print(f"library: effect {result.effect_size:+.3f}, p {result.p_value:.4f} "
      f"({result.p_method})")

# CLI route: write the embedding as a GloVe-format text file plus a binary
# cache, then invoke the installed entry point. Writing with repr round-trips
# the stored float32 components exactly, so both routes see identical bits.
embedding_path = workdir / "toy_vectors.txt"
with open(embedding_path, "w") as fh:
    for word in store.tokens():
        components = " ".join(repr(float(v)) for v in store.vector(word))
        fh.write(f"{word} {components}\n")
save_cache(store, workdir / "toy_vectors.emb1")

completed = subprocess.run(
    [
        sys.executable, "-m", "embias.cli", "weat",
        "--embedding", str(embedding_path),
        "--spec", str(spec_path),
        "--format", "json",
    ],
    capture_output=True, text=True, check=True,
)
report = json.loads(completed.stdout)
print(f"cli:     effect {report['effect_size']:+.3f}, p {report['p_value']:.4f} "
      f"({report['p_method']})")
print(f"reports agree: {abs(report['effect_size'] - result.effect_size) < 1e-12}")
print(f"workdir: {workdir}")
