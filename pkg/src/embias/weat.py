"""Differential association statistic over word vectors, with exact and
Monte Carlo permutation p-values and a normalized effect size.

For target word sets X and Y and attribute word sets A and B, the per-word
association is

    s(w) = mean cosine(w, a in A) - mean cosine(w, b in B)

the test statistic is ``sum s(x in X) - sum s(y in Y)``, the effect size is
the difference of the X and Y means of s divided by the population standard
deviation of s over all targets (which bounds it by 2 in magnitude), and
significance comes from the null of exchangeable targets: the statistic is
recomputed over equal-size re-partitions of the pooled targets, either all
C(2n, n) of them or a seeded uniform sample.
"""
from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import stats as _scipy_stats

from .errors import DegenerateStatisticError, UsageError
from .stimuli import ResolvedSpec, WeatSpec, resolve
from .store import EmbeddingStore

# Monte Carlo sampling is chunked so the stream is a pure function of
# (seed, chunk index): results do not depend on the worker count.
_CHUNK = 32_768


@dataclass(frozen=True)
class WeatConfig:
    """Policy knobs for a test run."""

    p_method: str = "auto"  # exact | montecarlo | normal | auto
    samples: int = 100_000
    seed: int = 0
    exact_threshold: int = 200_000
    tie_semantics: str = "geq"  # geq | strict
    workers: int = 1

    def __post_init__(self):
        if self.p_method not in ("exact", "montecarlo", "normal", "auto"):
            raise UsageError(f"unknown p_method {self.p_method!r}")
        if self.tie_semantics not in ("geq", "strict"):
            raise UsageError(f"unknown tie_semantics {self.tie_semantics!r}")
        if self.workers < 1:
            raise UsageError("workers must be >= 1")


@dataclass(frozen=True)
class WeatResult:
    """Everything a run produced, including the resolution and seed metadata
    needed to reproduce it."""

    test_id: str
    statistic: float
    effect_size: float
    p_value: float
    p_method: str
    p_stderr: float | None
    samples: int
    seed: int
    tie_semantics: str
    per_word: tuple[tuple[str, str, float], ...]
    resolution: ResolvedSpec
    p_raw: float | None = None
    p_normal_tail: float | None = None


def _unit_rows(matrix: np.ndarray) -> np.ndarray:
    return matrix / np.linalg.norm(matrix, axis=1, keepdims=True)


def association_values(
    words: Sequence[str],
    attributes_a: Sequence[str],
    attributes_b: Sequence[str],
    store: EmbeddingStore,
) -> np.ndarray:
    """Vector of s(w) over ``words``, in order, as float64."""
    if not attributes_a or not attributes_b:
        raise UsageError("attribute sets must be non-empty")
    targets = _unit_rows(store.vectors(words))
    attr_a = _unit_rows(store.vectors(attributes_a))
    attr_b = _unit_rows(store.vectors(attributes_b))
    return (targets @ attr_a.T).mean(axis=1) - (targets @ attr_b.T).mean(axis=1)


def association(
    word: str,
    attributes_a: Sequence[str],
    attributes_b: Sequence[str],
    store: EmbeddingStore,
) -> float:
    """Association of one word with the attribute contrast."""
    return float(association_values([word], attributes_a, attributes_b, store)[0])


def differential(
    targets_x: Sequence[str],
    targets_y: Sequence[str],
    attributes_a: Sequence[str],
    attributes_b: Sequence[str],
    store: EmbeddingStore,
) -> float:
    """Sum of associations over the first target set minus the second."""
    if len(targets_x) != len(targets_y):
        raise UsageError(
            f"target sets must have equal size ({len(targets_x)} vs {len(targets_y)})"
        )
    values = association_values(
        list(targets_x) + list(targets_y), attributes_a, attributes_b, store
    )
    n = len(targets_x)
    return float(values[:n].sum() - values[n:].sum())


def _effect_from_values(values: np.ndarray, n_x: int, sd: str) -> float:
    if sd not in ("population", "sample"):
        raise UsageError(f"unknown sd convention {sd!r}")
    spread = values.std(ddof=0 if sd == "population" else 1)
    if spread == 0.0:
        raise DegenerateStatisticError(
            "all per-word associations are identical; effect size undefined"
        )
    return float((values[:n_x].mean() - values[n_x:].mean()) / spread)


def effect_size(
    targets_x: Sequence[str],
    targets_y: Sequence[str],
    attributes_a: Sequence[str],
    attributes_b: Sequence[str],
    store: EmbeddingStore,
    sd: str = "population",
) -> float:
    """Mean association difference normalized by the deviation over all targets.

    The population (divide-by-N) deviation is the default; it is what bounds
    the result by 2 in magnitude. Pass ``sd="sample"`` for a divide-by-(N-1)
    sensitivity check.
    """
    if len(targets_x) != len(targets_y):
        raise UsageError("target sets must have equal size")
    if len(targets_x) + len(targets_y) < 4:
        raise UsageError("need at least 4 target words in total")
    values = association_values(
        list(targets_x) + list(targets_y), attributes_a, attributes_b, store
    )
    return _effect_from_values(values, len(targets_x), sd)


# ---------------------------------------------------------------------------
# Permutation null
# ---------------------------------------------------------------------------
#
# Every equal-size labeled re-partition assigns some size-n subset of the
# pooled targets to the X role. Its statistic is 2 * (subset sum of s) -
# (total sum of s), so partition statistics compare exactly as their subset
# sums do; all counting below is over subset sums, with the observed value
# computed by the same summation order to keep ties exact.


def _observed_sum(values: np.ndarray, n_x: int) -> float:
    return float(values[:n_x].sum())


def p_exact(
    targets_x: Sequence[str],
    targets_y: Sequence[str],
    attributes_a: Sequence[str],
    attributes_b: Sequence[str],
    store: EmbeddingStore,
    tie_semantics: str = "geq",
    exact_threshold: int = 200_000,
) -> float:
    """One-sided p over all C(2n, n) labeled partitions.

    ``geq`` counts partitions whose statistic is >= the observed one (the
    identity partition counts itself, so p > 0); ``strict`` counts > only.
    """
    if tie_semantics not in ("geq", "strict"):
        raise UsageError(f"unknown tie_semantics {tie_semantics!r}")
    if len(targets_x) != len(targets_y):
        raise UsageError("target sets must have equal size")
    n = len(targets_x)
    total = math.comb(2 * n, n)
    if total > exact_threshold:
        raise UsageError(
            f"{total} partitions exceed exact_threshold={exact_threshold}; "
            "use the Monte Carlo p-value"
        )
    values = association_values(
        list(targets_x) + list(targets_y), attributes_a, attributes_b, store
    )
    observed = _observed_sum(values, n)
    combos = np.array(
        list(itertools.combinations(range(2 * n), n)), dtype=np.intp
    )
    sums = values[combos].sum(axis=1)
    if tie_semantics == "geq":
        count = int((sums >= observed).sum())
    else:
        count = int((sums > observed).sum())
    return count / total


def _null_chunks(samples: int) -> list[tuple[int, int]]:
    return [(i, min(_CHUNK, samples - i * _CHUNK))
            for i in range((samples + _CHUNK - 1) // _CHUNK)]


def _sample_null(
    values: np.ndarray,
    n_x: int,
    samples: int,
    seed: int,
    workers: int = 1,
) -> tuple[int, float, float]:
    """Draw ``samples`` uniform size-n subsets of the pooled targets.

    Returns (count of subset sums >= observed, sum of partition statistics,
    sum of squared partition statistics). Chunk i is generated by an RNG
    seeded with (seed, i), so the result is identical for any worker count.
    """
    n_total = values.size
    observed = _observed_sum(values, n_x)
    total = float(values.sum())

    def run_chunk(chunk: tuple[int, int]) -> tuple[int, float, float]:
        index, size = chunk
        rng = np.random.default_rng([seed, index])
        draws = rng.random((size, n_total))
        subset = np.argpartition(draws, n_x - 1, axis=1)[:, :n_x]
        subset.sort(axis=1)  # fixed summation order keeps ties exact
        sums = values[subset].sum(axis=1)
        statistics = 2.0 * sums - total
        return (
            int((sums >= observed).sum()),
            float(statistics.sum()),
            float(np.square(statistics).sum()),
        )

    chunks = _null_chunks(samples)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run_chunk, chunks))
    else:
        parts = [run_chunk(c) for c in chunks]
    hits = sum(p[0] for p in parts)
    stat_sum = sum(p[1] for p in parts)
    stat_sumsq = sum(p[2] for p in parts)
    return hits, stat_sum, stat_sumsq


def p_montecarlo(
    targets_x: Sequence[str],
    targets_y: Sequence[str],
    attributes_a: Sequence[str],
    attributes_b: Sequence[str],
    store: EmbeddingStore,
    samples: int = 100_000,
    seed: int = 0,
    workers: int = 1,
) -> tuple[float, float]:
    """Smoothed Monte Carlo p-value, (hits + 1) / (samples + 1), and its
    binomial standard error."""
    if samples < 1_000:
        raise UsageError("montecarlo needs at least 1,000 samples")
    if len(targets_x) != len(targets_y):
        raise UsageError("target sets must have equal size")
    values = association_values(
        list(targets_x) + list(targets_y), attributes_a, attributes_b, store
    )
    hits, _, _ = _sample_null(values, len(targets_x), samples, seed, workers)
    p = (hits + 1) / (samples + 1)
    stderr = math.sqrt(p * (1.0 - p) / samples)
    return p, stderr


def _normal_tail(
    observed: float, stat_sum: float, stat_sumsq: float, samples: int
) -> float:
    mean = stat_sum / samples
    variance = max(stat_sumsq / samples - mean * mean, 0.0)
    if variance == 0.0:
        raise DegenerateStatisticError("null distribution has zero variance")
    return float(_scipy_stats.norm.sf((observed - mean) / math.sqrt(variance)))


def p_normal(
    targets_x: Sequence[str],
    targets_y: Sequence[str],
    attributes_a: Sequence[str],
    attributes_b: Sequence[str],
    store: EmbeddingStore,
    samples: int = 100_000,
    seed: int = 0,
    workers: int = 1,
) -> float:
    """Upper-tail probability of the observed statistic under a normal fit
    to the sampled null.

    An approximation for tail p-values that Monte Carlo counting cannot
    resolve; always disclosed as approximate in reports.
    """
    if samples < 10_000:
        raise UsageError("the normal approximation needs at least 10,000 samples")
    if len(targets_x) != len(targets_y):
        raise UsageError("target sets must have equal size")
    values = association_values(
        list(targets_x) + list(targets_y), attributes_a, attributes_b, store
    )
    n = len(targets_x)
    _, stat_sum, stat_sumsq = _sample_null(values, n, samples, seed, workers)
    observed = float(values[:n].sum() - values[n:].sum())
    return _normal_tail(observed, stat_sum, stat_sumsq, samples)


# ---------------------------------------------------------------------------
# Full test run
# ---------------------------------------------------------------------------


def run_weat(
    spec: WeatSpec,
    store: EmbeddingStore,
    config: WeatConfig = WeatConfig(),
    fallback_chain: Sequence[str] = ("exact",),
) -> WeatResult:
    """Resolve the spec, compute the statistic, effect size, and p-value.

    ``p_method="auto"`` runs the exact test when the partition count is
    within ``exact_threshold`` and otherwise Monte Carlo, annotated with the
    normal-tail estimate from the same sampled null.
    """
    resolution = resolve(spec, store, fallback_chain, seed=config.seed)
    resolved = resolution.spec
    x_words = resolved.target_x.words
    y_words = resolved.target_y.words
    n_x = len(x_words)
    tokens = resolution.tokens
    values = association_values(
        tokens(x_words) + tokens(y_words),
        tokens(resolved.attribute_a.words),
        tokens(resolved.attribute_b.words),
        store,
    )
    statistic = float(values[:n_x].sum() - values[n_x:].sum())
    effect = _effect_from_values(values, n_x, sd="population")
    per_word = tuple(
        itertools.chain(
            ((w, resolved.target_x.label, float(v))
             for w, v in zip(x_words, values[:n_x])),
            ((w, resolved.target_y.label, float(v))
             for w, v in zip(y_words, values[n_x:])),
        )
    )

    method = config.p_method
    partitions = math.comb(2 * n_x, n_x)
    if method == "auto":
        method = "exact" if partitions <= config.exact_threshold else "montecarlo"
    annotate_normal = config.p_method == "auto" and method == "montecarlo"

    p_stderr = None
    p_raw = None
    normal_tail = None
    if method == "exact":
        if partitions > config.exact_threshold:
            raise UsageError(
                f"{partitions} partitions exceed exact_threshold="
                f"{config.exact_threshold}; use p_method='montecarlo'"
            )
        observed = _observed_sum(values, n_x)
        combos = np.array(
            list(itertools.combinations(range(2 * n_x), n_x)), dtype=np.intp
        )
        sums = values[combos].sum(axis=1)
        if config.tie_semantics == "geq":
            count = int((sums >= observed).sum())
        else:
            count = int((sums > observed).sum())
        p_value = count / partitions
        samples_used = partitions
    else:
        if config.samples < 1_000:
            raise UsageError("montecarlo/normal need at least 1,000 samples")
        if method == "normal" and config.samples < 10_000:
            raise UsageError("the normal approximation needs at least 10,000 samples")
        hits, stat_sum, stat_sumsq = _sample_null(
            values, n_x, config.samples, config.seed, config.workers
        )
        samples_used = config.samples
        if method == "montecarlo":
            p_value = (hits + 1) / (config.samples + 1)
            p_stderr = math.sqrt(p_value * (1.0 - p_value) / config.samples)
            p_raw = hits / config.samples
            if annotate_normal:
                try:
                    normal_tail = _normal_tail(
                        statistic, stat_sum, stat_sumsq, config.samples
                    )
                except DegenerateStatisticError:
                    normal_tail = None
        else:
            p_value = _normal_tail(statistic, stat_sum, stat_sumsq, config.samples)

    return WeatResult(
        test_id=spec.test_id,
        statistic=statistic,
        effect_size=effect,
        p_value=p_value,
        p_method=method,
        p_stderr=p_stderr,
        samples=samples_used,
        seed=config.seed,
        tie_semantics=config.tie_semantics,
        per_word=per_word,
        resolution=resolution,
        p_raw=p_raw,
        p_normal_tail=normal_tail,
    )
