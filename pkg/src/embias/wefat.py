"""Per-word normalized association scores and their regression against
real-world properties.

The score of a word w against attribute sets A and B is

    (mean cos(w, a in A) - mean cos(w, b in B)) / std cos(w, x in A u B)

with the population standard deviation in the denominator. Scores are
regressed against a real-valued property of each word (for example the
percentage of women in an occupation), and can be compared across two
embeddings of the same vocabulary.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
from scipy import stats as _scipy_stats

from .errors import DegenerateStatisticError, ResolutionError, UsageError
from .store import EmbeddingStore
from .weat import _unit_rows


@dataclass(frozen=True)
class RegressionSummary:
    pearson_rho: float
    pearson_p: float
    spearman_rho: float
    slope: float
    intercept: float


@dataclass(frozen=True)
class WefatResult:
    """Scored points joined with properties, plus the regression summary."""

    points: tuple[tuple[str, float, float], ...]  # (word, score, property)
    pearson_rho: float
    pearson_p: float
    spearman_rho: float
    slope: float
    intercept: float
    dropped: tuple[tuple[str, str], ...]  # (word, reason)


@dataclass(frozen=True)
class EmbeddingComparison:
    pearson_rho: float
    spearman_rho: float
    words_used: tuple[str, ...]
    dropped: tuple[tuple[str, str], ...]


def _score_matrix(
    words: Sequence[str],
    attributes_a: Sequence[str],
    attributes_b: Sequence[str],
    store: EmbeddingStore,
) -> tuple[np.ndarray, np.ndarray]:
    """Per-word (numerator, denominator) of the normalized score."""
    if len(attributes_a) + len(attributes_b) < 2:
        raise UsageError("need at least 2 attribute words in total")
    targets = _unit_rows(store.vectors(words))
    # separate products per attribute set, and a sorted multiset for the
    # deviation: both keep float accumulation independent of which set is
    # called A, so swapping A and B negates the score exactly
    cosines_a = targets @ _unit_rows(store.vectors(attributes_a)).T
    cosines_b = targets @ _unit_rows(store.vectors(attributes_b)).T
    numerator = cosines_a.mean(axis=1) - cosines_b.mean(axis=1)
    pooled = np.sort(np.concatenate([cosines_a, cosines_b], axis=1), axis=1)
    denominator = pooled.std(axis=1, ddof=0)
    return numerator, denominator


def wefat_score(
    word: str,
    attributes_a: Sequence[str],
    attributes_b: Sequence[str],
    store: EmbeddingStore,
) -> float:
    """Normalized association of one word with the attribute contrast."""
    numerator, denominator = _score_matrix([word], attributes_a, attributes_b, store)
    if denominator[0] == 0.0:
        raise DegenerateStatisticError(
            f"attribute cosines of {word!r} have zero deviation; score undefined"
        )
    return float(numerator[0] / denominator[0])


def name_likeness_filter(
    names: Sequence[str],
    store: EmbeddingStore,
    drop_fraction: float = 0.2,
    metric: str = "cosine",
) -> tuple[list[str], list[str]]:
    """Drop the candidates whose vectors sit farthest from the centroid of
    all candidate vectors.

    Mitigates name/word sense collisions (a vector for "Will" is mostly not
    a name). Distance is cosine distance by default (``metric="euclidean"``
    for a sensitivity check). The ceil(drop_fraction * n) largest-distance
    names are dropped; equal distances are broken by dropping the
    lexicographically smaller token first, so the partition is deterministic
    and independent of input order. Returns (kept in input order, dropped by
    decreasing distance).
    """
    if not 0.0 <= drop_fraction <= 0.9:
        raise UsageError("drop_fraction must be within [0, 0.9]")
    if metric not in ("cosine", "euclidean"):
        raise UsageError(f"unknown metric {metric!r}")
    names = list(names)
    if len(names) < 5:
        raise UsageError("need at least 5 candidate names to filter")
    vectors = store.vectors(names)
    center = vectors.mean(axis=0)
    if metric == "cosine":
        norm_center = np.linalg.norm(center)
        if norm_center == 0.0:
            raise DegenerateStatisticError("candidate centroid has zero norm")
        units = _unit_rows(vectors)
        distances = 1.0 - units @ (center / norm_center)
    else:
        distances = np.linalg.norm(vectors - center, axis=1)
    k = math.ceil(drop_fraction * len(names))
    if k == 0:
        return names, []
    order = sorted(range(len(names)), key=lambda i: (-distances[i], names[i]))
    dropped_idx = set(order[:k])
    kept = [n for i, n in enumerate(names) if i not in dropped_idx]
    dropped = [names[i] for i in order[:k]]
    return kept, dropped


def regression_suite(
    xs: Sequence[float], ys: Sequence[float]
) -> RegressionSummary:
    """Pearson and Spearman correlation plus the ys-on-xs least-squares line.

    The two-sided Pearson p-value comes from t = rho * sqrt((n-2)/(1-rho^2))
    against the t distribution with n-2 degrees of freedom. Spearman is
    Pearson over average ranks (ties averaged).
    """
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    if xs.shape != ys.shape or xs.ndim != 1:
        raise UsageError("xs and ys must be 1-d sequences of equal length")
    n = xs.size
    if n < 3:
        raise UsageError("need at least 3 points")
    sx = xs.std(ddof=0)
    sy = ys.std(ddof=0)
    if sx == 0.0 or sy == 0.0:
        raise DegenerateStatisticError(
            "constant xs or ys; correlation and regression undefined"
        )
    covariance = float(((xs - xs.mean()) * (ys - ys.mean())).mean())
    rho = min(1.0, max(-1.0, covariance / (sx * sy)))
    slope = covariance / (sx * sx)
    intercept = float(ys.mean() - slope * xs.mean())
    if rho * rho >= 1.0:
        pearson_p = 0.0
    else:
        t = rho * math.sqrt((n - 2) / (1.0 - rho * rho))
        pearson_p = float(2.0 * _scipy_stats.t.sf(abs(t), df=n - 2))
    ranks_x = _scipy_stats.rankdata(xs, method="average")
    ranks_y = _scipy_stats.rankdata(ys, method="average")
    srx = ranks_x.std(ddof=0)
    sry = ranks_y.std(ddof=0)
    if srx == 0.0 or sry == 0.0:
        raise DegenerateStatisticError("constant ranks; Spearman undefined")
    spearman = float(
        ((ranks_x - ranks_x.mean()) * (ranks_y - ranks_y.mean())).mean()
        / (srx * sry)
    )
    spearman = min(1.0, max(-1.0, spearman))
    return RegressionSummary(
        pearson_rho=float(rho),
        pearson_p=pearson_p,
        spearman_rho=spearman,
        slope=float(slope),
        intercept=intercept,
    )


def run_wefat(
    targets: Sequence[str],
    properties: Mapping[str, float],
    attributes_a: Sequence[str],
    attributes_b: Sequence[str],
    store: EmbeddingStore,
    name_filter: bool = False,
) -> WefatResult:
    """Score each target, join with its property, regress property on score.

    Out-of-vocabulary targets are dropped and recorded; the name-likeness
    filter (when enabled) runs on the resolved targets before the property
    join. Every surviving target must have a property record.
    """
    dropped: list[tuple[str, str]] = []
    resolved = []
    for word in targets:
        if word in store:
            resolved.append(word)
        else:
            dropped.append((word, "not_in_vocabulary"))

    if name_filter:
        kept, filtered = name_likeness_filter(resolved, store)
        dropped.extend((w, "name_filter") for w in filtered)
        resolved = kept

    no_property = [w for w in resolved if w not in properties]
    if no_property:
        raise ResolutionError(f"targets without a property record: {no_property}")

    if len(resolved) < 3:
        raise ResolutionError(
            f"only {len(resolved)} usable targets after resolution; need >= 3"
        )
    numerator, denominator = _score_matrix(
        resolved, attributes_a, attributes_b, store
    )
    points = []
    for word, num, den in zip(resolved, numerator, denominator):
        if den == 0.0:
            dropped.append((word, "degenerate_score"))
            continue
        points.append((word, float(num / den), float(properties[word])))
    if len(points) < 3:
        raise ResolutionError(f"only {len(points)} usable points; need >= 3")
    points.sort(key=lambda p: (p[2], p[0]))
    summary = regression_suite([p[1] for p in points], [p[2] for p in points])
    return WefatResult(
        points=tuple(points),
        pearson_rho=summary.pearson_rho,
        pearson_p=summary.pearson_p,
        spearman_rho=summary.spearman_rho,
        slope=summary.slope,
        intercept=summary.intercept,
        dropped=tuple(dropped),
    )


def compare_embeddings(
    words: Sequence[str],
    attributes_a: Sequence[str],
    attributes_b: Sequence[str],
    store_one: EmbeddingStore,
    store_two: EmbeddingStore,
) -> EmbeddingComparison:
    """Correlate per-word scores between two stores over the common words.

    Words missing from either store are dropped pairwise and recorded; the
    attribute words must resolve in both stores.
    """
    dropped: list[tuple[str, str]] = []
    common: list[str] = []
    for word in words:
        in_one = word in store_one
        in_two = word in store_two
        if in_one and in_two:
            common.append(word)
        else:
            which = "neither" if not (in_one or in_two) else (
                "second_store" if in_one else "first_store"
            )
            dropped.append((word, f"not_in_{which}"))
    if len(common) < 3:
        raise ResolutionError(
            f"only {len(common)} words common to both stores; need >= 3"
        )
    scores = []
    for store in (store_one, store_two):
        numerator, denominator = _score_matrix(
            common, attributes_a, attributes_b, store
        )
        if np.any(denominator == 0.0):
            bad = [common[i] for i in np.nonzero(denominator == 0.0)[0]]
            raise DegenerateStatisticError(f"degenerate scores for {bad}")
        scores.append(numerator / denominator)
    summary = regression_suite(scores[0], scores[1])
    return EmbeddingComparison(
        pearson_rho=summary.pearson_rho,
        spearman_rho=summary.spearman_rho,
        words_used=tuple(common),
        dropped=tuple(dropped),
    )
