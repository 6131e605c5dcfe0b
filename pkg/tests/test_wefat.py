"""Normalized association scores, name filtering, and regression."""
import math

import numpy as np
import pytest
from scipy import stats as scipy_stats

from embias import (
    DegenerateStatisticError,
    EmbeddingStore,
    ResolutionError,
    UsageError,
    compare_embeddings,
    name_likeness_filter,
    regression_suite,
    run_wefat,
    wefat_score,
)

from conftest import make_random_store


# ---------------------------------------------------------------------------
# wefat_score
# ---------------------------------------------------------------------------


def test_wefat_score_hand_fixture(axes_store):
    # cosines {1, 0}: mean difference 1, population SD 0.5
    assert wefat_score("x1", ["a"], ["b"], axes_store) == 2.0


def test_wefat_score_antisymmetry():
    store = make_random_store(1, n_attrs=6, seed=2)
    a, b = ["a0", "a1", "a2"], ["a3", "a4", "a5"]
    assert wefat_score("t0", a, b, store) == -wefat_score("t0", b, a, store)


def test_wefat_score_scale_invariance():
    scale = 2.0 ** np.arange(-3, 4)
    plain = make_random_store(1, n_attrs=6, seed=31)
    scaled = make_random_store(1, n_attrs=6, seed=31, scale=scale)
    a, b = ["a0", "a1", "a2"], ["a3", "a4", "a5"]
    assert wefat_score("t0", a, b, scaled) == pytest.approx(
        wefat_score("t0", a, b, plain), abs=1e-9
    )


def test_wefat_score_degenerate():
    store = EmbeddingStore(
        ["w", "a1", "a2"],
        np.array([[1, 0], [0, 1], [0, 2]], np.float32),
    )
    # both attribute cosines are 0, deviation 0
    with pytest.raises(DegenerateStatisticError):
        wefat_score("w", ["a1"], ["a2"], store)


def test_wefat_score_gendered_geometry():
    # targets built as combinations of a "female" and a "male" direction:
    # the one leaning female scores positive, the other negative
    fem = np.array([1.0, 0.0, 0.0])
    male = np.array([0.0, 1.0, 0.0])
    rows = {
        "nurse_like": 0.9 * fem + 0.1 * male,
        "carpenter_like": 0.1 * fem + 0.9 * male,
        "she": fem + np.array([0, 0, 0.05]),
        "her": fem - np.array([0, 0, 0.04]),
        "he": male + np.array([0, 0, 0.03]),
        "him": male - np.array([0, 0, 0.06]),
    }
    store = EmbeddingStore(
        list(rows), np.array(list(rows.values()), np.float32)
    )
    assert wefat_score("nurse_like", ["she", "her"], ["he", "him"], store) > 0
    assert wefat_score("carpenter_like", ["she", "her"], ["he", "him"], store) < 0


# ---------------------------------------------------------------------------
# name_likeness_filter
# ---------------------------------------------------------------------------


def _cluster_store():
    # 4 identical vectors plus one orthogonal outlier
    rows = np.array(
        [[1, 0], [1, 0], [1, 0], [1, 0], [0, 1]], np.float32
    )
    return EmbeddingStore(["n1", "n2", "n3", "n4", "odd"], rows)


def test_name_filter_drops_the_outlier():
    kept, dropped = name_likeness_filter(
        ["n1", "n2", "n3", "n4", "odd"], _cluster_store(), drop_fraction=0.2
    )
    assert dropped == ["odd"]
    assert kept == ["n1", "n2", "n3", "n4"]


def test_name_filter_zero_fraction_is_identity():
    names = ["n1", "n2", "n3", "n4", "odd"]
    kept, dropped = name_likeness_filter(names, _cluster_store(), drop_fraction=0.0)
    assert kept == names
    assert dropped == []


def test_name_filter_arity():
    store = make_random_store(50, seed=6)
    names = [f"t{i}" for i in range(50)]
    kept, dropped = name_likeness_filter(names, store, drop_fraction=0.2)
    assert len(dropped) == 10  # ceil(0.2 * 50)
    assert len(kept) == 40
    assert sorted(kept + dropped) == sorted(names)


def test_name_filter_order_independent():
    store = make_random_store(20, seed=16)
    names = [f"t{i}" for i in range(20)]
    shuffled = list(reversed(names))
    kept_a, dropped_a = name_likeness_filter(names, store)
    kept_b, dropped_b = name_likeness_filter(shuffled, store)
    assert set(kept_a) == set(kept_b)
    assert set(dropped_a) == set(dropped_b)


def test_name_filter_tie_break_is_lexicographic():
    # all candidates identical: distances all tie, so the lexicographically
    # smallest tokens are dropped first
    rows = np.tile(np.array([[1.0, 1.0]], np.float32), (5, 1))
    store = EmbeddingStore(["e", "c", "a", "d", "b"], rows)
    _, dropped = name_likeness_filter(["e", "c", "a", "d", "b"], store, 0.4)
    assert dropped == ["a", "b"]


def test_name_filter_fraction_range():
    store = _cluster_store()
    with pytest.raises(UsageError):
        name_likeness_filter(["n1", "n2", "n3", "n4", "odd"], store, 0.95)


def test_name_filter_needs_five_names():
    store = _cluster_store()
    with pytest.raises(UsageError):
        name_likeness_filter(["n1", "n2"], store)


def test_name_filter_euclidean_flag():
    kept, dropped = name_likeness_filter(
        ["n1", "n2", "n3", "n4", "odd"], _cluster_store(), metric="euclidean"
    )
    assert dropped == ["odd"]


# ---------------------------------------------------------------------------
# regression_suite
# ---------------------------------------------------------------------------


def test_regression_exact_linear():
    xs = [1.0, 2.0, 3.0, 4.0]
    summary = regression_suite(xs, [2 * x + 1 for x in xs])
    assert summary.pearson_rho == pytest.approx(1.0, abs=1e-12)
    assert summary.slope == pytest.approx(2.0, abs=1e-12)
    assert summary.intercept == pytest.approx(1.0, abs=1e-12)
    assert summary.spearman_rho == pytest.approx(1.0, abs=1e-12)
    assert summary.pearson_p < 1e-10


def test_regression_three_point_hand_values():
    summary = regression_suite([1, 2, 3], [6, 4, 5])
    assert summary.pearson_rho == pytest.approx(-0.5, abs=1e-12)
    assert summary.spearman_rho == pytest.approx(-0.5, abs=1e-12)


def test_regression_matches_scipy():
    rng = np.random.default_rng(77)
    xs = rng.normal(size=20)
    ys = 0.6 * xs + rng.normal(size=20)
    summary = regression_suite(xs, ys)
    pearson = scipy_stats.pearsonr(xs, ys)
    spearman = scipy_stats.spearmanr(xs, ys)
    fit = scipy_stats.linregress(xs, ys)
    assert summary.pearson_rho == pytest.approx(pearson.statistic, abs=1e-12)
    assert summary.pearson_p == pytest.approx(pearson.pvalue, rel=1e-9)
    assert summary.spearman_rho == pytest.approx(spearman.statistic, abs=1e-12)
    assert summary.slope == pytest.approx(fit.slope, abs=1e-12)
    assert summary.intercept == pytest.approx(fit.intercept, abs=1e-12)


def test_regression_spearman_handles_ties():
    xs = [1, 2, 2, 3]
    ys = [10, 20, 20, 40]
    summary = regression_suite(xs, ys)
    expected = scipy_stats.spearmanr(xs, ys).statistic
    assert summary.spearman_rho == pytest.approx(expected, abs=1e-12)


def test_regression_sign_property():
    rng = np.random.default_rng(3)
    xs = rng.normal(size=15)
    for a in (-4.0, 0.5, 7.0):
        summary = regression_suite(xs, a * xs - 2.0)
        assert summary.pearson_rho == pytest.approx(math.copysign(1.0, a), abs=1e-9)


def test_regression_spearman_monotone_invariance():
    rng = np.random.default_rng(13)
    xs = rng.normal(size=25)
    ys = rng.normal(size=25)
    base = regression_suite(xs, ys).spearman_rho
    warped = regression_suite(np.exp(xs), ys).spearman_rho
    warped2 = regression_suite(xs, ys ** 3).spearman_rho
    assert warped == pytest.approx(base, abs=1e-12)
    assert warped2 == pytest.approx(base, abs=1e-12)


def test_regression_slope_rho_identity():
    rng = np.random.default_rng(23)
    xs = rng.normal(size=30)
    ys = 1.4 * xs + rng.normal(size=30)
    summary = regression_suite(xs, ys)
    assert summary.slope * xs.std() / ys.std() == pytest.approx(
        summary.pearson_rho, abs=1e-9
    )


def test_regression_pearson_p_matches_permutation_oracle():
    # brute-force permutation of ys (two-sided on |rho|), 100k shuffles
    def permutation_p(xs, ys, shuffles, seed):
        rng = np.random.default_rng(seed)
        xs = np.asarray(xs, float)
        centered_x = xs - xs.mean()
        ys = np.asarray(ys, float)
        centered_y = ys - ys.mean()
        denom = math.sqrt((centered_x ** 2).sum() * (centered_y ** 2).sum())
        observed = abs(float((centered_x * centered_y).sum()) / denom)
        hits = 0
        for _ in range(shuffles):
            rho = abs(float((centered_x * rng.permutation(centered_y)).sum()) / denom)
            hits += rho >= observed
        return (hits + 1) / (shuffles + 1)

    shuffles = 100_000
    for n, seed in ((12, 5), (15, 9)):
        rng = np.random.default_rng(seed)
        xs = rng.normal(size=n)
        ys = 0.55 * xs + rng.normal(size=n)
        summary = regression_suite(xs, ys)
        oracle = permutation_p(xs, ys, shuffles, seed=seed + 100)
        stderr = math.sqrt(oracle * (1 - oracle) / shuffles)
        assert abs(summary.pearson_p - oracle) <= 3 * stderr


def test_regression_degenerate_variance():
    with pytest.raises(DegenerateStatisticError):
        regression_suite([1, 1, 1], [1, 2, 3])
    with pytest.raises(DegenerateStatisticError):
        regression_suite([1, 2, 3], [5, 5, 5])


def test_regression_needs_three_points():
    with pytest.raises(UsageError):
        regression_suite([1, 2], [3, 4])


# ---------------------------------------------------------------------------
# run_wefat
# ---------------------------------------------------------------------------


def _gender_axis_store(n_targets=10, seed=4):
    """Targets interpolate between a female and a male axis; the property is
    the interpolation weight, so score and property correlate strongly."""
    rng = np.random.default_rng(seed)
    fem = np.array([1.0, 0.0, 0.0, 0.0])
    male = np.array([0.0, 1.0, 0.0, 0.0])
    tokens, rows, properties = [], [], {}
    for i in range(n_targets):
        weight = i / (n_targets - 1)
        noise = rng.normal(scale=0.05, size=4)
        tokens.append(f"occ{i}")
        rows.append(weight * fem + (1 - weight) * male + noise)
        properties[f"occ{i}"] = 100.0 * weight
    for name, base in (("she", fem), ("her", fem), ("he", male), ("him", male)):
        tokens.append(name)
        rows.append(base + rng.normal(scale=0.02, size=4))
    store = EmbeddingStore(tokens, np.array(rows, np.float32))
    return store, list(properties), properties


def test_run_wefat_recovers_property_ordering():
    store, targets, properties = _gender_axis_store()
    result = run_wefat(targets, properties, ["she", "her"], ["he", "him"], store)
    # score is monotone but saturating in the mixing weight, so Spearman is
    # near 1 while Pearson is merely high
    assert result.pearson_rho > 0.8
    assert result.spearman_rho > 0.95
    assert len(result.points) == 10
    # points ordered by property
    values = [prop for _, _, prop in result.points]
    assert values == sorted(values)


def test_run_wefat_records_vocabulary_misses():
    store, targets, properties = _gender_axis_store()
    properties = dict(properties)
    properties["ghost"] = 50.0
    result = run_wefat(
        targets + ["ghost"], properties, ["she", "her"], ["he", "him"], store
    )
    assert ("ghost", "not_in_vocabulary") in result.dropped


def test_run_wefat_name_filter_drops_fraction():
    store, targets, properties = _gender_axis_store()
    result = run_wefat(
        targets, properties, ["she", "her"], ["he", "him"], store,
        name_filter=True,
    )
    filtered = [w for w, reason in result.dropped if reason == "name_filter"]
    assert len(filtered) == 2  # ceil(0.2 * 10)
    assert len(result.points) == 8


def test_run_wefat_missing_property_is_hard_error():
    store, targets, properties = _gender_axis_store()
    properties = dict(properties)
    del properties["occ3"]
    with pytest.raises(ResolutionError, match="occ3"):
        run_wefat(targets, properties, ["she", "her"], ["he", "him"], store)


def test_run_wefat_constant_properties_degenerate():
    store, targets, _ = _gender_axis_store()
    flat = {t: 42.0 for t in targets}
    with pytest.raises(DegenerateStatisticError):
        run_wefat(targets, flat, ["she", "her"], ["he", "him"], store)


def test_run_wefat_too_few_points():
    store, targets, properties = _gender_axis_store()
    with pytest.raises(ResolutionError, match=">= 3"):
        run_wefat(targets[:2], properties, ["she", "her"], ["he", "him"], store)


# ---------------------------------------------------------------------------
# compare_embeddings
# ---------------------------------------------------------------------------


def test_compare_identical_stores_is_unity():
    store, targets, _ = _gender_axis_store()
    comparison = compare_embeddings(
        targets, ["she", "her"], ["he", "him"], store, store
    )
    assert comparison.pearson_rho == pytest.approx(1.0, abs=1e-12)
    assert comparison.spearman_rho == pytest.approx(1.0, abs=1e-12)


def test_compare_scaled_store_is_unity():
    plain = make_random_store(12, n_attrs=4, seed=41)
    scale = 2.0 ** np.arange(16) % 7 + 1  # positive, varied
    scaled = make_random_store(12, n_attrs=4, seed=41, scale=scale)
    words = [f"t{i}" for i in range(12)]
    comparison = compare_embeddings(
        words, ["a0", "a1"], ["a2", "a3"], plain, scaled
    )
    assert comparison.pearson_rho == pytest.approx(1.0, abs=1e-9)
    assert comparison.spearman_rho == pytest.approx(1.0, abs=1e-9)


def test_compare_drops_pairwise_and_records():
    first, targets, _ = _gender_axis_store(seed=4)
    rng = np.random.default_rng(9)
    # second store misses occ0
    keep = [t for t in targets if t != "occ0"] + ["she", "her", "he", "him"]
    second = EmbeddingStore(
        keep, rng.normal(size=(len(keep), 4)).astype(np.float32)
    )
    comparison = compare_embeddings(
        targets, ["she", "her"], ["he", "him"], first, second
    )
    assert ("occ0", "not_in_second_store") in comparison.dropped
    assert "occ0" not in comparison.words_used


def test_compare_needs_three_common_words():
    a = make_random_store(3, seed=1)
    b = make_random_store(3, seed=2)
    with pytest.raises(ResolutionError):
        compare_embeddings(["t0", "nope", "zilch"], ["a0"], ["a1"], a, b)
