"""Association statistic, permutation p-values, and effect size."""
import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from embias import (
    DegenerateStatisticError,
    EmbeddingStore,
    UsageError,
    WeatConfig,
    association,
    builtin_weat,
    differential,
    effect_size,
    p_exact,
    p_montecarlo,
    p_normal,
    run_weat,
)
from embias.stimuli import WeatSpec, WordSet

from conftest import make_random_store


def brute_force_p(store, targets_x, targets_y, attrs_a, attrs_b, tie="geq"):
    """Independent oracle: pure-python cosines and full partition statistics."""

    def cos(u, v):
        du = [float(c) for c in u]
        dv = [float(c) for c in v]
        dot = sum(a * b for a, b in zip(du, dv))
        return dot / (
            math.sqrt(sum(a * a for a in du)) * math.sqrt(sum(b * b for b in dv))
        )

    def assoc(word):
        mean_a = sum(cos(store.vector(word), store.vector(a)) for a in attrs_a)
        mean_b = sum(cos(store.vector(word), store.vector(b)) for b in attrs_b)
        return mean_a / len(attrs_a) - mean_b / len(attrs_b)

    pool = list(targets_x) + list(targets_y)
    values = {w: assoc(w) for w in pool}
    observed = sum(values[w] for w in targets_x) - sum(values[w] for w in targets_y)
    count = total = 0
    for combo in itertools.combinations(pool, len(targets_x)):
        chosen = set(combo)
        statistic = sum(values[w] for w in combo) - sum(
            values[w] for w in pool if w not in chosen
        )
        total += 1
        if (statistic >= observed) if tie == "geq" else (statistic > observed):
            count += 1
    return count / total


# ---------------------------------------------------------------------------
# association & differential
# ---------------------------------------------------------------------------


def test_association_same_attribute_sets_is_zero(random_store):
    store = make_random_store(2, n_attrs=2, seed=5)
    assert association("t0", ["a0", "a1"], ["a0", "a1"], store) == 0.0


def test_association_hand_fixture(axes_store):
    assert association("x1", ["a"], ["b"], axes_store) == pytest.approx(1.0)


def test_association_antisymmetry(random_store):
    store = make_random_store(3, n_attrs=4, seed=11)
    forward = association("t0", ["a0", "a1"], ["a2", "a3"], store)
    backward = association("t0", ["a2", "a3"], ["a0", "a1"], store)
    assert forward == -backward


def test_association_unresolvable_word_errors(axes_store):
    from embias import ResolutionError

    with pytest.raises(ResolutionError):
        association("ghost", ["a"], ["b"], axes_store)


def test_differential_identical_multisets_is_zero():
    matrix = np.array([[1, 2], [1, 2], [3, 1], [1, 0]], np.float32)
    store = EmbeddingStore(["u1", "u2", "a", "b"], matrix)
    assert differential(["u1"], ["u2"], ["a"], ["b"], store) == 0.0


def test_differential_hand_fixture(axes_store):
    value = differential(["x1", "x2"], ["y1", "y2"], ["a"], ["b"], axes_store)
    assert value == pytest.approx(4.0)


def test_differential_antisymmetry(random_store):
    store = make_random_store(6, seed=21)
    x, y = ["t0", "t1", "t2"], ["t3", "t4", "t5"]
    a, b = ["a0", "a1"], ["a2", "a3"]
    assert differential(x, y, a, b, store) == -differential(y, x, a, b, store)


def test_differential_size_mismatch(axes_store):
    with pytest.raises(UsageError, match="equal size"):
        differential(["x1"], ["y1", "y2"], ["a"], ["b"], axes_store)


# ---------------------------------------------------------------------------
# effect size
# ---------------------------------------------------------------------------


def test_effect_size_maximum_on_hand_fixture(axes_store):
    value = effect_size(["x1", "x2"], ["y1", "y2"], ["a"], ["b"], axes_store)
    assert value == 2.0


def test_effect_size_sample_sd_flag(axes_store):
    population = effect_size(["x1", "x2"], ["y1", "y2"], ["a"], ["b"], axes_store)
    sample = effect_size(
        ["x1", "x2"], ["y1", "y2"], ["a"], ["b"], axes_store, sd="sample"
    )
    # sample SD is larger by sqrt(N/(N-1)), so the effect is smaller
    assert sample == pytest.approx(population * math.sqrt(3 / 4))


def test_effect_size_degenerate(axes_store):
    with pytest.raises(DegenerateStatisticError):
        effect_size(["x1", "x2"], ["x1", "x2"][::-1], ["a"], ["b"], axes_store)


def test_effect_size_null_mean_near_zero():
    sizes = []
    for seed in range(40):
        store = make_random_store(8, seed=1_000 + seed)
        sizes.append(
            effect_size(
                ["t0", "t1", "t2", "t3"],
                ["t4", "t5", "t6", "t7"],
                ["a0", "a1"],
                ["a2", "a3"],
                store,
            )
        )
    assert abs(np.mean(sizes)) < 0.3


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10_000), st.integers(2, 6))
def test_effect_size_bound(seed, n):
    store = make_random_store(2 * n, seed=seed)
    targets = [f"t{i}" for i in range(2 * n)]
    value = effect_size(
        targets[:n], targets[n:], ["a0", "a1"], ["a2", "a3"], store
    )
    assert abs(value) <= 2.0 + 1e-12


# ---------------------------------------------------------------------------
# p-values
# ---------------------------------------------------------------------------


def test_p_exact_hand_fixture(axes_store):
    x, y, a, b = ["x1", "x2"], ["y1", "y2"], ["a"], ["b"]
    assert p_exact(x, y, a, b, axes_store) == pytest.approx(1 / 6)
    assert p_exact(x, y, a, b, axes_store, "strict") == 0.0


def test_p_exact_all_identical_vectors_is_one():
    matrix = np.tile(np.array([[1.0, 2.0]], np.float32), (6, 1))
    matrix = np.vstack([matrix, np.array([[1, 0], [0, 1]], np.float32)])
    tokens = [f"t{i}" for i in range(6)] + ["a", "b"]
    store = EmbeddingStore(tokens, matrix)
    p = p_exact(["t0", "t1", "t2"], ["t3", "t4", "t5"], ["a"], ["b"], store)
    assert p == 1.0


def test_p_exact_matches_brute_force():
    for seed, n in [(0, 2), (1, 3), (2, 4), (3, 5)]:
        store = make_random_store(2 * n, seed=seed)
        targets = [f"t{i}" for i in range(2 * n)]
        x, y = targets[:n], targets[n:]
        a, b = ["a0", "a1"], ["a2", "a3"]
        for tie in ("geq", "strict"):
            assert p_exact(x, y, a, b, store, tie) == brute_force_p(
                store, x, y, a, b, tie
            )


def test_p_exact_threshold_redirects_to_montecarlo():
    store = make_random_store(16, seed=4)
    targets = [f"t{i}" for i in range(16)]
    with pytest.raises(UsageError, match="[Mm]onte [Cc]arlo"):
        p_exact(
            targets[:8], targets[8:], ["a0", "a1"], ["a2", "a3"], store,
            exact_threshold=1_000,
        )


def test_p_montecarlo_converges_to_exact(axes_store):
    x, y, a, b = ["x1", "x2"], ["y1", "y2"], ["a"], ["b"]
    p, stderr = p_montecarlo(x, y, a, b, axes_store, samples=100_000, seed=42)
    assert abs(p - 1 / 6) <= 3 * stderr


def test_p_montecarlo_maximally_separated():
    # 25+25 targets: C(50, 25) dwarfs the sample count, and only the identity
    # partition reaches the observed statistic, so p <= 2/(m+1)
    n = 25
    rng = np.random.default_rng(12)
    jitter = rng.uniform(-0.1, 0.1, size=2 * n)
    rows = [[10.0, jitter[i]] for i in range(n)]
    rows += [[-10.0, jitter[n + i]] for i in range(n)]
    rows += [[1.0, 0.0], [0.0, 1.0]]
    tokens = [f"p{i}" for i in range(n)] + [f"q{i}" for i in range(n)] + ["aa", "bb"]
    separated = EmbeddingStore(tokens, np.array(rows, np.float32))
    m = 10_000
    p, _ = p_montecarlo(
        [f"p{i}" for i in range(n)], [f"q{i}" for i in range(n)],
        ["aa"], ["bb"], separated, samples=m, seed=9,
    )
    assert p <= 2 / (m + 1)


def test_p_montecarlo_deterministic_across_workers(axes_store):
    x, y, a, b = ["x1", "x2"], ["y1", "y2"], ["a"], ["b"]
    single = p_montecarlo(x, y, a, b, axes_store, samples=50_000, seed=7, workers=1)
    threaded = p_montecarlo(x, y, a, b, axes_store, samples=50_000, seed=7, workers=4)
    assert single == threaded


def test_p_montecarlo_minimum_samples(axes_store):
    with pytest.raises(UsageError):
        p_montecarlo(["x1", "x2"], ["y1", "y2"], ["a"], ["b"], axes_store, samples=10)


def test_p_normal_symmetric_null_is_half():
    store = make_random_store(12, seed=33)
    targets = [f"t{i}" for i in range(12)]
    values = []
    for seed in range(5):
        store = make_random_store(12, seed=100 + seed)
        values.append(
            p_normal(
                targets[:6], targets[6:], ["a0", "a1"], ["a2", "a3"], store,
                samples=20_000, seed=seed,
            )
        )
    assert abs(np.mean(values) - 0.5) < 0.25
    assert all(0.0 < v < 1.0 for v in values)


@pytest.mark.parametrize("seed", range(12))
def test_p_normal_within_factor_of_exact(seed):
    # continuous fixtures; the looseness allows for small-n normality error
    store = make_random_store(8, seed=seed)
    x = [f"t{i}" for i in range(4)]
    y = [f"t{i}" for i in range(4, 8)]
    a, b = ["a0", "a1"], ["a2", "a3"]
    approx = p_normal(x, y, a, b, store, samples=50_000, seed=5)
    exact = p_exact(x, y, a, b, store)
    assert exact / 3 <= approx <= exact * 3


def test_p_normal_degenerate_null():
    matrix = np.tile(np.array([[1.0, 2.0]], np.float32), (4, 1))
    matrix = np.vstack([matrix, np.array([[1, 0], [0, 1]], np.float32)])
    store = EmbeddingStore(["t0", "t1", "t2", "t3", "a", "b"], matrix)
    with pytest.raises(DegenerateStatisticError):
        p_normal(
            ["t0", "t1"], ["t2", "t3"], ["a"], ["b"], store,
            samples=10_000, seed=0,
        )


# ---------------------------------------------------------------------------
# scale invariance
# ---------------------------------------------------------------------------


def test_statistics_invariant_under_positive_scaling():
    # power-of-two scales are exact in float32 storage, so this isolates the
    # algorithmic invariance from storage rounding
    rng = np.random.default_rng(8)
    scale = 2.0 ** rng.integers(-2, 4, size=12)
    plain = make_random_store(8, seed=77)
    scaled = make_random_store(8, seed=77, scale=scale)
    x, y = [f"t{i}" for i in range(4)], [f"t{i}" for i in range(4, 8)]
    a, b = ["a0", "a1"], ["a2", "a3"]
    assert differential(x, y, a, b, scaled) == pytest.approx(
        differential(x, y, a, b, plain), abs=1e-9
    )
    assert effect_size(x, y, a, b, scaled) == pytest.approx(
        effect_size(x, y, a, b, plain), abs=1e-9
    )
    assert p_exact(x, y, a, b, scaled) == p_exact(x, y, a, b, plain)


# ---------------------------------------------------------------------------
# run_weat
# ---------------------------------------------------------------------------


def _toy_spec():
    return WeatSpec(
        test_id="toy",
        target_x=WordSet("xs", ("t0", "t1", "t2")),
        target_y=WordSet("ys", ("t3", "t4", "t5")),
        attribute_a=WordSet("as", ("a0", "a1")),
        attribute_b=WordSet("bs", ("a2", "a3")),
    )


def test_run_weat_auto_uses_exact_for_small_sets():
    store = make_random_store(6, seed=3)
    result = run_weat(_toy_spec(), store)
    assert result.p_method == "exact"
    assert result.samples == math.comb(6, 3)
    assert len(result.per_word) == 6
    assert {label for _, label, _ in result.per_word} == {"xs", "ys"}


def test_run_weat_auto_switches_to_montecarlo_with_annotation():
    store = make_random_store(6, seed=3)
    config = WeatConfig(exact_threshold=5, samples=2_000)
    result = run_weat(_toy_spec(), store, config)
    assert result.p_method == "montecarlo"
    assert result.p_stderr is not None
    assert result.p_raw is not None
    assert result.p_normal_tail is not None


def test_run_weat_statistic_consistent_with_parts():
    store = make_random_store(6, seed=15)
    result = run_weat(_toy_spec(), store)
    by_label = {"xs": 0.0, "ys": 0.0}
    for _, label, value in result.per_word:
        by_label[label] += value
    assert result.statistic == pytest.approx(by_label["xs"] - by_label["ys"])


def test_run_weat_swap_negates():
    store = make_random_store(6, seed=19)
    spec = _toy_spec()
    swapped = WeatSpec(
        test_id="toy_swapped",
        target_x=spec.target_y,
        target_y=spec.target_x,
        attribute_a=spec.attribute_a,
        attribute_b=spec.attribute_b,
    )
    forward = run_weat(spec, store)
    backward = run_weat(swapped, store)
    assert forward.statistic == -backward.statistic
    assert forward.effect_size == pytest.approx(-backward.effect_size, abs=1e-12)
    # geq tails mirror: the two p-values cover everything plus the one tie
    # at the identity partition
    n_partitions = math.comb(6, 3)
    assert forward.p_value + backward.p_value == pytest.approx(
        1 + 1 / n_partitions, abs=1e-12
    )


def test_run_weat_seed_recorded_and_reproducible():
    store = make_random_store(6, seed=23)
    config = WeatConfig(p_method="montecarlo", samples=5_000, seed=99)
    first = run_weat(_toy_spec(), store, config)
    second = run_weat(_toy_spec(), store, config)
    assert first.seed == 99
    assert first.p_value == second.p_value
    assert first.statistic == second.statistic


def test_run_weat_builtin_spec_resolves_against_tiny_store():
    # every builtin word present: identity resolution
    spec = builtin_weat("career_family")
    words = [w for s in spec.sets() for w in s.words]
    rng = np.random.default_rng(44)
    store = EmbeddingStore(
        words, rng.normal(size=(len(words), 8)).astype(np.float32)
    )
    result = run_weat(spec, store)
    assert result.resolution.missing == ()
    assert result.test_id == "career_family"
