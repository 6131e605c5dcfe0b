import numpy as np
import pytest

from embias import EmbeddingStore


@pytest.fixture
def axes_store():
    """Two target pairs on opposite axes plus one attribute word per axis.

    The canonical hand fixture: differential 4.0, effect size exactly 2.0,
    exact geq p = 1/6.
    """
    tokens = ["x1", "x2", "y1", "y2", "a", "b"]
    matrix = np.array(
        [[1, 0], [1, 0], [0, 1], [0, 1], [1, 0], [0, 1]], dtype=np.float32
    )
    return EmbeddingStore(tokens, matrix, provenance="axes fixture")


def make_random_store(n_targets, n_attrs=4, dim=10, seed=0, scale=None):
    """A store of gaussian vectors: t0..t{n-1} targets, a0.. attributes."""
    rng = np.random.default_rng(seed)
    matrix = rng.normal(size=(n_targets + n_attrs, dim))
    if scale is not None:
        matrix = matrix * np.asarray(scale)[:, None]
    tokens = [f"t{i}" for i in range(n_targets)] + [f"a{i}" for i in range(n_attrs)]
    return EmbeddingStore(tokens, matrix.astype(np.float32))


@pytest.fixture
def random_store():
    return make_random_store
