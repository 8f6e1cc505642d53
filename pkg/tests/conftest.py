import numpy as np
import pytest

from hazardsvm import Dataset


def make_blobs(n, positive_fraction, separation, seed, n_features=2):
    """Two unit-variance Gaussian clusters, positives displaced by
    ``separation`` along every axis, samples shuffled."""
    rng = np.random.default_rng(seed)
    n_pos = max(1, int(round(n * positive_fraction)))
    n_neg = n - n_pos
    X = np.vstack(
        [
            rng.normal(separation, 1.0, (n_pos, n_features)),
            rng.normal(0.0, 1.0, (n_neg, n_features)),
        ]
    )
    y = np.concatenate(
        [np.ones(n_pos, dtype=np.int64), -np.ones(n_neg, dtype=np.int64)]
    )
    perm = rng.permutation(n)
    return X[perm], y[perm]


def blob_dataset(n, positive_fraction, separation, seed, n_features=2):
    X, y = make_blobs(n, positive_fraction, separation, seed, n_features)
    return Dataset(tuple(f"f{i}" for i in range(n_features)), X, y)


@pytest.fixture
def tmp_csv(tmp_path):
    """Write named CSV content into the test's temp dir, return the path."""

    def write(name, text):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)

    return write
