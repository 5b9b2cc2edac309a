"""Shared fixtures: small deterministic datasets and hand-built models."""

import numpy as np
import pytest

from isokernel.data import Dataset
from isokernel.kernel import IsolationKernel


@pytest.fixture
def make_model():
    """Build a model directly from explicit reference sets.

    `refs` is a list of (psi, d) arrays, one per partitioning; all must share
    psi and d. The result behaves exactly like a fitted model.
    """

    def build(refs) -> IsolationKernel:
        refs = [np.asarray(r, dtype=np.float64) for r in refs]
        psi, d = refs[0].shape
        assert all(r.shape == (psi, d) for r in refs)
        t = len(refs)
        rows = np.vstack(refs)
        ref_idx = np.arange(t * psi, dtype=np.int64).reshape(t, psi)
        return IsolationKernel(psi=psi, t=t, seed=0)._set_fitted(rows, ref_idx, d)

    return build


@pytest.fixture
def tiny_blobs() -> Dataset:
    """Three tight, well-separated 2-D blobs of 20 points each."""
    rng = np.random.default_rng(7)
    centers = [(0.0, 0.0), (20.0, 0.0), (0.0, 20.0)]
    points = np.vstack([rng.normal(c, 0.3, size=(20, 2)) for c in centers])
    labels = np.repeat([0, 1, 2], 20)
    return Dataset("tiny-blobs", points, labels)


@pytest.fixture
def two_blobs() -> Dataset:
    """Two separated 2-D blobs, the second one four times as spread out."""
    rng = np.random.default_rng(3)
    a = rng.normal((0.0, 0.0), 0.5, size=(25, 2))
    b = rng.normal((15.0, 0.0), 2.0, size=(25, 2))
    return Dataset("two-blobs", np.vstack([a, b]), np.repeat([0, 1], 25))
