"""Input validation helpers shared across the package."""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp
from sklearn.utils import check_array

# Canonical error phrases; callers match on these prefixes.
INSUFFICIENT_DATA = "insufficient data"
DIMENSION_MISMATCH = "dimension mismatch"
CONTEXT_REQUIRED = "context required"
INCOMPATIBLE_CODES = "incompatible codes"


def as_matrix(X, *, name: str = "X"):
    """Coerce to a validated 2-D float64 matrix (dense ndarray or CSR).

    Rejects NaN/Inf entries and empty inputs.
    """
    return check_array(
        X,
        accept_sparse="csr",
        dtype=np.float64,
        ensure_2d=True,
        input_name=name,
    )


def as_row(x, *, dim: int | None = None, name: str = "x"):
    """Coerce one point to a (1, d) matrix, checking dimension when given."""
    if sp.issparse(x):
        row = x.tocsr()
    else:
        arr = np.asarray(x, dtype=np.float64)
        if arr.ndim == 1:
            arr = arr.reshape(1, -1)
        row = arr
    row = as_matrix(row, name=name)
    if row.shape[0] != 1:
        raise ValueError(f"{name}: expected a single point, got {row.shape[0]} rows")
    if dim is not None and row.shape[1] != dim:
        raise ValueError(
            f"{DIMENSION_MISMATCH}: {name} has {row.shape[1]} features, expected {dim}"
        )
    return row


def check_dim(X, dim: int, *, name: str = "X"):
    """Raise the dimension-mismatch error unless X has exactly `dim` columns."""
    if X.shape[1] != dim:
        raise ValueError(
            f"{DIMENSION_MISMATCH}: {name} has {X.shape[1]} features, expected {dim}"
        )
    return X
