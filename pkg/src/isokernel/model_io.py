"""Text serialization for models (IKM1) and codes (IKC1).

Model file layout:
    IKM1 psi=<psi> t=<t> dim=<d> seed=<s>
    ... t blocks, each psi lines of comma-separated reals ...
Values are written with 17 significant digits, which round-trips IEEE
doubles bit-exactly.

Code file layout:
    IKC1 psi=<psi> t=<t> n=<n>
    ... n lines of t space-separated integers ...
"""

from __future__ import annotations

import re

import numpy as np
import scipy.sparse as sp
from sklearn.utils.validation import check_is_fitted

from .kernel import Codes, IsolationKernel
from .tables import open_output

_MODEL_HEADER = re.compile(r"^IKM1 psi=(\d+) t=(\d+) dim=(\d+) seed=(\d+)$")
_CODES_HEADER = re.compile(r"^IKC1 psi=(\d+) t=(\d+) n=(\d+)$")


def _format_block(rows: np.ndarray) -> str:
    return "\n".join(",".join(f"{v:.17g}" for v in row) for row in rows)


def save_model(model: IsolationKernel, path) -> None:
    """Write a fitted model; reference sets are expanded to dense rows."""
    check_is_fitted(model, "pool_")
    with open_output(path) as fh:
        fh.write(
            f"IKM1 psi={model.psi} t={model.t} dim={model.dim_} seed={model.seed}\n"
        )
        for i in range(model.t):
            block = model.pool_[model.ref_idx_[i]]
            if sp.issparse(block):
                block = block.toarray()
            fh.write(_format_block(np.asarray(block)))
            fh.write("\n")


def load_model(path) -> IsolationKernel:
    with open(path, "r", encoding="ascii") as fh:
        header = fh.readline().rstrip("\n")
        m = _MODEL_HEADER.match(header)
        if m is None:
            raise ValueError(f"{path}: not an IKM1 model file (bad header {header!r})")
        psi, t, dim, seed = (int(g) for g in m.groups())
        rows = np.empty((t * psi, dim), dtype=np.float64)
        for i in range(t * psi):
            line = fh.readline()
            if not line:
                raise ValueError(
                    f"{path}: truncated model file, expected {t * psi} reference rows"
                )
            parts = line.rstrip("\n").split(",")
            if len(parts) != dim:
                raise ValueError(
                    f"{path}: reference row {i + 1} has {len(parts)} values, expected {dim}"
                )
            rows[i] = [float(p) for p in parts]
        if fh.readline().strip():
            raise ValueError(f"{path}: trailing content after {t * psi} reference rows")
    model = IsolationKernel(psi=psi, t=t, seed=seed)
    ref_idx = np.arange(t * psi, dtype=np.int64).reshape(t, psi)
    return model._set_fitted(rows, ref_idx, dim)


def save_codes(codes: Codes, path) -> None:
    with open_output(path) as fh:
        fh.write(f"IKC1 psi={codes.psi} t={codes.t} n={codes.n}\n")
        for row in codes.cells:
            fh.write(" ".join(str(int(v)) for v in row))
            fh.write("\n")


def load_codes(path) -> Codes:
    with open(path, "r", encoding="ascii") as fh:
        header = fh.readline().rstrip("\n")
        m = _CODES_HEADER.match(header)
        if m is None:
            raise ValueError(f"{path}: not an IKC1 code file (bad header {header!r})")
        psi, t, n = (int(g) for g in m.groups())
        cells = np.empty((n, t), dtype=np.int32)
        for i in range(n):
            line = fh.readline()
            if not line:
                raise ValueError(f"{path}: truncated code file, expected {n} rows")
            parts = line.split()
            if len(parts) != t:
                raise ValueError(
                    f"{path}: code row {i + 1} has {len(parts)} entries, expected {t}"
                )
            cells[i] = [int(p) for p in parts]
        if fh.readline().strip():
            raise ValueError(f"{path}: trailing content after {n} code rows")
    return Codes(cells, psi)
