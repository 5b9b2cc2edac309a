"""Monte-Carlo checks of cell probabilities and full-code collisions.

Both tests draw fresh reference sets per trial and assign points to cells
exactly as the kernel encoder does: nearest reference by squared Euclidean
distance, ties to the lowest reference index.
"""

from __future__ import annotations

import numpy as np

DISTRIBUTIONS = ("uniform", "gaussian", "two-cluster")

# element budget per batch of reference draws, keeps temporaries ~tens of MB
_BATCH_ELEMENTS = 4_000_000


def sample_points(kind: str, rng: np.random.Generator, shape: tuple) -> np.ndarray:
    """Draw from a named test distribution; the last axis is the dimension."""
    if kind == "uniform":
        return rng.uniform(0.0, 1.0, size=shape)
    if kind == "gaussian":
        return rng.standard_normal(size=shape)
    if kind == "two-cluster":
        # even mixture of N(0, I) and N(5*ones, I)
        x = rng.standard_normal(size=shape)
        shift = rng.integers(0, 2, size=shape[:-1] + (1,)) * 5.0
        return x + shift
    raise ValueError(f"unknown distribution {kind!r}; choose from {DISTRIBUTIONS}")


def nearest_cells(refs: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Cell of x under each reference set: refs (..., psi, d), x (..., 1, d).

    argmin keeps the first occurrence, so ties resolve to the lowest
    reference index, matching the encoder.
    """
    d2 = ((refs - x) ** 2).sum(axis=-1)
    return np.argmin(d2, axis=-1)


def cell_probability_test(
    psi: int,
    dist_g: str,
    dist_f: str,
    d: int,
    trials: int,
    *,
    seed: int = 0,
) -> np.ndarray:
    """Empirical frequency of each cell index over fresh reference draws.

    References come i.i.d. from dist_g, the point from dist_f. By symmetry
    the true probability is exactly 1/psi per cell, whatever the
    distributions or the dimension.
    """
    if psi < 1 or d < 1 or trials < 1:
        raise ValueError("psi, d and trials must be positive")
    rng = np.random.default_rng(seed)
    counts = np.zeros(psi, dtype=np.int64)
    batch = max(1, _BATCH_ELEMENTS // (psi * d))
    done = 0
    while done < trials:
        b = min(batch, trials - done)
        refs = sample_points(dist_g, rng, (b, psi, d))
        x = sample_points(dist_f, rng, (b, 1, d))
        cells = nearest_cells(refs, x)
        counts += np.bincount(cells, minlength=psi)
        done += b
    return counts / float(trials)


def cell_band(psi: int, trials: int, sigmas: float = 3.0) -> tuple[float, float]:
    """Binomial confidence band around 1/psi for the given trial count."""
    p = 1.0 / psi
    half = sigmas * np.sqrt(p * (1.0 - p) / trials)
    return p - half, p + half


def collision_test(
    psi: int,
    t: int,
    d: int,
    trials: int,
    *,
    dist_g: str = "uniform",
    dist_f: str = "uniform",
    seed: int = 0,
) -> float:
    """Empirical probability that two i.i.d. points share every cell.

    Each trial draws a fresh pair and t fresh reference sets. Distinctness
    of the pair holds almost surely for the continuous test distributions.

    Note: the observed rate carries a systematic positive excess over
    psi**-t. Conditioned on a reference draw, the same-cell probability is
    the sum of squared cell masses, which is at least 1/psi and strictly
    larger unless all cells carry equal mass; the excess therefore does not
    vanish with more trials.
    """
    if psi < 1 or t < 1 or d < 1 or trials < 1:
        raise ValueError("psi, t, d and trials must be positive")
    rng = np.random.default_rng(seed)
    hits = 0
    batch = max(1, _BATCH_ELEMENTS // (psi * t * d))
    done = 0
    while done < trials:
        b = min(batch, trials - done)
        refs = sample_points(dist_g, rng, (b, t, psi, d))
        xa = sample_points(dist_f, rng, (b, 1, 1, d))
        xb = sample_points(dist_f, rng, (b, 1, 1, d))
        ca = nearest_cells(refs, xa)
        cb = nearest_cells(refs, xb)
        hits += int((ca == cb).all(axis=1).sum())
        done += b
    return hits / float(trials)


def collision_allowance(psi: int, t: int, trials: int, sigmas: float = 3.0) -> tuple[float, float]:
    """(bound, bound + sigmas * binomial stderr) for the collision rate."""
    bound = float(psi) ** (-t)
    upper = bound + sigmas * np.sqrt(bound * (1.0 - bound) / trials)
    return bound, upper
