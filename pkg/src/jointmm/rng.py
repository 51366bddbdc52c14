"""Seeded Gaussian sampling via the Box-Muller transform.

Instances and initial points are generated from a named PRNG (PCG64) pushed
through Box-Muller, so any implementation with the same uniform stream
reproduces the same data. Bit-level identity across languages is not a goal;
reproducibility within this package is.
"""

from __future__ import annotations

import numpy as np


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def standard_normal(rng: np.random.Generator, size: int) -> np.ndarray:
    """size independent N(0,1) draws by Box-Muller on uniform pairs."""
    pairs = (size + 1) // 2
    u1 = rng.random(pairs)
    u2 = rng.random(pairs)
    # guard against log(0); rng.random() is in [0, 1)
    u1 = np.maximum(u1, np.finfo(float).tiny)
    radius = np.sqrt(-2.0 * np.log(u1))
    angle = 2.0 * np.pi * u2
    z = np.concatenate([radius * np.cos(angle), radius * np.sin(angle)])
    return z[:size]


def gaussian_matrix(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    """rows x cols matrix with independent N(0,1) entries, row by row."""
    return standard_normal(rng, rows * cols).reshape(rows, cols)
