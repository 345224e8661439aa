"""Small helpers shared across test modules."""

import numpy as np


def rel_l2(got, want):
    """Relative l2 distance between two arrays (flattened)."""
    got = np.asarray(got, dtype=float).ravel()
    want = np.asarray(want, dtype=float).ravel()
    return float(np.linalg.norm(got - want) / np.linalg.norm(want))


def inner(spec, a, b):
    """Discrete L2 inner product with the cell-volume weight."""
    return float(spec.h**spec.d * np.sum(np.asarray(a) * np.asarray(b)))
