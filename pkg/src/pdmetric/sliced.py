"""Sliced Wasserstein distance between persistence diagrams."""

from __future__ import annotations

import numpy as np

from .validation import check_diagram

__all__ = ["DEFAULT_DIRECTIONS", "sliced_wasserstein_distance", "projection_directions"]

DEFAULT_DIRECTIONS = 50


def projection_directions(n_directions: int) -> np.ndarray:
    """Unit vectors at angles evenly spaced over [-pi/2, pi/2), shape (2, n)."""
    if int(n_directions) != n_directions or n_directions < 1:
        raise ValueError(f"n_directions must be a positive integer, got {n_directions!r}")
    thetas = -np.pi / 2 + np.pi * np.arange(int(n_directions)) / n_directions
    return np.vstack([np.cos(thetas), np.sin(thetas)])


def _diag_proj(x: np.ndarray) -> np.ndarray:
    mid = x.sum(axis=1, keepdims=True) / 2.0
    return np.hstack([mid, mid])


def sliced_wasserstein_distance(D1, D2, n_directions: int = DEFAULT_DIRECTIONS) -> float:
    """Average over directions of the 1-D transport cost between projections.

    Each diagram is augmented with the diagonal projections of the other so
    both sides carry the same number of atoms; in 1-D the optimal transport
    between equal-size point sets pairs them in sorted order.
    """
    D1, D2 = check_diagram(D1), check_diagram(D2)
    dirs = projection_directions(n_directions)
    a, b = D1.expanded(), D2.expanded()
    if len(a) + len(b) == 0:
        return 0.0
    left = np.vstack([a, _diag_proj(b)])
    right = np.vstack([b, _diag_proj(a)])
    pa = np.sort(left @ dirs, axis=0)
    pb = np.sort(right @ dirs, axis=0)
    return float(np.abs(pa - pb).sum(axis=0).mean())
