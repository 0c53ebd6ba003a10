"""Finite-dimensional vectorizations: persistence image and topological vector."""

from __future__ import annotations

import numpy as np

from ..validation import check_diagram, check_positive
from .gaussian import get_weight_function

__all__ = ["persistence_image", "topological_vector", "euclidean_distance"]


def persistence_image(D, resolution: int = 10, sigma: float = 1.0, weight: str = "persistence") -> np.ndarray:
    """Weighted Gaussian density on a grid over [0, 1]^2 in (birth, persistence) coordinates.

    Each pixel holds the density evaluated at its center (no pixel-area
    factor). Returned row-major: row index runs along persistence, column
    index along birth.
    """
    D = check_diagram(D)
    if int(resolution) != resolution or resolution < 1:
        raise ValueError(f"resolution must be a positive integer, got {resolution!r}")
    resolution = int(resolution)
    sigma = check_positive(sigma, "sigma")
    if D.total_mass == 0:
        return np.zeros(resolution * resolution)
    pts = D.points
    w = get_weight_function(weight)(pts) * D.multiplicities
    bp = np.column_stack([pts[:, 0], pts[:, 1] - pts[:, 0]])
    centers = (np.arange(resolution) + 0.5) / resolution
    # separable Gaussian: outer product of 1-D factors per point
    gx = np.exp(-((centers[:, None] - bp[None, :, 0]) ** 2) / (2 * sigma**2))
    gy = np.exp(-((centers[:, None] - bp[None, :, 1]) ** 2) / (2 * sigma**2))
    img = (gy * w) @ gx.T / (2 * np.pi * sigma**2)
    return img.reshape(-1)


def topological_vector(D, length: int = 10) -> np.ndarray:
    """Descending pairwise values min(|p - q|_inf, diag(p), diag(q)), padded/truncated."""
    D = check_diagram(D)
    if int(length) != length or length < 1:
        raise ValueError(f"length must be a positive integer, got {length!r}")
    length = int(length)
    pts = D.expanded()
    out = np.zeros(length)
    n = len(pts)
    if n < 2:
        return out
    i, j = np.triu_indices(n, k=1)
    linf = np.max(np.abs(pts[i] - pts[j]), axis=1)
    diag = (pts[:, 1] - pts[:, 0]) / 2.0
    vals = np.minimum(linf, np.minimum(diag[i], diag[j]))
    if len(vals) > length:
        vals = np.partition(vals, len(vals) - length)[-length:]
    vals = np.sort(vals)[::-1]
    out[: len(vals)] = vals
    return out


def euclidean_distance(v1, v2) -> float:
    v1, v2 = np.asarray(v1, dtype=np.float64), np.asarray(v2, dtype=np.float64)
    if v1.shape != v2.shape:
        raise ValueError(f"length mismatch: {v1.shape} vs {v2.shape}")
    return float(np.linalg.norm(v1 - v2))
