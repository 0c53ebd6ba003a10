"""Exact persistence landscapes as piecewise-linear knot lists."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from ..validation import check_diagram

__all__ = ["LandscapeProfile", "landscape_profile", "landscape_l2_distance", "tent_values"]

_CHUNK = 2048


@dataclass(frozen=True, eq=False)
class LandscapeProfile:
    """Envelopes lambda_1 >= lambda_2 >= ... as knot arrays, zero outside their range.

    ``envelopes[k]`` is a pair ``(t, values)`` of equal-length 1-D arrays with
    ``t`` strictly increasing. An identically zero envelope has empty arrays.
    """

    envelopes: Tuple[Tuple[np.ndarray, np.ndarray], ...]

    @property
    def k_max(self) -> int:
        return len(self.envelopes)

    def __call__(self, t, k: int = 1) -> np.ndarray:
        """Evaluate lambda_k (1-based) at ``t``."""
        knots, values = self.envelopes[k - 1]
        t = np.asarray(t, dtype=np.float64)
        if knots.size == 0:
            return np.zeros_like(t)
        return np.interp(t, knots, values, left=0.0, right=0.0)

    def __eq__(self, other):
        if not isinstance(other, LandscapeProfile) or other.k_max != self.k_max:
            return NotImplemented
        return all(
            np.array_equal(t1, t2) and np.array_equal(v1, v2)
            for (t1, v1), (t2, v2) in zip(self.envelopes, other.envelopes)
        )

    __hash__ = None

    def to_json(self) -> str:
        """Knot lists per envelope, for plotting."""
        payload = {
            "k_max": self.k_max,
            "envelopes": [
                {"k": k + 1, "knots": [[t, v] for t, v in zip(ts.tolist(), vs.tolist())]}
                for k, (ts, vs) in enumerate(self.envelopes)
            ],
        }
        return json.dumps(payload)


def tent_values(points: np.ndarray, t: np.ndarray) -> np.ndarray:
    """Triangle functions of each point evaluated at ``t``, shape (len(t), n)."""
    u, v = points[:, 0], points[:, 1]
    t = t[:, None]
    return np.maximum(0.0, np.minimum(t - u, v - t))


def _critical_abscissae(points: np.ndarray) -> np.ndarray:
    u, v = points[:, 0], points[:, 1]
    mid = (u + v) / 2.0
    crit = [u, v, mid]
    # Rising edges (slope +1) of one tent only cross falling edges (slope -1)
    # of another; parallel edges never cross.
    cross = (u[:, None] + v[None, :]) / 2.0
    ok = (cross > u[:, None]) & (cross < mid[:, None]) & (cross > mid[None, :]) & (cross < v[None, :])
    crit.append(cross[ok])
    return np.unique(np.concatenate(crit))


def _simplify(t: np.ndarray, y: np.ndarray):
    """Drop zero runs outside the support and collinear interior knots."""
    nz = np.flatnonzero(y > 0)
    if nz.size == 0:
        empty = np.empty(0)
        return empty, empty.copy()
    lo, hi = max(nz[0] - 1, 0), min(nz[-1] + 1, len(t) - 1)
    t, y = t[lo : hi + 1], y[lo : hi + 1]
    if len(t) > 2:
        slope = np.diff(y) / np.diff(t)
        keep = np.ones(len(t), dtype=bool)
        keep[1:-1] = ~np.isclose(slope[1:], slope[:-1], rtol=0.0, atol=1e-12)
        t, y = t[keep], y[keep]
    return t.copy(), y.copy()


def landscape_profile(D, k_max: int = 5) -> LandscapeProfile:
    """Exact envelopes lambda_1..lambda_k_max of the triangle functions of ``D``.

    Between consecutive critical abscissae (endpoints, peaks, and pairwise
    edge crossings) the order of the tents is fixed, so each k-th largest value
    is linear there and the knot list is exact.
    """
    D = check_diagram(D)
    if int(k_max) != k_max or k_max < 1:
        raise ValueError(f"k_max must be a positive integer, got {k_max!r}")
    k_max = int(k_max)
    pts = D.expanded()
    if len(pts) == 0:
        empty = np.empty(0)
        return LandscapeProfile(tuple((empty, empty) for _ in range(k_max)))
    t = _critical_abscissae(pts)
    k_eff = min(k_max, len(pts))
    top = np.empty((k_eff, len(t)))
    for start in range(0, len(t), _CHUNK):
        vals = tent_values(pts, t[start : start + _CHUNK])
        if vals.shape[1] > k_eff:
            vals = np.partition(vals, vals.shape[1] - k_eff, axis=1)[:, -k_eff:]
        top[:, start : start + _CHUNK] = -np.sort(-vals, axis=1).T
    envelopes = []
    for k in range(k_max):
        if k < k_eff:
            envelopes.append(_simplify(t, top[k]))
        else:
            empty = np.empty(0)
            envelopes.append((empty, empty))
    return LandscapeProfile(tuple(envelopes))


def _squared_l2_piecewise_linear(t1, y1, t2, y2) -> float:
    grid = np.union1d(t1, t2)
    if grid.size < 2:
        return 0.0
    f = (np.interp(grid, t1, y1, left=0.0, right=0.0) if t1.size else 0.0) - (
        np.interp(grid, t2, y2, left=0.0, right=0.0) if t2.size else 0.0
    )
    f = np.broadcast_to(f, grid.shape)
    h = np.diff(grid)
    a, b = f[:-1], f[1:]
    return float(np.sum(h * (a * a + a * b + b * b)) / 3.0)


def landscape_l2_distance(P1: LandscapeProfile, P2: LandscapeProfile) -> float:
    """L2 distance of the stacked landscape images, integrated exactly."""
    if P1.k_max != P2.k_max:
        raise ValueError(f"profiles have different k_max ({P1.k_max} vs {P2.k_max})")
    total = 0.0
    for (t1, y1), (t2, y2) in zip(P1.envelopes, P2.envelopes):
        total += _squared_l2_piecewise_linear(t1, y1, t2, y2)
    return float(np.sqrt(max(total, 0.0)))
