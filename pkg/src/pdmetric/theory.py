"""Numerical instances of the non-embeddability constructions.

* S-set truncations: diagrams built from the points ``(i, i + 1/i)``; their
  pairwise d_1 is a harmonic-type sum that diverges on infinite supports.
* Cauchy tails of the weighted-Gaussian and landscape images of nested
  truncations, against their summable upper bounds.
* The single-point packing family showing unbounded doubling behaviour of
  bounded-cardinality diagram spaces.
* Empirical distortion bounds over a finite pool of diagrams.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, Iterable, Optional, Sequence, Tuple

import numpy as np

from .diagram import PersistenceDiagram, diagonal_distance
from .features.gaussian import gaussian_sum_sq_norm, merge_atoms, pwg_embedding
from .features.landscape import landscape_l2_distance, landscape_profile
from .matching import BRUTE_FORCE_LIMIT, bottleneck_distance, brute_force_distance, diagram_distance
from .validation import check_order, check_positive

__all__ = [
    "STruncation",
    "s_point",
    "s_diagram",
    "s_truncation",
    "s_distance_lower_bound",
    "pwg_cauchy_tail",
    "pwg_cauchy_tail_grid",
    "landscape_cauchy_tail",
    "landscape_cauchy_tail_grid",
    "PackingFamily",
    "assouad_packing",
    "verify_packing",
    "DistortionEstimate",
    "empirical_distortion",
    "MAX_PACKING_SIZE",
]

MAX_PACKING_SIZE = 10**7


def s_point(i: int) -> Tuple[float, float]:
    return (float(i), i + 1.0 / i)


@dataclass(frozen=True)
class STruncation:
    support: FrozenSet[int]
    diagram: PersistenceDiagram = field(compare=False)


def s_diagram(support: Iterable[int]) -> STruncation:
    """Diagram with one point ``(i, i + 1/i)`` per index of ``support``."""
    support = frozenset(int(i) for i in support)
    if any(i < 1 for i in support):
        raise ValueError("support indices must be positive integers")
    pts = [s_point(i) for i in sorted(support)]
    return STruncation(support, PersistenceDiagram(pts))


def s_truncation(k: int) -> STruncation:
    """Prefix truncation with support {1, ..., k}."""
    if int(k) != k or k < 1:
        raise ValueError(f"k must be a positive integer, got {k!r}")
    return s_diagram(range(1, int(k) + 1))


def s_distance_lower_bound(support_a: Iterable[int], support_b: Iterable[int], verify: bool = False) -> float:
    """Cost of sending every point of the symmetric difference to the diagonal.

    Equals sum 1/(2i) over the symmetric difference. With ``verify=True`` the
    value is compared against the exact d_1 of the two truncation diagrams
    (enumeration when small enough, the assignment solver otherwise) and an
    AssertionError is raised on disagreement beyond 1e-9.
    """
    a, b = frozenset(support_a), frozenset(support_b)
    value = math.fsum(diagonal_distance(s_point(i)) for i in sorted(a ^ b))
    if verify:
        Da, Db = s_diagram(a).diagram, s_diagram(b).diagram
        if len(a) + len(b) <= BRUTE_FORCE_LIMIT:
            exact = brute_force_distance(Da, Db, 1)
        else:
            exact = diagram_distance(Da, Db, 1)
        if abs(exact - value) > 1e-9:
            raise AssertionError(f"diagonal matching cost {value} differs from d_1 = {exact}")
    return value


def _check_tail_range(p, q):
    if int(p) != p or int(q) != q or p < 1:
        raise ValueError("p and q must be positive integers")
    if p >= q:
        raise ValueError(f"empty tail: need p < q, got p={p}, q={q}")
    return int(p), int(q)


def pwg_cauchy_tail(p: int, q: int, sigma: float = 1.0) -> Tuple[float, float]:
    """Squared L2 distance between weighted-Gaussian images of two nested truncations.

    Returns ``(tail, bound)`` where ``bound = pi sigma^2 (sum_{k=p+1}^q 1/k^2)^2``.
    The weight is the squared persistence, so point ``k`` carries ``1/k^2``.
    Atoms shared by both truncations cancel exactly before the closed-form sum.
    """
    p, q = _check_tail_range(p, q)
    sigma = check_positive(sigma, "sigma")
    Eq = pwg_embedding(s_truncation(q).diagram, "persistence_squared", sigma)
    Ep = pwg_embedding(s_truncation(p).diagram, "persistence_squared", sigma)
    centers, weights = merge_atoms(np.vstack([Eq.centers, Ep.centers]), np.concatenate([Eq.weights, -Ep.weights]))
    tail = gaussian_sum_sq_norm(centers, weights, sigma)
    ks = np.arange(p + 1, q + 1, dtype=np.float64)
    bound = np.pi * sigma**2 * math.fsum(1.0 / ks**2) ** 2
    return float(tail), float(bound)


def pwg_cauchy_tail_grid(q_max: int, sigma: float = 1.0) -> Tuple[np.ndarray, np.ndarray]:
    """All tails and bounds for 0 <= p < q <= q_max, as (q_max+1)^2 arrays (NaN elsewhere).

    Same closed form as :func:`pwg_cauchy_tail`, organised so every entry is
    a sum of nonnegative terms (no cancellation).
    """
    if int(q_max) != q_max or q_max < 2:
        raise ValueError("q_max must be an integer >= 2")
    q_max = int(q_max)
    sigma = check_positive(sigma, "sigma")
    pts = np.array([s_point(k) for k in range(1, q_max + 1)])
    w = 1.0 / np.arange(1, q_max + 1, dtype=np.float64) ** 2
    sq = np.sum((pts[:, None, :] - pts[None, :, :]) ** 2, axis=2)
    W = np.pi * sigma**2 * np.outer(w, w) * np.exp(-sq / (4 * sigma**2))
    n = q_max
    # R[p, j] = sum_{k=p+1}^{j-1} W[k, j] with 1-based k, j; p in 0..n
    R = np.zeros((n + 1, n + 1))
    for j in range(1, n + 1):
        col = W[: j - 1, j - 1]  # k = 1..j-1
        suffix = np.cumsum(col[::-1])[::-1]  # suffix[k-1] = sum_{k'=k}^{j-1}
        R[: j - 1, j] = suffix  # p = k - 1
    diag = np.concatenate([[0.0], np.diag(W)])
    inc = 2.0 * R + diag[None, :]
    inc[np.tril_indices(n + 1)] = 0.0
    tails = np.cumsum(inc, axis=1)
    wrow = np.broadcast_to(np.concatenate([[0.0], w]), (n + 1, n + 1)).copy()
    wrow[np.tril_indices(n + 1)] = 0.0
    bounds = np.pi * sigma**2 * np.cumsum(wrow, axis=1) ** 2
    mask = np.triu(np.ones((n + 1, n + 1), dtype=bool), k=1)
    tails[~mask] = np.nan
    bounds[~mask] = np.nan
    return tails, bounds


def landscape_cauchy_tail(p: int, q: int) -> Tuple[float, float]:
    """Squared L2 distance between landscape images of two nested truncations.

    Returns ``(tail, bound)`` with ``bound = sum_{k=p+1}^q 1/(4 k^2)``, the
    total area of the added triangles.
    """
    p, q = _check_tail_range(p, q)
    d = landscape_l2_distance(landscape_profile(s_truncation(q).diagram, 1), landscape_profile(s_truncation(p).diagram, 1))
    ks = np.arange(p + 1, q + 1, dtype=np.float64)
    return d * d, math.fsum(1.0 / (4.0 * ks**2))


def landscape_cauchy_tail_grid(q_max: int) -> Tuple[np.ndarray, np.ndarray]:
    """Tails and bounds for 1 <= p < q <= q_max, exact integration per pair."""
    q_max = int(q_max)
    profiles = [None] + [landscape_profile(s_truncation(k).diagram, 1) for k in range(1, q_max + 1)]
    tails = np.full((q_max + 1, q_max + 1), np.nan)
    bounds = np.full((q_max + 1, q_max + 1), np.nan)
    area = 1.0 / (4.0 * np.arange(1, q_max + 1, dtype=np.float64) ** 2)
    for p in range(1, q_max):
        bounds[p, p + 1 :] = np.cumsum(area[p:])
        for q in range(p + 1, q_max + 1):
            tails[p, q] = landscape_l2_distance(profiles[q], profiles[p]) ** 2
    return tails, bounds


@dataclass(frozen=True)
class PackingFamily:
    C: float
    alpha: float
    L: float
    M: int
    r: float
    beta: float
    diagrams: Tuple[PersistenceDiagram, ...] = field(repr=False)


def assouad_packing(C: float, alpha: float, L: float) -> PackingFamily:
    """M single-point diagrams spaced r = 2L/M apart along the line y = x + r.

    ``M = 1 + floor(C * beta**-alpha)`` with ``beta = 1/2``, so M strictly
    exceeds the covering budget ``C beta**-alpha``.
    """
    C = check_positive(C, "C")
    alpha = check_positive(alpha, "alpha")
    L = check_positive(L, "L")
    beta = 0.5
    budget = C * beta ** (-alpha)
    if not math.isfinite(budget) or budget >= MAX_PACKING_SIZE:
        raise ValueError(f"C * beta^-alpha = {budget:.3g} gives a family larger than {MAX_PACKING_SIZE}")
    M = 1 + math.floor(budget)
    r = 2.0 * L / M
    diagrams = tuple(PersistenceDiagram([(-L + j * r, -L + (j + 1) * r)]) for j in range(M))
    return PackingFamily(C, alpha, L, M, r, beta, diagrams)


def verify_packing(family: PackingFamily, p=1, tol: float = 1e-12) -> Dict:
    """Check member distances with the exact solvers; returns a JSON-ready report.

    ``passed`` requires every member at distance r/2 (< r) from the empty
    diagram and every distinct pair at 2^(1/p) r/2. The report also states
    whether pairs are at least ``2 beta r`` apart, which is what keeps two
    members out of a common ball of radius ``beta r``; that holds for p = 1
    only, and ``separating_beta`` gives the largest beta that works for p.
    """
    p = check_order(p)
    dist = bottleneck_distance if p == math.inf else (lambda a, b: diagram_distance(a, b, p))
    empty = PersistenceDiagram.empty()
    r = family.r
    root = 1.0 if p == math.inf else 2.0 ** (1.0 / p)
    expected_pair = root * r / 2.0
    to_empty = [dist(D, empty) for D in family.diagrams]
    pairwise = [
        dist(family.diagrams[i], family.diagrams[j])
        for i in range(family.M)
        for j in range(i + 1, family.M)
    ]
    inside_ok = all(abs(v - r / 2.0) <= tol and v < r for v in to_empty)
    pair_ok = all(abs(v - expected_pair) <= tol for v in pairwise)
    in_box = all(np.all(np.abs(D.points) <= family.L + tol) for D in family.diagrams)
    min_pair = min(pairwise) if pairwise else None
    separated = min_pair is None or min_pair >= 2 * family.beta * r - tol
    return {
        "C": family.C,
        "alpha": family.alpha,
        "L": family.L,
        "M": family.M,
        "budget": family.C * family.beta ** (-family.alpha),
        "r": r,
        "beta": family.beta,
        "p": "inf" if p == math.inf else p,
        "expected_to_empty": r / 2.0,
        "to_empty_min": min(to_empty),
        "to_empty_max": max(to_empty),
        "expected_pairwise": expected_pair,
        "pairwise_min": min_pair,
        "pairwise_max": max(pairwise) if pairwise else None,
        "members_in_box": bool(in_box),
        "to_empty_ok": bool(inside_ok),
        "pairwise_ok": bool(pair_ok),
        "separated_at_beta": bool(separated),
        "separating_beta": root / 4.0,
        "passed": bool(inside_ok and pair_ok and in_box and family.M > family.C * family.beta ** (-family.alpha)),
    }


@dataclass(frozen=True)
class DistortionEstimate:
    """Extremes of the ratio d_H / d_1 over a pool of diagrams.

    ``A_hat``/``B_hat`` are min/max of Hilbert-over-diagram ratios;
    ``min_d1_over_dh``/``max_d1_over_dh`` are the same extremes in the diagram-over-Hilbert
    orientation (``1/B_hat`` and ``1/A_hat``).
    """

    method: str
    N: int
    L: float
    A_hat: float
    B_hat: float
    quantiles: Dict[str, float]
    pair_count: int
    skipped_pairs: int
    injectivity_violations: Tuple[Tuple[int, int], ...]

    @property
    def min_d1_over_dh(self) -> float:
        return 1.0 / self.B_hat if self.B_hat > 0 else math.inf

    @property
    def max_d1_over_dh(self) -> float:
        return 1.0 / self.A_hat if self.A_hat > 0 else math.inf

    def as_dict(self) -> Dict:
        return {
            "method": self.method,
            "N": self.N,
            "L": self.L,
            "hilbert_over_d1": {"A_hat": self.A_hat, "B_hat": self.B_hat, **self.quantiles},
            "d1_over_hilbert": {"A_hat": self.min_d1_over_dh, "B_hat": self.max_d1_over_dh},
            "pair_count": self.pair_count,
            "skipped_pairs": self.skipped_pairs,
            "injectivity_violations": [list(v) for v in self.injectivity_violations],
        }


def empirical_distortion(
    method_id: str,
    diagrams: Sequence[PersistenceDiagram],
    distance_fn: Callable[[PersistenceDiagram, PersistenceDiagram], float],
    diagram_metric: Optional[Callable] = None,
) -> DistortionEstimate:
    """Ratios ``distance_fn(D_i, D_j) / d_1(D_i, D_j)`` over all pairs i < j.

    Pairs with d_1 = 0 are skipped; if the Hilbert distance is nonzero there
    the pair is listed as an injectivity violation.
    """
    if len(diagrams) < 2:
        raise ValueError("need at least two diagrams")
    metric = diagram_metric or (lambda a, b: diagram_distance(a, b, 1))
    ratios, skipped, violations = [], 0, []
    for i in range(len(diagrams)):
        for j in range(i + 1, len(diagrams)):
            d1 = metric(diagrams[i], diagrams[j])
            dh = distance_fn(diagrams[i], diagrams[j])
            if d1 == 0:
                skipped += 1
                if dh > 0:
                    violations.append((i, j))
                continue
            ratios.append(dh / d1)
    if not ratios:
        raise ValueError("no pair with positive d_1")
    arr = np.asarray(ratios)
    q1, med, q3 = np.quantile(arr, [0.25, 0.5, 0.75])
    N = max(d.total_mass for d in diagrams) + 1
    L = max((float(np.abs(d.points).max()) for d in diagrams if d.total_mass), default=0.0)
    return DistortionEstimate(
        method=method_id,
        N=N,
        L=L,
        A_hat=float(arr.min()),
        B_hat=float(arr.max()),
        quantiles={"q1": float(q1), "median": float(med), "q3": float(q3)},
        pair_count=len(ratios),
        skipped_pairs=skipped,
        injectivity_violations=tuple(violations),
    )
