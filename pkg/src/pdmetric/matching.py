"""Exact diagram distances through optimal partial matchings.

A partial matching pairs some points of one diagram with points of the other
and sends every remaining point to the diagonal. Indices always refer to the
multiplicity-expanded point lists (``PersistenceDiagram.expanded()``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .validation import check_diagram, check_order

__all__ = [
    "MatchingError",
    "BruteForceTooLarge",
    "PartialMatching",
    "matching_cost",
    "optimal_matching",
    "diagram_distance",
    "bottleneck_distance",
    "brute_force_distance",
    "BRUTE_FORCE_LIMIT",
]

BRUTE_FORCE_LIMIT = 10


class MatchingError(ValueError):
    """A matching does not cover each point exactly once."""


class BruteForceTooLarge(ValueError):
    """The enumeration oracle refuses instances above its size limit."""


@dataclass(frozen=True)
class PartialMatching:
    pairs: Tuple[Tuple[int, int], ...]
    unmatched_1: Tuple[int, ...]
    unmatched_2: Tuple[int, ...]

    def validate(self, n1: int, n2: int) -> None:
        left = [i for i, _ in self.pairs] + list(self.unmatched_1)
        right = [j for _, j in self.pairs] + list(self.unmatched_2)
        if sorted(left) != list(range(n1)):
            raise MatchingError(f"points of the first diagram are not covered exactly once: {sorted(left)}")
        if sorted(right) != list(range(n2)):
            raise MatchingError(f"points of the second diagram are not covered exactly once: {sorted(right)}")


def _cost_terms(a: np.ndarray, b: np.ndarray, matching: PartialMatching) -> np.ndarray:
    terms = [max(abs(a[i, 0] - b[j, 0]), abs(a[i, 1] - b[j, 1])) for i, j in matching.pairs]
    terms += [(a[i, 1] - a[i, 0]) / 2.0 for i in matching.unmatched_1]
    terms += [(b[j, 1] - b[j, 0]) / 2.0 for j in matching.unmatched_2]
    return np.asarray(terms, dtype=np.float64)


def matching_cost(D1, D2, matching: PartialMatching, p) -> float:
    """Un-rooted p-cost of a matching; for ``p = inf`` the largest single term."""
    D1, D2 = check_diagram(D1), check_diagram(D2)
    p = check_order(p)
    a, b = D1.expanded(), D2.expanded()
    matching.validate(len(a), len(b))
    terms = _cost_terms(a, b, matching)
    if terms.size == 0:
        return 0.0
    if p == math.inf:
        return float(terms.max())
    return float(np.sum(terms ** p))


def _pairwise_linf(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.max(np.abs(a[:, None, :] - b[None, :, :]), axis=2)


def _augmented_costs(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Square (n+m) cost matrix of l-inf costs; forbidden cells hold inf.

    Rows: points of ``a`` then m diagonal slots. Columns: points of ``b`` then
    n diagonal slots. Slot ``m + i`` is the private diagonal copy of ``a[i]``.
    """
    n, m = len(a), len(b)
    C = np.full((n + m, n + m), np.inf)
    if n and m:
        C[:n, :m] = _pairwise_linf(a, b)
    if n:
        C[np.arange(n), m + np.arange(n)] = (a[:, 1] - a[:, 0]) / 2.0
    if m:
        C[n + np.arange(m), np.arange(m)] = (b[:, 1] - b[:, 0]) / 2.0
    C[n:, m:] = 0.0
    return C


def _decode(rows: np.ndarray, cols: np.ndarray, n: int, m: int) -> PartialMatching:
    pairs, un1, un2 = [], [], []
    for r, c in zip(rows.tolist(), cols.tolist()):
        if r < n and c < m:
            pairs.append((r, c))
        elif r < n:
            un1.append(r)
        elif c < m:
            un2.append(c)
    return PartialMatching(tuple(pairs), tuple(sorted(un1)), tuple(sorted(un2)))


def optimal_matching(D1, D2, p=1) -> Tuple[float, PartialMatching]:
    """Exact ``d_p`` together with a minimizing matching (finite ``p``)."""
    D1, D2 = check_diagram(D1), check_diagram(D2)
    p = check_order(p, allow_inf=False)
    a, b = D1.expanded(), D2.expanded()
    n, m = len(a), len(b)
    if n + m == 0:
        return 0.0, PartialMatching((), (), ())
    C = _augmented_costs(a, b) ** p
    rows, cols = linear_sum_assignment(C)
    total = math.fsum(sorted(C[rows, cols].tolist()))
    return total ** (1.0 / p), _decode(rows, cols, n, m)


def diagram_distance(D1, D2, p=1) -> float:
    """The p-diagram (Wasserstein) distance under the l-inf ground metric.

    ``p = inf`` is delegated to :func:`bottleneck_distance`.
    """
    p = check_order(p)
    if p == math.inf:
        return bottleneck_distance(D1, D2)
    D1, D2 = check_diagram(D1), check_diagram(D2)
    # solve in a fixed argument order so that d(a, b) == d(b, a) bit for bit
    if _order_key(D2) < _order_key(D1):
        D1, D2 = D2, D1
    return optimal_matching(D1, D2, p)[0]


def _order_key(D):
    return (D.total_mass, D.points.tobytes(), D.multiplicities.tobytes())


def _has_perfect_matching(allowed: np.ndarray) -> bool:
    graph = csr_matrix(allowed.astype(np.int8))
    match = maximum_bipartite_matching(graph, perm_type="column")
    return bool(np.all(match >= 0))


def bottleneck_distance(D1, D2) -> float:
    """Bottleneck distance by binary search over candidate costs.

    Every optimal value is one of the finite entries of the augmented cost
    matrix, so searching that sorted set with a perfect-matching test on the
    threshold graph is exact.
    """
    D1, D2 = check_diagram(D1), check_diagram(D2)
    a, b = D1.expanded(), D2.expanded()
    if len(a) + len(b) == 0:
        return 0.0
    C = _augmented_costs(a, b)
    candidates = np.unique(C[np.isfinite(C)])
    lo, hi = 0, len(candidates) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if _has_perfect_matching(C <= candidates[mid]):
            hi = mid
        else:
            lo = mid + 1
    return float(candidates[lo])


def _enumerate_costs(a: np.ndarray, b: np.ndarray):
    """Yield the list of single-term costs of every partial matching."""
    n, m = len(a), len(b)
    diag_a = ((a[:, 1] - a[:, 0]) / 2.0).tolist()
    diag_b = ((b[:, 1] - b[:, 0]) / 2.0).tolist()
    cross = _pairwise_linf(a, b).tolist() if n and m else []
    used = [False] * m

    def rec(i, terms):
        if i == n:
            yield terms + [diag_b[j] for j in range(m) if not used[j]]
            return
        yield from rec(i + 1, terms + [diag_a[i]])
        for j in range(m):
            if not used[j]:
                used[j] = True
                yield from rec(i + 1, terms + [cross[i][j]])
                used[j] = False

    yield from rec(0, [])


def brute_force_distance(D1, D2, p=1) -> float:
    """Exact minimum over all partial matchings by enumeration (test oracle).

    Refuses instances with more than ``BRUTE_FORCE_LIMIT`` points in total.
    """
    D1, D2 = check_diagram(D1), check_diagram(D2)
    p = check_order(p)
    a, b = D1.expanded(), D2.expanded()
    if len(a) + len(b) > BRUTE_FORCE_LIMIT:
        raise BruteForceTooLarge(
            f"{len(a) + len(b)} points exceeds the enumeration limit of {BRUTE_FORCE_LIMIT}"
        )
    best = math.inf
    for terms in _enumerate_costs(a, b):
        if p == math.inf:
            value = max(terms, default=0.0)
        else:
            value = sum(t ** p for t in terms)
        best = min(best, value)
    if p == math.inf:
        return best
    return best ** (1.0 / p)
