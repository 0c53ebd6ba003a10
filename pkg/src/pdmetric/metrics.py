"""Distance-matrix estimators, usable as precomputed kernels in sklearn pipelines."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .matching import diagram_distance
from .sliced import sliced_wasserstein_distance
from .validation import check_diagrams, check_order

__all__ = ["DiagramDistance", "SlicedWasserstein"]


class _PairwiseDistance(TransformerMixin, BaseEstimator):
    def _metric(self, a, b) -> float:
        raise NotImplementedError

    def _check_params(self):
        pass

    def fit(self, X, y=None):
        """Store reference diagrams; ``transform`` returns distances to them."""
        self._check_params()
        self.diagrams_ = check_diagrams(X)
        return self

    def transform(self, X):
        check_is_fitted(self, "diagrams_")
        X = check_diagrams(X)
        out = np.empty((len(X), len(self.diagrams_)))
        for i, a in enumerate(X):
            for j, b in enumerate(self.diagrams_):
                out[i, j] = self._metric(a, b)
        return out


class DiagramDistance(_PairwiseDistance):
    """Exact p-diagram distance (``p="inf"`` for the bottleneck distance)."""

    def __init__(self, p=1):
        self.p = p

    def _check_params(self):
        check_order(self.p)

    def _metric(self, a, b):
        return diagram_distance(a, b, check_order(self.p))


class SlicedWasserstein(_PairwiseDistance):
    """Sliced Wasserstein distance, optionally square-rooted."""

    def __init__(self, n_directions=50, sqrt=False):
        self.n_directions = n_directions
        self.sqrt = sqrt

    def _metric(self, a, b):
        value = sliced_wasserstein_distance(a, b, self.n_directions)
        return float(np.sqrt(value)) if self.sqrt else value
