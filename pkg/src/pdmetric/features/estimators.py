"""scikit-learn transformers wrapping the feature maps.

Every map is stateless: ``fit`` only validates hyper-parameters, ``transform``
maps a sequence of diagrams to embeddings. Finite-dimensional maps return a
2-D array; function-valued maps return a list of embedding objects. Each
estimator also knows the Hilbert distance between its own outputs.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from ..validation import check_diagram, check_diagrams, check_positive
from .gaussian import gaussian_sum_l2_distance, get_weight_function, pss_embedding, pwg_embedding
from .landscape import landscape_l2_distance, landscape_profile
from .vectors import euclidean_distance, persistence_image, topological_vector

__all__ = [
    "FeatureMap",
    "Landscape",
    "PersistenceWeightedGaussian",
    "PersistenceScaleSpace",
    "PersistenceImage",
    "TopologicalVector",
]


class FeatureMap(TransformerMixin, BaseEstimator):
    """Base class; subclasses implement ``embed`` and ``distance``."""

    def _check_params(self):
        pass

    def fit(self, X, y=None):
        self._check_params()
        check_diagrams(X)
        return self

    def embed(self, diagram):
        raise NotImplementedError

    def distance(self, a, b) -> float:
        raise NotImplementedError

    def transform(self, X):
        self._check_params()
        return [self.embed(d) for d in check_diagrams(X)]

    def hilbert_distance(self, D1, D2) -> float:
        """Distance between the images of two diagrams."""
        self._check_params()
        return self.distance(self.embed(check_diagram(D1)), self.embed(check_diagram(D2)))

    def pairwise_distances(self, X, Y=None) -> np.ndarray:
        EX = self.transform(X)
        EY = EX if Y is None else self.transform(Y)
        out = np.zeros((len(EX), len(EY)))
        for i, a in enumerate(EX):
            for j, b in enumerate(EY):
                if Y is None and j < i:
                    out[i, j] = out[j, i]
                elif Y is None and i == j:
                    continue
                else:
                    out[i, j] = self.distance(a, b)
        return out


class _VectorMap(FeatureMap):
    def transform(self, X):
        self._check_params()
        rows = [self.embed(d) for d in check_diagrams(X)]
        if not rows:
            return np.zeros((0, self.n_features_out))
        return np.vstack(rows)

    def distance(self, a, b) -> float:
        return euclidean_distance(a, b)


def _check_int(value, name):
    if isinstance(value, bool) or int(value) != value or value < 1:
        raise ValueError(f"{name} must be a positive integer, got {value!r}")


class Landscape(FeatureMap):
    """Stacked persistence landscapes lambda_1..lambda_k_max.

    Parameters
    ----------
    k_max : int, default=5
        Number of envelopes kept.
    """

    def __init__(self, k_max=5):
        self.k_max = k_max

    def _check_params(self):
        _check_int(self.k_max, "k_max")

    def embed(self, diagram):
        return landscape_profile(diagram, self.k_max)

    def distance(self, a, b):
        return landscape_l2_distance(a, b)


class PersistenceWeightedGaussian(FeatureMap):
    """Weighted sum of Gaussians centred on the diagram points.

    Parameters
    ----------
    sigma : float, default=1.0
        Gaussian bandwidth.
    weight : str, default="persistence_squared"
        Key into :data:`pdmetric.features.gaussian.WEIGHT_FUNCTIONS`.
    """

    def __init__(self, sigma=1.0, weight="persistence_squared"):
        self.sigma = sigma
        self.weight = weight

    def _check_params(self):
        check_positive(self.sigma, "sigma")
        get_weight_function(self.weight)

    def embed(self, diagram):
        return pwg_embedding(diagram, self.weight, self.sigma)

    def distance(self, a, b):
        return gaussian_sum_l2_distance(a, b)


class PersistenceScaleSpace(FeatureMap):
    """Gaussians at the points minus Gaussians at their reflections across the diagonal."""

    def __init__(self, sigma=1.0):
        self.sigma = sigma

    def _check_params(self):
        check_positive(self.sigma, "sigma")

    def embed(self, diagram):
        return pss_embedding(diagram, self.sigma)

    def distance(self, a, b):
        return gaussian_sum_l2_distance(a, b)


class PersistenceImage(_VectorMap):
    """Pixelized weighted Gaussian density in birth-persistence coordinates.

    Parameters
    ----------
    resolution : int, default=10
        Pixels per side over [0, 1]^2.
    sigma : float, default=1.0
        Gaussian bandwidth.
    weight : str, default="persistence"
        Weight function key.
    """

    def __init__(self, resolution=10, sigma=1.0, weight="persistence"):
        self.resolution = resolution
        self.sigma = sigma
        self.weight = weight

    def _check_params(self):
        _check_int(self.resolution, "resolution")
        check_positive(self.sigma, "sigma")
        get_weight_function(self.weight)

    @property
    def n_features_out(self):
        return int(self.resolution) ** 2

    def embed(self, diagram):
        return persistence_image(diagram, self.resolution, self.sigma, self.weight)


class TopologicalVector(_VectorMap):
    """Sorted pairwise point/diagonal distances, truncated to ``length``."""

    def __init__(self, length=10):
        self.length = length

    def _check_params(self):
        _check_int(self.length, "length")

    @property
    def n_features_out(self):
        return int(self.length)

    def embed(self, diagram):
        return topological_vector(diagram, self.length)
