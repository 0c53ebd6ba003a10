from .estimators import (
    FeatureMap,
    Landscape,
    PersistenceImage,
    PersistenceScaleSpace,
    PersistenceWeightedGaussian,
    TopologicalVector,
)
from .gaussian import (
    WEIGHT_FUNCTIONS,
    GaussianSumEmbedding,
    gaussian_sum_l2_distance,
    pss_embedding,
    pwg_embedding,
)
from .landscape import LandscapeProfile, landscape_l2_distance, landscape_profile
from .vectors import euclidean_distance, persistence_image, topological_vector

__all__ = [
    "FeatureMap",
    "Landscape",
    "PersistenceImage",
    "PersistenceScaleSpace",
    "PersistenceWeightedGaussian",
    "TopologicalVector",
    "WEIGHT_FUNCTIONS",
    "GaussianSumEmbedding",
    "gaussian_sum_l2_distance",
    "pss_embedding",
    "pwg_embedding",
    "LandscapeProfile",
    "landscape_l2_distance",
    "landscape_profile",
    "euclidean_distance",
    "persistence_image",
    "topological_vector",
]
