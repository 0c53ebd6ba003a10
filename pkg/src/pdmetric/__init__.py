"""Metric geometry of persistence diagrams: exact distances, feature maps, distortion experiments."""

from .diagram import (
    DiagramClassParams,
    DiagramFormatError,
    InvalidDiagramError,
    PersistenceDiagram,
    diagonal_distance,
    diagonal_projection,
    read_diagram,
    sample_uniform_diagram,
    write_diagram,
)
from .matching import (
    PartialMatching,
    bottleneck_distance,
    brute_force_distance,
    diagram_distance,
    matching_cost,
    optimal_matching,
)
from .metrics import DiagramDistance, SlicedWasserstein
from .sliced import sliced_wasserstein_distance
from .features import (
    Landscape,
    PersistenceImage,
    PersistenceScaleSpace,
    PersistenceWeightedGaussian,
    TopologicalVector,
)

__version__ = "0.1.0"
