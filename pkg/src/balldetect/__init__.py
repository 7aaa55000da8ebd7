"""Change-point detection for dependent, possibly non-Euclidean sequences
using rank-based ball statistics, hierarchical search and moving-block
bootstrap significance testing."""

from .exceptions import InvalidInputError, DistanceMatrixError, SegmentTooShortError
from .metric import (
    DistanceMatrix,
    circular_distance,
    euclidean_distance,
    pairwise_distance_matrix,
    validate_distance_matrix,
)
from .ballstat import Segment, SegmentBest, segment_scan, detection_stat, detection_stat_naive
from .bootstrap import BootstrapConfig, significance
from .hierarchy import DetectionConfig, ChangePointReport, detect

__version__ = "0.1.0"

__all__ = [
    "InvalidInputError",
    "DistanceMatrixError",
    "SegmentTooShortError",
    "DistanceMatrix",
    "circular_distance",
    "euclidean_distance",
    "pairwise_distance_matrix",
    "validate_distance_matrix",
    "Segment",
    "SegmentBest",
    "segment_scan",
    "detection_stat",
    "detection_stat_naive",
    "BootstrapConfig",
    "significance",
    "DetectionConfig",
    "ChangePointReport",
    "detect",
]
