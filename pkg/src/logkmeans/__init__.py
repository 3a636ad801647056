"""Log-time one-dimensional k-means on sorted data."""

from .core import (
    IndexRange,
    InvalidInputError,
    PrefixSums,
    SortedInput,
    build_prefix_sums,
    range_sum,
    sort_and_align,
)
from .kcluster import (
    DegenerateWeightsError,
    KMeansConfig,
    RandomSource,
    cumulative_inertia,
    greedy_kmeanspp,
    kmeans_1d,
    lloyd,
    sample_candidates,
    sample_first_centroid,
)
from .partition import (
    Clustering,
    centroids_to_borders,
    is_lloyd_fixed_point,
    lloyd_step,
    range_centroid,
    range_wcss,
    total_wcss,
)
from .two_cluster import DivisionProbe, Pointing, ZeroWeightSideError, classify_division, two_cluster

__version__ = "0.1.0"
