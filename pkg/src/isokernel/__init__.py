"""Isolation Kernel: data-dependent similarity from random Voronoi partitionings.

The kernel holds t reference sets of psi points each. A point is encoded by
the index of its nearest reference within each set, and the similarity of two
points is the fraction of the t partitionings in which they share a cell.
Sparse regions produce large cells, so equally distant pairs score as more
similar in sparse regions than in dense ones, and nearest-neighbor structure
stays usable in high dimension where classic metrics concentrate.

The package also ships an exact metric ball-tree index, baseline similarity
measures (Gaussian, linear, lp, shared-nearest-neighbor, adaptive Gaussian),
dataset generators and LIBSVM parsing, and an experiment harness covering
concentration, retrieval precision, hubness, density-peaks clustering, and
Monte-Carlo checks of the kernel's cell-probability and collision behavior.
"""

__version__ = "1.0.0"

from .kernel import (
    Codes,
    IsolationKernel,
    feature_map,
    feature_space_distance,
    gram,
    ik_distance,
    pairwise_similarity,
    similarity,
)
from .data import (
    Dataset,
    gen_gaussians,
    gen_w_gaussians,
    minmax_normalize,
    parse_libsvm,
    write_libsvm,
)
from .measures import (
    AdaptiveGaussianMeasure,
    GaussianMeasure,
    IKMeasure,
    LinearMeasure,
    LpMeasure,
    Measure,
    SNNMeasure,
)
from .model_io import load_codes, load_model, save_codes, save_model
from .index import (
    BallTree,
    IKFeature,
    NormalizedLinear,
    QueryStats,
    RawEuclidean,
    bench_index,
    brute_knn,
    precision_at_k,
)

__all__ = [
    "__version__",
    "AdaptiveGaussianMeasure",
    "BallTree",
    "Codes",
    "Dataset",
    "GaussianMeasure",
    "IKFeature",
    "IKMeasure",
    "IsolationKernel",
    "LinearMeasure",
    "LpMeasure",
    "Measure",
    "NormalizedLinear",
    "QueryStats",
    "RawEuclidean",
    "SNNMeasure",
    "bench_index",
    "brute_knn",
    "feature_map",
    "feature_space_distance",
    "gen_gaussians",
    "gen_w_gaussians",
    "gram",
    "ik_distance",
    "load_codes",
    "load_model",
    "minmax_normalize",
    "pairwise_similarity",
    "parse_libsvm",
    "precision_at_k",
    "save_codes",
    "save_model",
    "similarity",
    "write_libsvm",
]
