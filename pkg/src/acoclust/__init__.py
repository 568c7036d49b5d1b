"""Ant-colony clustering toolkit: BACO, its K-means hybrid, and K-means."""

__version__ = "0.1.0"

from .colony import (AcoParams, ColonyState, PheromoneMatrix,
                     assignment_probabilities, construct_iteration,
                     global_pheromone_update, init_colony, intensify_best,
                     roulette_select, run_baco, visibility)
from .ingest import (REGISTRY, IngestConfig, load_centroids, load_points,
                     load_registry, save_centroids, save_points)
from .kernels import kernel_backend
from .kmeans import (KMeansConfig, kmeans_local_search, lloyd_step, run_bacok,
                     run_km)
from .metrics import (RunRecord, SummaryStats, centroid_index,
                      performance_percentage)
from .model import (AntSolution, BoundingBox, Dataset, batch_centroids,
                    between_inertia, bounding_box, squared_distance,
                    total_inertia, update_centroid_incremental, within_inertia)
from .rng import SplitMix64, derive_seed, float_key
from .synth import GeneratorSpec, generate, preset, reference_inertia

__all__ = [
    "AcoParams", "AntSolution", "BoundingBox", "ColonyState", "Dataset",
    "GeneratorSpec", "IngestConfig", "KMeansConfig", "PheromoneMatrix",
    "REGISTRY", "RunRecord", "SplitMix64", "SummaryStats",
    "assignment_probabilities", "batch_centroids", "between_inertia",
    "bounding_box", "centroid_index", "construct_iteration", "derive_seed",
    "float_key", "generate", "global_pheromone_update", "init_colony",
    "intensify_best", "kernel_backend", "kmeans_local_search",
    "load_centroids", "load_points", "load_registry", "lloyd_step",
    "performance_percentage", "preset", "reference_inertia",
    "roulette_select", "run_baco", "run_bacok", "run_km", "save_centroids",
    "save_points", "squared_distance", "total_inertia",
    "update_centroid_incremental", "visibility", "within_inertia",
    "__version__",
]
