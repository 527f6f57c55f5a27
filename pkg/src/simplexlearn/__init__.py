"""Learning a K-simplex from points sampled inside it, by gradient descent on a
smoothed likelihood surrogate with a volume penalty."""
from ._backend import backend_name
from .errors import (
    DegenerateDataError,
    DegenerateSimplexError,
    DimensionError,
    InsufficientDataError,
    NullspaceNotUniqueError,
    SimplexLearnError,
    UnsupportedOperationError,
)
from .geometry import (
    Simplex,
    diameter_dataset,
    diameter_simplex,
    extreme_points,
    facet_hyperplanes,
    isoperimetry_constants,
    planar_distances,
    volume,
)
from .metrics import (
    barycentric_coordinates,
    containment_fraction,
    tv_distance_mc,
    vertex_error,
)
from .optimizer import DegenerateFitError, FitConfig, FitResult, fit
from .risk import LossSpec, crr_gradient, crr_risk, volume_gradient
from .sampling import Dataset, NoiseConfig, add_noise, random_simplex, regular_simplex, sample_uniform

__version__ = "0.1.0"

__all__ = [
    "Dataset",
    "DegenerateDataError",
    "DegenerateFitError",
    "DegenerateSimplexError",
    "DimensionError",
    "FitConfig",
    "FitResult",
    "InsufficientDataError",
    "LossSpec",
    "NoiseConfig",
    "NullspaceNotUniqueError",
    "Simplex",
    "SimplexLearnError",
    "UnsupportedOperationError",
    "add_noise",
    "backend_name",
    "barycentric_coordinates",
    "containment_fraction",
    "crr_gradient",
    "crr_risk",
    "diameter_dataset",
    "diameter_simplex",
    "extreme_points",
    "facet_hyperplanes",
    "fit",
    "isoperimetry_constants",
    "planar_distances",
    "random_simplex",
    "regular_simplex",
    "sample_uniform",
    "tv_distance_mc",
    "vertex_error",
    "volume",
    "volume_gradient",
]
