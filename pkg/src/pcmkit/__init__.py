"""Possibilistic c-means clustering toolkit.

Implements the PCM / APCM / UPCM family of possibilistic clustering
algorithms, a conditional-fuzzy-set engine that folds bandwidth
uncertainty into Gaussian membership functions, seeded Gaussian-mixture
benchmark generators, and a parameter-sweep experiment harness.
"""

from .dataset import DataMatrix, GeneratorSpec, generate_gaussian_mixture
from .errors import (
    DataFormatError,
    DegenerateDataError,
    PcmkitError,
    TotalEliminationError,
)
from .fuzzy import FuzzyBandwidth
from .model import ClusterModel

__version__ = "0.1.0"

__all__ = [
    "ClusterModel",
    "DataFormatError",
    "DataMatrix",
    "DegenerateDataError",
    "FuzzyBandwidth",
    "GeneratorSpec",
    "PcmkitError",
    "TotalEliminationError",
    "generate_gaussian_mixture",
    "__version__",
]
