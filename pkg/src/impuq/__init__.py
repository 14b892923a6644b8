"""Imprecise-probability uncertainty quantification.

Uncertainty models: deterministic intervals, probability intervals and
credal sets, contamination mixtures, probability boxes, and belief
functions. On top of them, total-uncertainty decompositions into aleatoric
and epistemic parts with additive, weighted, and contamination-network
rules.
"""

from .core import (
    ConvergenceError,
    DEFAULT_TOLERANCE,
    Decomposition,
    DiscreteDistribution,
    Gamble,
    ImpuqError,
    ParseError,
    TabulatedCDF,
    Tolerance,
    ValidationError,
    shannon_entropy,
)
from .interval import IntervalModel
from .credal import (
    CredalSet,
    EntropyBounds,
    ProbabilityIntervals,
    enumerate_vertices,
)
from .contamination import ContaminationModel
from .pbox import PBox, PBoxDiscretization
from .randomset import (
    ClassEllipsoid,
    MassAssignment,
    OverlapEstimate,
    RankedSubset,
    ellipsoid_overlap,
    select_focal_budget,
    subset_overlap,
)
from .decomposition import (
    AlphaEstimate,
    DependencyRow,
    PredictionBundle,
    additive_tu,
    contnn_combine,
    contnn_decompose,
    contnn_decompose_instances,
    dependency_experiment,
    estimate_alpha2_credal,
    estimate_alpha2_ensemble,
    estimate_alpha2_interval_width,
    estimate_alphas_for_bundle,
    estimate_alphas_sensitivity,
    weighted_tu,
)

__version__ = "0.1.0"

__all__ = [
    "AlphaEstimate",
    "ClassEllipsoid",
    "ContaminationModel",
    "ConvergenceError",
    "CredalSet",
    "DEFAULT_TOLERANCE",
    "Decomposition",
    "DependencyRow",
    "DiscreteDistribution",
    "EntropyBounds",
    "Gamble",
    "ImpuqError",
    "IntervalModel",
    "MassAssignment",
    "OverlapEstimate",
    "PBox",
    "PBoxDiscretization",
    "ParseError",
    "PredictionBundle",
    "ProbabilityIntervals",
    "RankedSubset",
    "TabulatedCDF",
    "Tolerance",
    "ValidationError",
    "additive_tu",
    "contnn_combine",
    "contnn_decompose",
    "contnn_decompose_instances",
    "dependency_experiment",
    "ellipsoid_overlap",
    "enumerate_vertices",
    "estimate_alpha2_credal",
    "estimate_alpha2_ensemble",
    "estimate_alpha2_interval_width",
    "estimate_alphas_for_bundle",
    "estimate_alphas_sensitivity",
    "select_focal_budget",
    "shannon_entropy",
    "subset_overlap",
    "weighted_tu",
]
