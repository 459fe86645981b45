"""Construction and numerical certification of entangled multipartite subspaces."""

from .errors import ArgumentError, GesforgeError, PreconditionError, ResourceError
from .linalg import Bipartition, DensityOperator, PureState
from .measures import MeasureReport, OptimizerPolicy
from .policy import DEFAULT, NumericPolicy
from .subspaces import Subspace

__version__ = "0.1.0"

__all__ = [
    "ArgumentError",
    "Bipartition",
    "DEFAULT",
    "DensityOperator",
    "GesforgeError",
    "MeasureReport",
    "NumericPolicy",
    "OptimizerPolicy",
    "PreconditionError",
    "PureState",
    "ResourceError",
    "Subspace",
]
