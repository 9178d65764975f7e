"""Random cocycle fields on the square lattice.

Samplers for 0/1 edge labellings satisfying the plaquette identity, the
strip Markov chain behind them, and cluster measurements on the results.
"""
__version__ = "0.1.0"

from .errors import (
    CocycleError,
    CocycleViolation,
    ConvergenceFailure,
    DegenerateMarginals,
    DomainError,
    FConstancyViolation,
    NoVerticalEdges,
    ParseError,
    PathOutOfWindow,
)
from .lattice import (
    ConeSpec,
    EdgeConfig,
    EdgeRef,
    HeightField,
    LatticePath,
    Marginals,
    Orientation,
    SquareLabels,
    Vertex,
    balance_slope,
    cone_contains,
    f_along_path,
    integrate_height,
    marginals,
    validate_cocycle,
)
from .chain import (
    derive_transition_matrix,
    reversal_check,
    stationary_distribution,
)
from .samplers import (
    DirectedPathSpec,
    IndependentParams,
    StripParams,
    sample_independent,
    sample_strip_quadrant,
    sample_via_directed_path,
)
from .exclusion import YaguchiParams, sample_yaguchi
from .analysis import zero_clusters, spanning_stats
from .codec import decode_config, encode_config
