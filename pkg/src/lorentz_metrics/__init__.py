"""Numerical toolkit for conformal Lorentzian metrics on domains of
Minkowski space: the Markowitz chain pseudodistance with certified upper
and lower bounds, null distances of time functions, quasi-hyperbolic and
Hilbert metrics, cosmological time, stable acausality diagnostics, and
Gromov hyperbolicity experiments.
"""

from .core import (
    AT_INFINITY,
    CausalClass,
    CausalityError,
    DimensionError,
    LorentzInversion,
    ProjectiveInterval,
    Similarity,
    apply_conformal,
    as_event,
    causal_classify,
    causally_related,
    cross_ratio_log,
    from_null,
    is_future_causal,
    is_infinite,
    is_lightlike,
    minkowski_form,
    null_coords,
    rho_interval,
    time_separation,
    wick_norm,
)
from .domains import (
    AcausalityVerdict,
    ConeComplement,
    ConePiece,
    Diamond,
    DomainError,
    DomainOracle,
    EuclideanBall,
    GraphDomain,
    HalfSpaceFuture,
    IntersectionDomain,
    MappedDomain,
    SpacelikeSlab,
    bonsante,
    boundary_distance,
    causal_boundary,
    causal_structure_checks,
    cone_future,
    cone_past,
    cosmological_time,
    initial_singularity,
    ray_exit,
    stable_acausality_epsilon,
    stable_cone_complement,
    stable_diamond,
)
from .chaingraph import NullLattice, SolverError, WebMesh, web_upper, zigzag_points
from .metrics import (
    CausalPath,
    DistanceEstimate,
    LatticeEvaluator,
    LightlikeChain,
    Mesh,
    QhGrid,
    TimeFunction,
    hilbert_distance,
    infinitesimal_markowitz,
    ln_tau_minus,
    ln_tau_ratio,
    markowitz_edge_cost,
    markowitz_lower,
    markowitz_upper,
    null_distance,
    quasi_hyperbolic_distance,
    validate_time_function,
)
from .oracles import (
    cosmo_time_closed,
    delta_cone_exact_2d,
    delta_cone_future,
    delta_diamond_2d,
    delta_diamond_matrix,
    delta_halfspace,
    delta_halfspace_exact_2d,
    diamond_projective_time,
)
from .hyplab import (
    HyperbolicityReport,
    QuasiGeodesicTriangle,
    causal_quasigeodesic,
    causal_thinness,
    causal_triangle,
    four_point_delta,
    gromov_product,
    thin_triangle_defect,
    witness_family,
)
from .validation import CriterionResult, run_criteria

__version__ = "1.0.0"
