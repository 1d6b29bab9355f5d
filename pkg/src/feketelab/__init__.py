"""Numerical workbench for Fekete configurations on compact sets.

Modules
-------
polyspace   graded multi-index bases and weighted Vandermonde matrices
geometry    compact-set models, candidate meshes, cusp descriptors
fekete      configuration solvers (brute, greedy, exchange, Leja)
measures    discrete/equilibrium measures, W1 and Holder-dual distances
extremal    growth-envelope brackets, modulus of continuity, HCP fits
rates       exponent chains and end-to-end rate experiments
cli         declarative experiment plans and artifacts
"""

__version__ = "0.1.0"

from .errors import (
    CapacityError,
    DegenerateConfigurationError,
    DegenerateMeshError,
    DegenerateSetError,
    DescriptorInvalidError,
    FeketeLabError,
    FitError,
    InputError,
    NoClosedFormError,
    ShapeError,
)
from .polyspace import (
    MultiIndexBasis,
    evaluate_basis,
    log_abs_det,
    multi_indices,
    space_dimension,
    vandermonde,
)
from .geometry import (
    Box,
    CandidateMesh,
    Circle,
    Comb,
    CompactSetModel,
    ConvexPolygon,
    Disk,
    Interval,
    PowerCusp,
    UnionModel,
    UpcDescriptor,
    builtin_descriptor,
    default_comb,
    generate_mesh,
    mesh_from_points,
    model_from_config,
    model_to_config,
    pyramid_image,
    roots_of_unity_mesh,
    validate_upc,
)
from .fekete import (
    Configuration,
    brute_force_fekete,
    exchange_refine,
    greedy_afp,
    leja_sequence,
    objective_value,
    solve_configuration,
)
from .measures import (
    DiscreteMeasure,
    MeasureDescriptor,
    arcsine_measure,
    dist_gamma,
    empirical_reference,
    equilibrium_closed_form,
    fekete_measure,
    uniform_circle_measure,
    w1_distance,
    wasserstein1_1d,
)
from .extremal import (
    ExtremalEstimate,
    extremal_bracket,
    extremal_estimate,
    hcp_fit,
    modulus_of_continuity,
)
from .rates import (
    RateConstants,
    RateReport,
    alpha_double_prime,
    alpha_prime,
    bound_curve,
    dmn_alpha_prime,
    hcp_constants,
    rate_constants,
    run_experiment,
)

__all__ = [name for name in dir() if not name.startswith("_")]
