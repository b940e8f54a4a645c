"""vdcount: exact counting of integral points on polynomial systems,
finite-field variety profiles, and van der Corput differencing experiments.
"""

from .counting import (
    CountResult,
    count_congruence,
    count_points,
    poisson_residual,
    weight_eval,
    weight_mass,
    weighted_count,
)
from .differencing import (
    AsymptoticResidual,
    DirectionClassification,
    ModulusPlan,
    PrimeTuple,
    RegularizedSystem,
    SelectedPrimes,
    SliceResult,
    VarianceReport,
    WeightTransform,
    asymptotic_residual,
    classify_directions,
    difference_system,
    find_slice,
    good_primes_in,
    modulus_plan,
    regularize,
    select_primes,
    variance_report,
)
from .errors import HypothesisError, PrimeSearchError, ResourceBudgetError
from .exponents import (
    ExponentReport,
    SlopeFit,
    birch_threshold,
    empirical_slope,
    mixed_degree_report,
    savings_exponents,
    uniform_degree_report,
)
from .ffgeom import (
    DirectionReport,
    HooleyResidual,
    VarietyProfile,
    affine_count_mod,
    build_T_sets,
    certify_profile,
    dimension_bruteforce,
    enumerate_projective_zeros,
    hooley_residual,
    jacobian_rank_at,
    projective_points,
    variety_profile,
)
from .groebner import groebner_basis, ideal_dimension, staircase
from .poly import (
    NEG_INF,
    Polynomial,
    PolySystem,
    UnimodularMap,
    complete_to_unimodular,
    difference,
    directional_form,
    group_by_degree,
    pencil_combine,
    pencil_invert,
    substitute_affine,
)
from .weights import (
    SmoothWeight,
    check_membership,
    compose_unimodular,
    indicator_box,
    multiply,
    paper_bump,
    pair_weight,
    restrict,
    translate,
)

__version__ = "0.1.0"
