"""Exact piecewise-linear calculus of structure, decomposition and Herbrand functions."""

from .errors import (
    DomainError,
    InconsistentDataError,
    MalformedInputError,
    NotInvertibleError,
    RamicalcError,
    ValidationError,
)
from .galois import (
    GaloisDecomposition,
    delta_from_pairing,
    least_sigma_jump,
    restrict_tame_sigma,
    sigma_function,
    single_jump_diagnostic,
    slope_of,
    tame_distance_min,
    twist_distance,
)
from .gl import (
    EndoClassProfile,
    Level,
    PairingInput,
    minimal_c,
    minimal_profile,
    mixed_level_distance,
    pairing_varsigma,
    structure_function,
    swan_exponent,
    tame_lift_structure,
    twist_level,
    varsigma_table,
)
from .herbrand import (
    HerbrandBundle,
    TwistSample,
    ball_transfer_check,
    boundary_slopes_check,
    decompose_m,
    essentially_tame_check,
    herbrand_function,
    interpolate_psi,
    psi_inverse_agreement,
    tame_lift_herbrand,
    transfer_radius,
)
from .plf import (
    IDENTITY,
    PLFunction,
    agree_from,
    as_rational,
    certify,
    compose,
    derivative_jumps,
    evaluate,
    format_rational,
    invert,
    max_affine_mean,
    scale_conj,
)
from .ultrametric import UltrametricTable, truncation_classes, validate_ultrametric

__version__ = "0.1.0"
