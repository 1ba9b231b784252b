"""Numerical laboratory for multilinear Fourier multiplier operators."""
from .errors import (
    AliasingError,
    BoundaryMassError,
    BudgetError,
    DomainError,
    EvaluationError,
    GridMismatchError,
    MultilabError,
    SingularPointError,
)
from .grid import (
    GridSpec,
    SampledFunction,
    SpectralFunction,
    forward_transform,
    inverse_transform,
    norm_lp,
    norm_weak_lp,
    sample,
)
from .littlewood_paley import build_dyadic_partition, delta_coord, delta_full, square_function
from .symbols import calderon_phi, calderon_symbol, coifman_meyer_example, cone_partition, get_symbol, h_profile, tensor_symbol
from .sobolev import Family, SmoothnessSpec, fractional_op, hormander_constant, localized_norm, multiparameter_constant, stein_I_alpha
from .multiplier_op import MultilinearPlan, apply, estimate_operator_norm
from .commutator import PvQuadratureSpec, antiderivative, calderon_c1_direct, calderon_c1_multiplier, calderon_cn

__version__ = "0.1.0"
