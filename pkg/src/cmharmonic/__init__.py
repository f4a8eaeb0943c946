"""Numerics for completely monotone sequences, their generating transforms,
and harmonic mappings built from them, with quasiconformality certificates."""

from .moments import (
    CMVerdict,
    DifferenceTable,
    MomentSequence,
    forward_difference,
    hadamard,
    is_completely_monotone,
    leibniz_rhs,
)
from .measures import (
    Atom,
    Beta,
    Lebesgue,
    LogGamma,
    Measure,
    Table,
    beta_measure,
    dirac,
    lebesgue,
    load_measure,
    loggamma_measure,
    make_named,
    measure_from_dict,
    measure_to_dict,
    mix,
    table_measure,
)
from .quadrature import QuadratureError, adaptive_quad
from .transforms import (
    CauchyTransform,
    ExtendedReal,
    GridSpec,
    MembershipReport,
    ShiftedCauchyTransform,
    SlitDomainError,
    check_membership,
)
from .harmonic import (
    ConvolutionPart,
    HarmonicMap,
    QCCertificate,
    SeriesPart,
    SingularDerivativeError,
    certify_qc_boundary_limit,
    certify_qc_grid,
    check_modulus_bound,
    check_partial_signs,
    convex_combination,
    convolve,
    density_ratio_condition,
    derivative_quotient,
    derivative_ratio_sup,
    harnack_ratio_bound,
    load_map,
    make_convolution_map,
    map_from_dict,
    map_to_dict,
    radial_limit,
    shifted,
)
from .special import (
    ConvergenceError,
    certify_hypergeom_map,
    certify_polylog_map,
    gamma,
    gauss_value,
    hyp2f1,
    hyp2f1_deriv,
    hyp_ratio_constant,
    pochhammer,
    polylog,
    polylog_ratio,
    polylog_via_measure,
    shifted_2f1,
    shifted_2f1_deriv_limit,
    shifted_2f1_deriv_limit_quad,
    zeta,
)

__version__ = "0.1.0"
