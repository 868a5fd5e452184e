"""Phase-space representation of wave functions in a displaced Hermite-Gaussian basis."""
from .basis import (
    BasisParams,
    QuadratureRule,
    basis_wavefunction,
    basis_wavefunctions,
    gauss_hermite,
    hermite,
    hermite_function,
    hermite_functions,
)
from .diffop import (
    DiffOpExpr,
    Polynomial,
    apply_to_polynomial,
    build_p_frak,
    build_p_hat,
    build_x_frak,
    build_x_hat,
    build_z_hat_1d,
    commutator,
    compose,
    derived_p_frak,
    derived_x_frak,
    render,
)
from .grid import (
    FieldStack,
    apply_fd,
    apply_fd_nd,
    apply_recurrence_p,
    apply_recurrence_x,
    field_stack,
    route_consistency_report,
)
from .matrices import (
    TridiagonalOperator,
    dispersion_matrices,
    ladder_minus,
    ladder_plus,
    p_frak_matrix,
    p_matrix,
    x_frak_matrix,
    x_matrix,
    z_generators_1d,
)
from .multidim import (
    ParamTensors,
    build_dispersion_generators,
    build_p_hat_mu,
    build_x_hat_nu,
    check_multidim_commutators,
    diagonal_tensors,
    displayed_expansions,
    random_dual_tensors,
    validate_tensors,
)
from .transform import (
    AnalyticWaveFunction,
    CoefficientVector,
    GaussianPacket,
    HermitePacket,
    PhaseSpaceField,
    PhaseSpaceGrid,
    SampledWaveFunction,
    Superposition,
    bessel_residual,
    forward_coeffs,
    forward_field,
    forward_stack,
    reconstruct_integral,
    reconstruct_sum,
)

__version__ = "0.1.0"
