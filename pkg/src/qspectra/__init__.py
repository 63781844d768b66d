"""qspectra: S-spectra and spectral systems of quaternionic matrices.

Finite-dimensional quaternionic spectral operator theory: exact quaternion
arithmetic, intrinsic slice functions, the S-functional calculus by contour
quadrature over the right-linear structure, spectral systems (projection
valued measure + spectral orientation), the canonical scalar/radical
decomposition, and cross-validation against complex operator theory on the
embedded space.
"""

from .config import Tolerances, default_tolerances
from .errors import (
    ConditioningError,
    ConsistencyError,
    DivergenceError,
    DomainError,
    FunctionSpecError,
    NumericalError,
    QSpectraError,
    SingularityError,
    UnsupportedError,
)
from .quaternion import (
    E1,
    E2,
    E3,
    ONE,
    ZERO,
    Quaternion,
    SpectralSphere,
    axially_decompose,
    conjugate_by,
    imaginary_unit,
    rotation_taking,
    same_sphere,
)
from .slicefun import (
    AxialDomain,
    ExponentialFunction,
    IntrinsicSliceFunction,
    MeasurableSliceFunction,
    PolynomialFunction,
    RationalFunction,
    StemFunction,
    cauchy_kernel_left,
    cauchy_kernel_right,
    cauchy_reconstruct,
    cauchy_sweep,
    compose,
    eval_via_representation,
    evaluate,
    parse_function_spec,
    product,
    real_linear_combination,
)
from .qlinalg import (
    QMatrix,
    QVector,
    SpectrumInfo,
    complex_eigenvalues,
    hausdorff_distance,
    null_space,
    operator_norm,
    s_spectrum,
    solve,
)
from .resolvents import (
    PseudoResolvent,
    SResolventPair,
    pseudo_resolvent_apply,
    pseudo_resolvent_matrix,
    pseudo_resolvent_series,
    right_resolvent_field,
    s_resolvents,
    sresolvent_equation_residual,
)
from .calculus import (
    Circle,
    ContourSpec,
    QuadratureConfig,
    auto_contour,
    funcalc,
    riesz_projector,
    spectrum_image,
    unit_independence_check,
    verify_calculus_properties,
)
from .systems import (
    AxSet,
    ComplexSpectralMeasure,
    ImaginaryOperator,
    SpectralMeasure,
    SpectralSystem,
    induce_complex_measure,
    make_imaginary_from_projections,
    norm_bound_constant,
    spectral_integral,
    split_by_imaginary_operator,
    split_eigensphere,
)
from .spectral import (
    SpectralDecomposition,
    cex_truncation,
    complex_equivalence_check,
    pushforward_decomposition,
    spectral_decomposition,
    taylor_funcalc,
)

__version__ = "0.1.0"
