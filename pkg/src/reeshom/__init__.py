"""Exact computational algebra for weighted graded rings, Rees specialization,
and homological dimension checks."""

from .errors import (
    AmbientMismatchError,
    InternalError,
    ReeshomError,
    RingMismatchError,
    TaskError,
    ValidationError,
)
from .poly import (
    GREVLEX,
    LEX,
    MINUS_INFINITY,
    QQ,
    Field,
    GradedRing,
    MonomialOrder,
    Polynomial,
    dehomogenize,
    homogenize,
    is_homogeneous,
    prime_field,
    substitute,
    weighted_degree,
)
from .parsing import parse_polynomial
from .groebner import (
    FreeModule,
    GroebnerBasis,
    ModuleElement,
    buchberger,
    hilbert_profile,
    is_zero_quotient,
    module_quotient,
    normal_form,
    saturate,
    syzygies,
)
from .homalg import (
    ExtProfile,
    FPModule,
    FreeComplex,
    GradedMatrix,
    cohomology_at,
    ext_modules,
    ext_profile,
    ext_vanishes_above,
    fp_quotient_by_ideal,
    free_fp,
    free_resolution,
    hom_complex,
    validate_graded_matrix,
)
from .rees import (
    ReesModuleData,
    ReesRing,
    associated_graded,
    lsp0,
    rees_module,
    rees_ring,
    sp0,
    sp1,
)
from .pid import (
    InjectiveModel,
    SmithForm,
    ext_against_injective_model,
    graded_baer_check,
    smith_normal_form,
)

__version__ = "0.1.0"
