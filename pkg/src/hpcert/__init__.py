"""hpcert: recompute a catalog of series/integral identities at high
precision and certify each against its exact closed form."""

__version__ = "0.1.0"

from .errors import (
    BasisError,
    CatalogError,
    DomainError,
    NonconvergenceError,
    PreconditionError,
    VerificationError,
)
from .numeric import (
    BasisConstant,
    ClosedForm,
    HPReal,
    Precision,
    cf_add,
    cf_mul_ln2,
    cf_scale,
    const_catalan,
    const_ln2,
    const_pi,
    eval_closed_form,
    ulp,
)
from .quadrature import (
    GaussLegendre,
    Integrand,
    PiMultiple,
    QuadResult,
    TanhSinh,
    Tensor2D,
    gauss_legendre_nodes,
    integrate,
    integrate_2d,
    tanh_sinh_nodes,
)
from .series import (
    AccelMethod,
    Crz,
    Direct,
    Euler,
    SeriesResult,
    TailRoute,
    TailTerm,
    ln1pt_over_t,
    sigma_partial,
    sigma_series,
    sum_alternating,
    tail,
)
from .identities import (
    CheckResult,
    IdentityCheck,
    ParamFunction,
    catalog,
    check_param_derivative,
    closed_derivative,
    eval_param,
    run_catalog,
    run_check,
)
