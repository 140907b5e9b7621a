"""Weighted multiplicities of closed geodesics on congruence surfaces.

The package computes the weighted multiplicity of integer traces on
congruence surfaces (Hecke congruence groups of odd squarefree level, and
unit groups of indefinite rational quaternion orders of odd squarefree
reduced discriminant), its Fourier coefficients as a limit-periodic
function, and the Euler-product mean squares kappa, with every closed form
cross-checked against an independent brute-force path.
"""

__version__ = "0.1.0"

from .arith import (
    Factorization,
    FundamentalSplit,
    OrderDiscriminant,
    divisors,
    factorize,
    fundamental_split,
    is_discriminant,
    is_fundamental_discriminant,
    kronecker,
)
from .quadratic import (
    PellUnit,
    Regulator,
    class_number_L,
    narrow_class_number,
    norm_of_trace,
    proper_fundamental_unit,
    regulator,
    unit_index,
)
from .lfunctions import (
    ClassNumber,
    EulerTruncated,
    LogSin,
    SmoothedSeries,
    chi,
    cross_validate,
    l_one,
)
from .multiplicity import (
    Congruence,
    LocalFlavor,
    Quaternion,
    beta,
    beta_classcount,
    beta_truncated,
    conjugacy_class_count,
    indicator,
    local_factor,
    local_weight,
    trace_exists,
)
from .fourier import (
    RationalPhase,
    a_value,
    char_sum,
    closed_form_assembled,
    closed_form_coeff_b,
    dft_coefficient,
    gauss_sum,
    global_coefficient,
    local_euler_factor,
    local_period,
    series_coefficient,
)
from .meansquare import (
    EmpiricalSeries,
    EulerProductResult,
    c1,
    empirical,
    kappa,
    parseval_partial,
    seminorm_estimate,
)

__all__ = [
    "__version__",
    "Factorization",
    "FundamentalSplit",
    "OrderDiscriminant",
    "divisors",
    "factorize",
    "fundamental_split",
    "is_discriminant",
    "is_fundamental_discriminant",
    "kronecker",
    "PellUnit",
    "Regulator",
    "class_number_L",
    "narrow_class_number",
    "norm_of_trace",
    "proper_fundamental_unit",
    "regulator",
    "unit_index",
    "ClassNumber",
    "EulerTruncated",
    "LogSin",
    "SmoothedSeries",
    "chi",
    "cross_validate",
    "l_one",
    "Congruence",
    "LocalFlavor",
    "Quaternion",
    "beta",
    "beta_classcount",
    "beta_truncated",
    "conjugacy_class_count",
    "indicator",
    "local_factor",
    "local_weight",
    "trace_exists",
    "RationalPhase",
    "a_value",
    "char_sum",
    "closed_form_assembled",
    "closed_form_coeff_b",
    "dft_coefficient",
    "gauss_sum",
    "global_coefficient",
    "local_euler_factor",
    "local_period",
    "series_coefficient",
    "EmpiricalSeries",
    "EulerProductResult",
    "c1",
    "empirical",
    "kappa",
    "parseval_partial",
    "seminorm_estimate",
]
