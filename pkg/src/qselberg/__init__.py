"""Bilateral q-Selberg Jackson sums, their closed product forms and a checker."""

from .errors import (
    BalanceViolated,
    ConfigError,
    ConstraintViolated,
    DimensionUnsupported,
    FactorCapExceeded,
    IndexOutOfRange,
    NotConverged,
    PoleHit,
    PoleOnContour,
    QSelbergError,
    TauIsPositiveInteger,
    ZeroArgument,
)
from .lattice_sum import (
    Region,
    SumResult,
    contour_integral,
    jackson_sum,
    macdonald_constant_sum,
    regularized_sum,
)
from .qkernel import LogProduct, QContext, qpoch_inf, qpoch_int, theta
from .weights import Family, WeightSpec, delta, h_reg, phi, zeta, zeta_bar, zeta_i

__version__ = "0.1.0"

__all__ = [
    "BalanceViolated", "ConfigError", "ConstraintViolated", "DimensionUnsupported",
    "FactorCapExceeded", "IndexOutOfRange", "NotConverged", "PoleHit", "PoleOnContour",
    "QSelbergError", "TauIsPositiveInteger", "ZeroArgument", "Region", "SumResult",
    "contour_integral", "jackson_sum", "macdonald_constant_sum", "regularized_sum",
    "LogProduct", "QContext", "qpoch_inf", "qpoch_int", "theta", "Family", "WeightSpec",
    "delta", "h_reg", "phi", "zeta", "zeta_bar", "zeta_i",
]
