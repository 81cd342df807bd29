"""rootbias: bias of root numbers for newforms of cubic square-free level
over Q, Q(sqrt2) and Q(sqrt5), with brute-force verification of the local
ingredients."""

__version__ = "0.1.0"

from .basefield import FIELDS, Q, QSQRT2, QSQRT5, field_by_tag  # noqa: F401
from .bias import (  # noqa: F401
    BiasReport,
    bias_closed,
    bias_closed_Q,
    bias_closed_sqrt2,
    bias_closed_sqrt5,
    bias_general,
    dn_series_truncated,
)
from .quadarith import (  # noqa: F401
    class_number_imag,
    dirichlet_L1,
    fundamental_decompose,
    kronecker,
)
from .zagier import gen_zagier_L, zagier_L_factored, zagier_L_truncated  # noqa: F401
