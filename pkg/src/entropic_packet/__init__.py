"""Entropic uncertainty relation for power-law wave packets.

phi(x) = N / (1 + x^2)^(alpha/2), alpha > 1/2. The position variance
diverges for alpha <= 3/2, but the Shannon entropies S_x and S_p stay
finite and S_x + S_p >= 1 + ln(pi) for every alpha.
"""

from .crosscheck import CrosscheckReport, ft_numeric, run_all
from .entropy import (
    ENTROPY_BOUND,
    EntropyReport,
    Method,
    i_alpha,
    s_p_numeric,
    s_p_semi_closed,
    s_x_closed,
    s_x_numeric,
    total_uncertainty,
)
from .errors import (
    BoundViolation,
    ConvergenceFailure,
    DomainError,
    NearEdgeWarning,
    NonFiniteSample,
    SingularAtZero,
    SpecFunError,
)
from .packet import (
    MomentValue,
    PowerLawPacket,
    amplitude_p,
    amplitude_x,
    density_p_ln,
    density_x_ln,
    heisenberg_product,
    make_packet,
    momentum_second_moment,
    position_second_moment,
    potential,
)
from .quadrature import IntegrationResult, QuadratureConfig

__version__ = "0.1.0"
