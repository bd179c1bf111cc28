"""q-weighted digital sums, Takagi-Landsberg curves, and exact
Trollope-Delange identity checks."""

from .digit_sums import (
    S_q_direct,
    S_q_pow2,
    S_q_recursive,
    WeightSequence,
    binary_digits,
    s_q,
    weighted_digit_sum,
)
from .errors import DomainError, ModeError, ParseError, TdqError, VerificationError
from .odometer import (
    FluctuationCurve,
    G_q,
    Normalization,
    OdometerPoint,
    OverflowPolicy,
    birkhoff_deviation,
    ergodic_sum,
    lemma1_F_of,
    odometer_step,
    phi_curve,
    prop2_exact,
    s_q_point,
    stabilizer_search,
    sup_distance_to_limit,
)
from .scalar import (
    DyadicRational,
    Mode,
    QWeight,
    Regime,
    Scalar,
    as_qweight,
    as_scalar,
    int_pow,
    parse_scalar,
    tau,
)
from .takagi import (
    DeRhamSystem,
    F_q,
    G_tilde_gamma,
    derham_eval,
    fq_system,
    hat_F_q,
    takagi_alt_dyadic,
    takagi_dyadic_exact,
    takagi_series,
    takagi_system,
    tilde_F_1,
    tilde_F_q,
)
from .trollope import (
    LogDecomposition,
    classic_formula,
    dyadic_formula,
    larcher_residual,
    log_decompose,
    theorem1_rhs,
    vdc_star_discrepancy,
)

__version__ = "0.1.0"
