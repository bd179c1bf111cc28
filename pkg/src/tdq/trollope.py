"""Classic and generalized Trollope-Delange formulas and their relatives.

The exact identities are evaluated entirely in rational (or complex) payload
arithmetic: the argument 2^{u-1} = n/2^{k+1} is dyadic, so the Takagi factor
comes from the finite dyadic route and never touches real powers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .digit_sums import WeightSequence, weighted_digit_sum
from .errors import DomainError
from .scalar import (
    DyadicRational,
    Mode,
    QWeight,
    Regime,
    Scalar,
    as_qweight,
    as_scalar,
)
from .takagi import G_tilde_gamma, takagi_dyadic_exact


@dataclass(frozen=True)
class LogDecomposition:
    """n split as n = p (x + 1) with p = 2^k, k = [log2 n], x = (n-p)/p."""

    n: int
    k: int
    u: float
    p: int
    x: DyadicRational
    r: Optional[Scalar] = None  # q^k when a weight is supplied

    def __post_init__(self):
        assert self.p * (self.x.to_fraction() + 1) == self.n


def log_decompose(n: int, q=None) -> LogDecomposition:
    if n < 1:
        raise DomainError("log_decompose requires n >= 1")
    k = n.bit_length() - 1
    p = 1 << k
    x = DyadicRational.from_fraction(Fraction(n - p, p))
    r = None
    if q is not None:
        qw = as_qweight(q)
        r = qw.q ** k
    return LogDecomposition(n=n, k=k, u=math.log2(n) - k, p=p, x=x, r=r)


def _tau_terms(n: int, i: int) -> Fraction:
    """tau(n / 2^i) as an exact fraction, via n mod 2^i."""
    m = n & ((1 << i) - 1)
    return Fraction(min(m, (1 << i) - m), 1 << i)


def theorem1_rhs(n: int, q) -> Scalar:
    """Right-hand side of the generalized Trollope-Delange formula.

    Valid for |q| > 1/2, q != 1.  hat F_q(log2 n) is taken through the exact
    dyadic Takagi route, so the whole identity stays in rational arithmetic
    for rational q.  Equals S_q(n)/n.
    """
    if n < 1:
        raise DomainError("theorem1_rhs requires n >= 1")
    qw = as_qweight(q)
    if qw.is_one:
        raise DomainError("Theorem 1 excludes q = 1; use classic_formula")
    if qw.regime is not Regime.CONTRACTIVE:
        raise DomainError("Theorem 1 requires |q| > 1/2")
    qv = qw.q.value
    mode = qw.q.mode
    k = n.bit_length() - 1
    t = takagi_dyadic_exact(Fraction(n, 1 << (k + 1)), qw.a).value
    scale = Fraction(1 << (k + 1), n)
    hat_f = (scale if mode is Mode.EXACT else float(scale)) * t
    bracket = (1 - qv ** (k + 1)) / (1 - qv) - qv ** k * hat_f
    return Scalar(mode, qv / 2 * bracket)


def dyadic_formula(n: int, q) -> Scalar:
    """All-q exact formula for S_q(n)/n at the (dyadic) integer points.

    No modulus constraint on q; only q = 1 is excluded.
    """
    if n < 1:
        raise DomainError("dyadic_formula requires n >= 1")
    q = as_scalar(q)
    if q.value == 1:
        raise DomainError("dyadic_formula excludes q = 1; use classic_formula")
    qv = q.value
    mode = q.mode
    k = n.bit_length() - 1
    total = 0 * qv
    for i in range(1, k + 2):
        t = _tau_terms(n, i)
        if t:
            total = total + (2 * qv) ** i * (t if mode is Mode.EXACT else float(t))
    head = qv / 2 * (1 - qv ** (k + 1)) / (1 - qv)
    return Scalar(mode, head - total / (2 * n))


def classic_formula(n: int) -> Scalar:
    """(1/2) log2 n + (1/2) tilde_F_1({log2 n}), the classic S(n)/n formula.

    The Takagi factor is the exact dyadic sum (an integer expression here);
    only the log2 terms are floats, and their fractional parts cancel.
    """
    if n < 1:
        raise DomainError("classic_formula requires n >= 1")
    k = n.bit_length() - 1
    # 2^{k+1} T(n / 2^{k+1}) at a = 1/2 collapses to sum_i min(m_i, 2^i - m_i)
    tk_scaled = 0
    for i in range(1, k + 2):
        m = n & ((1 << i) - 1)
        tk_scaled += min(m, (1 << i) - m)
    lg = math.log2(n)
    u = lg - k
    tilde_f1 = 1.0 - u - tk_scaled / n
    return Scalar.flt(0.5 * lg + 0.5 * tilde_f1)


def vdc_star_discrepancy(n: int) -> Scalar:
    """Star discrepancy of the first n van der Corput points, exact."""
    if n < 1:
        raise DomainError("vdc_star_discrepancy requires n >= 1")
    k = n.bit_length() - 1
    total = Fraction(1)
    for j in range(1, k + 1):
        total += _tau_terms(n, j)
    return Scalar.exact(total / n)


def larcher_residual(n: int, gamma: WeightSequence, tol: float) -> Scalar:
    """r(n) = S(n, gamma) - (n/2) sum_{i<=[log2 n]} gamma_i - n G~(log2 n).

    This is the o(n) remainder of the Larcher-type asymptotic; it is zero (up
    to n*tol) exactly when the weights are constant.
    """
    if n < 2:
        raise DomainError("larcher_residual requires n >= 2")
    if gamma.limit is None:
        raise DomainError("weight sequence has no declared limit")
    k = n.bit_length() - 1
    s_total = weighted_digit_sum(0, gamma) * 0
    for m in range(n):
        s_total = s_total + weighted_digit_sum(m, gamma)
    head = sum(float(gamma.weight(i).promote(Mode.FLOAT).value) for i in range(k + 1))
    g_term = float(G_tilde_gamma(math.log2(n), gamma.limit, tol).value)
    s_f = float(as_scalar(s_total.value).promote(Mode.FLOAT).value)
    return Scalar.flt(s_f - 0.5 * n * head - n * g_term)
