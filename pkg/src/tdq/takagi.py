"""Takagi-Landsberg functions and the generic two-branch de Rham solver.

Three evaluation routes are kept separate on purpose: the truncated series
(with a certified geometric tail bound), the exact finite sum at dyadic
rationals, and digit descent through a de Rham system.  Route agreement is
the correctness argument, so no dispatcher hides it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, NamedTuple, Optional

from .errors import DomainError, ModeError
from .scalar import (
    DyadicRational,
    Mode,
    QWeight,
    Regime,
    Scalar,
    as_dyadic_fraction,
    as_qweight,
    as_scalar,
    tau_float,
    tau_frac,
)

DEFAULT_SERIES_TOL = 1e-14


# ---------------------------------------------------------------------------
# generic de Rham systems


class DeRhamValue(NamedTuple):
    value: Scalar
    error_bound: float  # 0.0 when the digit descent terminated exactly


@dataclass(frozen=True)
class DeRhamSystem:
    """The quadruple (a0, a1, g0, g1) of f(x/2) = a0 f(x) + g0(x),
    f((x+1)/2) = a1 f(x) + g1(x)."""

    a0: Scalar
    a1: Scalar
    g0: Callable[[Scalar], Scalar]
    g1: Callable[[Scalar], Scalar]
    g_sup: Optional[float] = None  # sup of |g0|, |g1| on [0,1], if known

    @property
    def mode(self) -> Mode:
        return self.a0.mode

    def is_contractive(self) -> bool:
        return max(self.a0.modulus(), self.a1.modulus()) < 1

    def endpoint_values(self) -> tuple[Scalar, Scalar]:
        """Fixed endpoints f(0) = g0(0)/(1-a0), f(1) = g1(1)/(1-a1)."""
        one = Scalar.one(self.mode)
        zero = Scalar.zero(self.mode)
        return (
            self.g0(zero) / (one - self.a0),
            self.g1(one) / (one - self.a1),
        )

    def consistency_residual(self) -> Scalar:
        one = Scalar.one(self.mode)
        zero = Scalar.zero(self.mode)
        return (
            self.a0 * self.g1(one) / (one - self.a1)
            + self.g0(one)
            - self.a1 * self.g0(zero) / (one - self.a0)
            - self.g1(zero)
        )

    def require_consistent(self, tol: float = 1e-9) -> None:
        r = self.consistency_residual().modulus()
        if (self.mode is Mode.EXACT and r != 0) or (self.mode is not Mode.EXACT and r > tol):
            raise DomainError(f"inconsistent de Rham system (residual {r})")

    def _sup_bound(self) -> float:
        if self.g_sup is not None:
            return self.g_sup
        # fall back to a grid estimate; exact bound only when g_sup is declared
        pts = [Fraction(j, 16) for j in range(17)]
        m = 0.0
        for p in pts:
            x = Scalar.lift(p, self.mode) if self.mode is Mode.EXACT else Scalar.lift(float(p), self.mode)
            m = max(m, float(self.g0(x).modulus()), float(self.g1(x).modulus()))
        return m


def derham_eval(sys: DeRhamSystem, x, depth: int = 64) -> DeRhamValue:
    """Evaluate the de Rham fixed point at x in [0,1].

    Dyadic rationals descend to an endpoint and are exact regardless of
    contraction (the system alone pins those values).  Off dyadic points the
    system must be contractive; the descent stops after ``depth`` digits and
    the returned radius C*rho^depth certifies the truncation.
    """
    sys.require_consistent()
    f0, f1 = sys.endpoint_values()

    fr = as_dyadic_fraction(x)
    if fr is not None:
        if not 0 <= fr <= 1:
            raise DomainError("derham_eval domain is [0,1]")
        path = []
        y = fr
        while y != 0 and y != 1:
            if y <= Fraction(1, 2):
                y = 2 * y
                path.append((sys.a0, sys.g0, y))
            else:
                y = 2 * y - 1
                path.append((sys.a1, sys.g1, y))
        v = f0 if y == 0 else f1
        for coef, g, arg in reversed(path):
            argval = Scalar.lift(arg if sys.mode is Mode.EXACT else float(arg), sys.mode)
            v = coef * v + g(argval)
        return DeRhamValue(v, 0.0)

    if sys.mode is Mode.EXACT:
        raise ModeError("non-dyadic abscissae need a float or complex system")
    xf = float(as_scalar(x).promote(Mode.FLOAT).value) if isinstance(x, Scalar) else float(x)
    if not 0.0 <= xf <= 1.0:
        raise DomainError("derham_eval domain is [0,1]")
    path_f = []
    y = xf
    steps = 0
    while y not in (0.0, 1.0) and steps < depth:
        if y <= 0.5:
            y = 2 * y
            path_f.append((sys.a0, sys.g0, y))
        else:
            y = 2 * y - 1
            path_f.append((sys.a1, sys.g1, y))
        steps += 1
    if y in (0.0, 1.0):
        v = f0 if y == 0.0 else f1
        bound = 0.0
    else:
        if not sys.is_contractive():
            raise DomainError("non-contractive system off dyadic points")
        rho = float(max(sys.a0.modulus(), sys.a1.modulus()))
        bound = (rho ** steps) * sys._sup_bound() / (1.0 - rho)
        v = Scalar.zero(sys.mode)  # midpoint of the attainable range [-C, C]
    for coef, g, arg in reversed(path_f):
        v = coef * v + g(Scalar.lift(arg, sys.mode))
    return DeRhamValue(v, bound)


def takagi_system(a) -> DeRhamSystem:
    """The de Rham system whose fixed point is the Takagi-Landsberg curve."""
    a = as_scalar(a)
    mode = a.mode
    half = Scalar.lift(Fraction(1, 2) if mode is Mode.EXACT else 0.5, mode)
    return DeRhamSystem(
        a0=a,
        a1=a,
        g0=lambda x: x * half,
        g1=lambda x: (Scalar.one(mode) - x) * half,
        g_sup=0.5,
    )


def fq_system(q) -> DeRhamSystem:
    """The de Rham system satisfied by F_q (coefficients a = 1/(2q))."""
    qw = as_qweight(q)
    mode = qw.q.mode
    qs = qw.q
    quarter = Scalar.lift(Fraction(1, 4) if mode is Mode.EXACT else 0.25, mode)
    c0 = (2 * qs - 3) * quarter
    c1 = (2 * qs - 1) * quarter
    g_sup = max(float(c0.modulus()), 2 * float(c1.modulus()))
    return DeRhamSystem(
        a0=qw.a,
        a1=qw.a,
        g0=lambda x: c0 * x,
        g1=lambda x: c1 * (x + Scalar.one(mode)),
        g_sup=g_sup,
    )


# ---------------------------------------------------------------------------
# Takagi-Landsberg evaluation routes


def series_truncation_length(abs_a: float, tol: float) -> int:
    """Smallest N with |a|^{N+1} / (2 (1-|a|)) <= tol / 2.

    The factor-2 headroom keeps float rounding inside the declared tolerance.
    """
    if tol <= 0:
        raise DomainError("tolerance must be positive")
    if abs_a <= 0:
        return 0
    bound = tol * (1.0 - abs_a)  # tail <= tol/2  <=>  |a|^{N+1} <= tol (1-|a|)
    if bound >= abs_a:
        return 0
    return max(0, math.ceil(math.log(bound) / math.log(abs_a)) - 1)


def takagi_series(x, a, tol: float = DEFAULT_SERIES_TOL) -> Scalar:
    """Truncated series sum a^n tau(2^n x), certified within tol; needs |a| < 1."""
    a = as_scalar(a)
    abs_a = float(a.modulus())
    if abs_a >= 1:
        raise DomainError("takagi_series requires |a| < 1")
    n_terms = series_truncation_length(abs_a, tol) + 1

    mode = Mode.FLOAT if a.mode is not Mode.COMPLEX else Mode.COMPLEX
    av = a.promote(mode).value
    acc = 0 * av
    w = av ** 0

    if isinstance(x, DyadicRational):
        fr = x.to_fraction()
    else:
        fr = as_scalar(x).value
    if isinstance(fr, complex):
        raise ModeError("takagi_series requires a real abscissa")

    if isinstance(fr, (int, Fraction)):
        y = Fraction(fr) - math.floor(fr)
        for _ in range(n_terms):
            t = tau_frac(y)
            if t:
                acc = acc + w * float(t)
            y = 2 * y
            if y >= 1:
                y -= 1
            w = w * av
    else:
        y = fr - math.floor(fr)
        for _ in range(n_terms):
            acc = acc + w * tau_float(y)
            y = 2.0 * y
            if y >= 1.0:
                y -= 1.0
            w = w * av
    return Scalar(mode, acc)


def takagi_dyadic_exact(x, a) -> Scalar:
    """Finite sum at a dyadic rational x; exact when a is exact, any a allowed."""
    fr = as_dyadic_fraction(x)
    if fr is None:
        raise DomainError("takagi_dyadic_exact requires a dyadic rational x")
    a = as_scalar(a)
    av = a.value
    acc = 0 * av
    y = fr - math.floor(fr)
    w = av ** 0
    while y != 0:
        t = tau_frac(y)
        acc = acc + w * (t if a.mode is Mode.EXACT else float(t))
        y = 2 * y
        if y >= 1:
            y -= 1
        w = w * av
    return Scalar(a.mode, acc)


def takagi_alt_dyadic(n: int, a) -> Scalar:
    """T_a(n/2^{k_n+1}) via a^{k+1} sum a^{-i} tau(n/2^i); cross-check route.

    This is the definition's finite sum reindexed from the top digit down,
    so it needs a != 0 but no contraction.
    """
    if n < 1:
        raise DomainError("takagi_alt_dyadic requires n >= 1")
    a = as_scalar(a)
    if a.is_zero():
        raise DomainError("takagi_alt_dyadic requires a != 0")
    av = a.value
    k = n.bit_length() - 1
    acc = 0 * av
    for i in range(1, k + 2):
        m = n & ((1 << i) - 1)
        t = Fraction(min(m, (1 << i) - m), 1 << i)
        if t:
            acc = acc + av ** -i * (t if a.mode is Mode.EXACT else float(t))
    return Scalar(a.mode, acc * av ** (k + 1))


# ---------------------------------------------------------------------------
# derived functions


def F_q(x, q) -> Scalar:
    """F_q(x) = q x - T_a(x) / 2 on [0,1], a = 1/(2q); exact at dyadic x."""
    qw = as_qweight(q)
    fr = as_dyadic_fraction(x)
    if fr is not None:
        if not 0 <= fr <= 1:
            raise DomainError("F_q domain is [0,1]")
        xs = Scalar.lift(fr if qw.q.mode is Mode.EXACT else float(fr), qw.q.mode)
        t = takagi_dyadic_exact(fr, qw.a)
        return qw.q * xs - t / 2
    if qw.regime is not Regime.CONTRACTIVE:
        raise DomainError("F_q off dyadic points requires |q| > 1/2")
    xf = float(as_scalar(x).promote(Mode.FLOAT).value)
    if not 0.0 <= xf <= 1.0:
        raise DomainError("F_q domain is [0,1]")
    mode = Mode.COMPLEX if qw.q.mode is Mode.COMPLEX else Mode.FLOAT
    t = takagi_series(xf, qw.a.promote(mode))
    return qw.q.promote(mode) * Scalar.lift(xf, mode) - t / 2


def hat_F_q(u, q, tol: float = DEFAULT_SERIES_TOL) -> Scalar:
    """hat F_q(u) = 2^{1-u} T_a(2^{u-1}), 1-periodic in u; float-mode result."""
    qw = as_qweight(q)
    if qw.regime is not Regime.CONTRACTIVE:
        raise DomainError("hat_F_q requires |q| > 1/2")
    uf = float(as_scalar(u).promote(Mode.FLOAT).value)
    uf -= math.floor(uf)
    mode = Mode.COMPLEX if qw.q.mode is Mode.COMPLEX else Mode.FLOAT
    t = takagi_series(2.0 ** (uf - 1.0), qw.a.promote(mode), tol)
    return Scalar.lift(2.0 ** (1.0 - uf), mode) * t


def tilde_F_q(u, q, tol: float = DEFAULT_SERIES_TOL) -> Scalar:
    """The corollary's periodic correction (real q > 1/2, q != 1 only)."""
    qw = as_qweight(q)
    if qw.q.mode is Mode.COMPLEX:
        raise ModeError("tilde_F_q is defined for real q only")
    qf = float(qw.q.promote(Mode.FLOAT).value)
    if qf <= 0.5:
        raise DomainError("tilde_F_q requires q > 1/2")
    if qw.is_one:
        raise DomainError("tilde_F_q excludes q = 1 (use tilde_F_1)")
    uf = float(as_scalar(u).promote(Mode.FLOAT).value)
    if uf != 1.0:
        uf -= math.floor(uf)
    af = 1.0 / (2.0 * qf)
    t = float(takagi_series(2.0 ** (uf - 1.0), af, tol).value)
    head = (1.0 - qf ** (1.0 - uf)) / (1.0 - qf)
    return Scalar.flt(head - qf ** (-uf) * 2.0 ** (1.0 - uf) * t)


def tilde_F_1(t, tol: float = DEFAULT_SERIES_TOL) -> Scalar:
    """Classic Trollope-Delange correction 1 - t - 2^{1-t} T(2^{t-1}), t in [0,1]."""
    tf = float(as_scalar(t).promote(Mode.FLOAT).value)
    if not 0.0 <= tf <= 1.0:
        raise DomainError("tilde_F_1 domain is [0,1]")
    tk = float(takagi_series(2.0 ** (tf - 1.0), 0.5, tol).value)
    return Scalar.flt(1.0 - tf - 2.0 ** (1.0 - tf) * tk)


def G_tilde_gamma(x, gamma_limit, tol: float) -> Scalar:
    """Larcher's periodic term -(g/2) sum_{i>=-1} tau(2^{x+i}) / 2^{x+i}.

    The function is 1-periodic; the series representation holds on [0,1], so
    the argument is reduced mod 1 first.
    """
    if tol <= 0:
        raise DomainError("tolerance must be positive")
    g = as_scalar(gamma_limit)
    if g.mode is Mode.COMPLEX:
        raise ModeError("G_tilde_gamma requires a real limit")
    gf = float(g.promote(Mode.FLOAT).value)
    if gf == 0.0:
        return Scalar.flt(0.0)
    xf = float(as_scalar(x).promote(Mode.FLOAT).value)
    xf -= math.floor(xf)
    # tail past i = I is bounded by |g/2| * 2 * 2^{-(x+I)} <= |g| 2^{-I}
    imax = max(0, math.ceil(math.log2(abs(gf) / tol))) + 1
    acc = 0.0
    for i in range(-1, imax + 1):
        p = 2.0 ** (xf + i)
        acc += tau_float(p) / p
    return Scalar.flt(-0.5 * gf * acc)
