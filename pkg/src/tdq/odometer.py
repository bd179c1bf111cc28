"""Dyadic odometer, ergodic sums, and fluctuation (limiting) curves.

Orbit sums are updated incrementally: one add-with-carry step flips a block
of trailing ones to zeros and sets the next bit, so the q-weighted coordinate
sum changes by a precomputed geometric correction.  This keeps exact-mode
runs exact and float-mode runs at n ~ 2^20 cheap.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .digit_sums import S_pow2_payload, S_rec_payload
from .errors import DomainError
from .scalar import (
    DyadicRational,
    Mode,
    QWeight,
    Regime,
    Scalar,
    as_dyadic_fraction,
    as_qweight,
    as_scalar,
)
from .takagi import takagi_dyadic_exact, takagi_series


class OverflowPolicy(enum.Enum):
    GROW = "grow"
    ERROR = "error"


@dataclass(frozen=True)
class OdometerPoint:
    """A dyadic integer as finitely many stored bits (LSB first, zero tail)."""

    bits: tuple[int, ...] = ()
    policy: OverflowPolicy = OverflowPolicy.GROW

    def __post_init__(self):
        if any(b not in (0, 1) for b in self.bits):
            raise DomainError("odometer bits must be 0 or 1")

    @staticmethod
    def zero() -> "OdometerPoint":
        return OdometerPoint(())

    @staticmethod
    def from_int(n: int, policy: OverflowPolicy = OverflowPolicy.GROW) -> "OdometerPoint":
        if n < 0:
            raise DomainError("odometer points encode non-negative integers")
        bits = []
        while n:
            bits.append(n & 1)
            n >>= 1
        return OdometerPoint(tuple(bits), policy)

    def value(self) -> int:
        return sum(b << i for i, b in enumerate(self.bits))


def odometer_step(omega: OdometerPoint) -> OdometerPoint:
    """Add one with carry; GROW appends a bit on full carry, ERROR raises."""
    bits = list(omega.bits)
    i = 0
    while i < len(bits) and bits[i] == 1:
        bits[i] = 0
        i += 1
    if i < len(bits):
        bits[i] = 1
    elif omega.policy is OverflowPolicy.GROW:
        bits.append(1)
    else:
        raise DomainError("odometer capacity exhausted under ERROR policy")
    return OdometerPoint(tuple(bits), omega.policy)


def s_q_point(omega: OdometerPoint, q) -> Scalar:
    qw = as_qweight(q)
    qv = qw.q.value
    total = 0 * qv
    for i, b in enumerate(omega.bits):
        if b:
            total = total + qv ** (i + 1)
    return Scalar(qw.q.mode, total)


class _OrbitAccumulator:
    """Walks the orbit of omega, keeping s_q(current point) up to date."""

    def __init__(self, omega: OdometerPoint, qv):
        self.bits = list(omega.bits)
        self.policy = omega.policy
        self.capacity = len(omega.bits)
        self.qv = qv
        self.powers = [qv]        # powers[i] = q^{i+1}
        self.prefix = [qv]        # prefix[i] = q + q^2 + ... + q^{i+1}
        self.s = 0 * qv
        for i, b in enumerate(self.bits):
            if b:
                self.s = self.s + self._power(i)

    def _power(self, i: int):
        while len(self.powers) <= i:
            p = self.powers[-1] * self.qv
            self.powers.append(p)
            self.prefix.append(self.prefix[-1] + p)
        return self.powers[i]

    def step(self) -> None:
        bits = self.bits
        j = 0
        n_bits = len(bits)
        while j < n_bits and bits[j] == 1:
            bits[j] = 0
            j += 1
        if j < n_bits:
            bits[j] = 1
        elif self.policy is OverflowPolicy.GROW:
            bits.append(1)
        else:
            raise DomainError("odometer capacity exhausted under ERROR policy")
        new_power = self._power(j)
        if j:
            self.s = self.s - self.prefix[j - 1] + new_power
        else:
            self.s = self.s + new_power


def ergodic_sum(omega: OdometerPoint, q, n: int) -> Scalar:
    """S_{q,omega}(n) = sum of s_q over the first n orbit points."""
    if n < 1:
        raise DomainError("ergodic_sum requires n >= 1")
    qw = as_qweight(q)
    acc = _OrbitAccumulator(omega, qw.q.value)
    total = acc.s
    for _ in range(n - 1):
        acc.step()
        total = total + acc.s
    return Scalar(qw.q.mode, total)


def orbit_partial_sums(omega: OdometerPoint, q, l: int) -> list:
    """Payload list P with P[j] = S_{q,omega}(j), j = 0 .. l."""
    qw = as_qweight(q)
    acc = _OrbitAccumulator(omega, qw.q.value)
    out = [0 * qw.q.value]
    total = out[0]
    for j in range(l):
        total = total + acc.s
        out.append(total)
        acc.step()
    return out


def birkhoff_deviation(omega: OdometerPoint, q, n: int) -> Scalar:
    """(1/n) S_{q,omega}(n) - E s_q, with E s_q = q / (2 (1 - q))."""
    qw = as_qweight(q)
    if qw.q.modulus() >= 1:
        raise DomainError("birkhoff_deviation requires |q| < 1")
    qv = qw.q.value
    mean = ergodic_sum(omega, qw, n).value / n
    return Scalar(qw.q.mode, mean - qv / (2 * (1 - qv)))


# ---------------------------------------------------------------------------
# G_q and the Lemma 1 correspondence


def G_q(n: int, q) -> Scalar:
    """G_q(n) = (S_q(n) - (n/p) S_q(p)) / (p q^k), p = 2^k = 2^[log2 n]."""
    if n < 1:
        raise DomainError("G_q requires n >= 1")
    qw = as_qweight(q)
    qv = qw.q.value
    k = n.bit_length() - 1
    p = 1 << k
    s_n = S_rec_payload(n, qv)
    s_p = S_pow2_payload(k, qv)
    ratio = Fraction(n, p)
    factor = ratio if qw.q.mode is Mode.EXACT else float(ratio)
    return Scalar(qw.q.mode, (s_n - factor * s_p) / (p * qv ** k))


def lemma1_F_of(n: int, q) -> tuple[DyadicRational, Scalar]:
    """Return (x_n, F_q(x_n)) with x_n = (n - p_n)/p_n and F_q(x_n) = G_q(n)."""
    if n < 1:
        raise DomainError("lemma1_F_of requires n >= 1")
    k = n.bit_length() - 1
    p = 1 << k
    x = DyadicRational.from_fraction(Fraction(n - p, p))
    return x, G_q(n, q)


# ---------------------------------------------------------------------------
# fluctuation curves


class Normalization(enum.Enum):
    MAX_ABS = "max-abs"
    EXPLICIT = "explicit"


@dataclass(frozen=True)
class FluctuationCurve:
    grid: tuple
    values: tuple[Scalar, ...]
    l: int
    R: Scalar
    normalization: Normalization


def _interp(partials: Sequence, pos):
    """Linear interpolation of the partial-sum sequence at a real position."""
    i = math.floor(pos)
    frac = pos - i
    if frac == 0:
        return partials[int(i)]
    lo = partials[int(i)]
    return lo + frac * (partials[int(i) + 1] - lo)


def phi_curve(
    partial_sums: Sequence,
    l: int,
    grid: Iterable,
    normalization: Normalization = Normalization.MAX_ABS,
    R: Optional[Scalar] = None,
) -> FluctuationCurve:
    """phi_l(t) = (S(t l) - t S(l)) / R on the grid, S linearly interpolated."""
    grid = tuple(grid)
    if not grid:
        raise DomainError("phi_curve requires a non-empty grid")
    sums = [p.value if isinstance(p, Scalar) else p for p in partial_sums]
    if len(sums) < l + 1:
        raise DomainError("partial sums must cover [0, l]")
    mode = Mode.EXACT if isinstance(sums[0], (int, Fraction)) else (
        Mode.COMPLEX if isinstance(sums[0], complex) else Mode.FLOAT
    )
    total = sums[l]
    raw = []
    for t in grid:
        tq = t if mode is Mode.EXACT else float(t)
        if not 0 <= float(t) <= 1:
            raise DomainError("grid abscissae must lie in [0,1]")
        raw.append(_interp(sums, tq * l) - tq * total)
    if normalization is Normalization.MAX_ABS:
        m = max(abs(v) for v in raw)
        r_val = m if m != 0 else (1 if mode is Mode.EXACT else 1.0)
        r_scalar = Scalar.lift(r_val, mode if not isinstance(r_val, float) else Mode.FLOAT)
        if mode is Mode.COMPLEX:
            r_scalar = Scalar.lift(r_val, Mode.FLOAT)
    else:
        if R is None:
            raise DomainError("explicit normalization needs R")
        r_scalar = as_scalar(R)
        r_val = r_scalar.value
    values = tuple(Scalar(mode, v / r_val) for v in raw)
    return FluctuationCurve(grid=grid, values=values, l=l, R=r_scalar, normalization=normalization)


@dataclass(frozen=True)
class Prop2Result:
    curve: FluctuationCurve
    max_residual: Scalar  # max |phi_l(t_j) + q T_a(t_j)| over the grid


def prop2_exact(q, N: int) -> Prop2Result:
    """The exact limiting-curve identity at l = 2^N, R = (2q)^{N-1}.

    Grid points t_j = j/2^{N-1}; the returned values equal -q T_a(t_j) with
    zero residual in exact mode.
    """
    if N < 1:
        raise DomainError("prop2_exact requires N >= 1")
    qw = as_qweight(q)
    if qw.regime is not Regime.CONTRACTIVE:
        raise DomainError("Proposition 2 requires |q| > 1/2")
    qv = qw.q.value
    l = 1 << N
    partials = orbit_partial_sums(OdometerPoint.zero(), qw, l)
    grid = tuple(Fraction(j, 1 << (N - 1)) for j in range((1 << (N - 1)) + 1))
    r = Scalar(qw.q.mode, (2 * qv) ** (N - 1))
    curve = phi_curve(partials, l, grid, Normalization.EXPLICIT, r)
    worst = Fraction(0) if qw.q.mode is Mode.EXACT else 0.0
    for t, v in zip(grid, curve.values):
        target = takagi_dyadic_exact(t, qw.a).value
        worst = max(worst, abs(v.value + qv * target))
    mode = Mode.EXACT if qw.q.mode is Mode.EXACT else Mode.FLOAT
    return Prop2Result(curve=curve, max_residual=Scalar.lift(worst, mode))


def sup_distance_to_limit(curve: FluctuationCurve, q) -> Scalar:
    """max over the grid of |phi(t) + q T_a(t)|, T_a exact at dyadic t."""
    qw = as_qweight(q)
    if qw.regime is not Regime.CONTRACTIVE:
        raise DomainError("limiting curve requires |q| > 1/2")
    qv = qw.q.value
    worst = None
    for t, v in zip(curve.grid, curve.values):
        if as_dyadic_fraction(t if isinstance(t, (Fraction, int)) else as_scalar(t)) is not None:
            target = takagi_dyadic_exact(t, qw.a).value
        else:
            target = takagi_series(float(t), qw.a).value
        d = abs(v.value + qv * target)
        worst = d if worst is None else max(worst, d)
    mode = Mode.EXACT if isinstance(worst, Fraction) else Mode.FLOAT
    return Scalar.lift(worst, mode)


@dataclass(frozen=True)
class StabilizerReport:
    entries: tuple[tuple[int, float], ...]  # (window length, sup distance)
    best_l: int
    best_distance: float


def stabilizer_search(
    omega: OdometerPoint, q, candidate_windows: Sequence[int], grid: Iterable
) -> StabilizerReport:
    """Empirical explorer for stabilizing windows; no convergence guarantee.

    For each candidate l the MaxAbs-normalized fluctuation curve is compared
    to -q T_a scaled the same way; the profile and best window are reported.
    """
    grid = tuple(grid)
    if not grid:
        raise DomainError("stabilizer_search requires a non-empty grid")
    windows = sorted(set(int(l) for l in candidate_windows))
    if not windows or windows[0] < 1:
        raise DomainError("candidate windows must be positive integers")
    qw = as_qweight(q)
    if qw.regime is not Regime.CONTRACTIVE:
        raise DomainError("stabilizer_search requires |q| > 1/2")
    qv = qw.q.value

    targets = []
    for t in grid:
        fr = as_dyadic_fraction(t if isinstance(t, (Fraction, int)) else as_scalar(t))
        base = takagi_dyadic_exact(fr, qw.a).value if fr is not None else takagi_series(
            float(t), qw.a
        ).value
        targets.append(-qv * base)
    t_norm = max(abs(v) for v in targets)
    if t_norm == 0:
        t_norm = 1
    targets = [v / t_norm for v in targets]

    partials = orbit_partial_sums(omega, qw, windows[-1])
    entries = []
    for l in windows:
        curve = phi_curve(partials[: l + 1], l, grid, Normalization.MAX_ABS)
        dist = max(abs(v.value - tv) for v, tv in zip(curve.values, targets))
        entries.append((l, float(dist)))
    best_l, best_distance = min(entries, key=lambda e: (e[1], e[0]))
    return StabilizerReport(entries=tuple(entries), best_l=best_l, best_distance=best_distance)
