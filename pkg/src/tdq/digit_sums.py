"""Binary digits, weighted digital sums, and cumulative sums S_q(n).

S_q(n) is computed by three independent routes: literal summation (the
brute-force oracle), the closed form at powers of two, and a descent using
the shift recursions.  The routes must agree exactly in exact mode.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Sequence

from .errors import DomainError, ModeError
from .scalar import Mode, QWeight, Scalar, as_qweight, as_scalar


def binary_digits(n: int) -> list[int]:
    """LSB-first binary digits of n >= 0; empty list for n = 0."""
    if n < 0:
        raise DomainError("binary_digits requires n >= 0")
    bits = []
    while n:
        bits.append(n & 1)
        n >>= 1
    return bits


def digits_value(bits: Sequence[int]) -> int:
    v = 0
    for i, b in enumerate(bits):
        if b not in (0, 1):
            raise DomainError("digits must be 0 or 1")
        v += b << i
    return v


@dataclass(frozen=True)
class WeightSequence:
    """Digit weights gamma_i: q-geometric q^{i+1}, or an explicit list + tail."""

    q: Optional[QWeight] = None
    values: Optional[tuple[Scalar, ...]] = None
    tail: Optional[Scalar] = None

    @staticmethod
    def geometric(q) -> "WeightSequence":
        return WeightSequence(q=as_qweight(q))

    @staticmethod
    def explicit(values, tail) -> "WeightSequence":
        vals = tuple(as_scalar(v) for v in values)
        return WeightSequence(values=vals, tail=as_scalar(tail))

    @staticmethod
    def constant(c) -> "WeightSequence":
        return WeightSequence.explicit((), c)

    def weight(self, i: int) -> Scalar:
        if self.q is not None:
            return self.q.q ** (i + 1)
        assert self.values is not None and self.tail is not None
        return self.values[i] if i < len(self.values) else self.tail

    @property
    def limit(self) -> Optional[Scalar]:
        """lim gamma_i, or None if it does not exist."""
        if self.q is None:
            return self.tail
        q = self.q.q
        if q.modulus() < 1:
            return Scalar.zero(q.mode)
        if q.value == 1:
            return Scalar.one(q.mode)
        return None


# ---------------------------------------------------------------------------
# payload-level helpers (used by verification sweeps; q given as Fraction /
# float / complex)


def sq_payload(n: int, qv):
    total = 0 * qv
    w = qv
    while n:
        if n & 1:
            total = total + w
        n >>= 1
        if n:
            w = w * qv
    return total


def S_pow2_payload(k: int, qv):
    if qv == 1:
        return (0 * qv) + k * (1 << (k - 1)) if k else 0 * qv
    return qv * (1 - qv ** k) / (1 - qv) * (1 << (k - 1)) if k else 0 * qv


def S_rec_payload(n: int, qv):
    if n < 1:
        raise DomainError("S_q is defined for n >= 1")
    if n == 1:
        return 0 * qv
    if n & (n - 1) == 0:
        return S_pow2_payload(n.bit_length() - 1, qv)
    if n & 1 == 0:
        half = n >> 1
        return 2 * qv * S_rec_payload(half, qv) + half * qv
    k = n.bit_length() - 1
    m = n - (1 << k)
    return S_pow2_payload(k, qv) + S_rec_payload(m, qv) + m * qv ** (k + 1)


def iter_S_direct(n_max: int, qv) -> Iterator:
    """Yield (n, S_q(n)) payloads for n = 1 .. n_max by literal accumulation."""
    total = 0 * qv
    for n in range(1, n_max + 1):
        if n > 1:
            total = total + sq_payload(n - 1, qv)
        yield n, total


def S_partials_payload(n_max: int, qv) -> list:
    """Payload list P with P[j] = S_q(j) for j = 0 .. n_max (P[0] = P[1] = 0)."""
    out = [0 * qv]
    total = 0 * qv
    for j in range(1, n_max + 1):
        if j > 1:
            total = total + sq_payload(j - 1, qv)
        out.append(total)
    return out


# ---------------------------------------------------------------------------
# public API


def s_q(n: int, q) -> Scalar:
    """The q-weighted digit sum: sum of omega_i * q^{i+1} over set bits of n."""
    if n < 0:
        raise DomainError("s_q requires n >= 0")
    qw = as_qweight(q)
    return Scalar(qw.q.mode, sq_payload(n, qw.q.value))


def weighted_digit_sum(n: int, gamma: WeightSequence) -> Scalar:
    if n < 0:
        raise DomainError("weighted_digit_sum requires n >= 0")
    total = gamma.weight(0) * 0
    for i, b in enumerate(binary_digits(n)):
        if b:
            total = total + gamma.weight(i)
    return total


def S_q_direct(n: int, q) -> Scalar:
    """Brute-force oracle: sum of s_q(k) for k = 0 .. n-1."""
    if n < 1:
        raise DomainError("S_q is defined for n >= 1")
    qw = as_qweight(q)
    qv = qw.q.value
    total = 0 * qv
    for k in range(1, n):
        total = total + sq_payload(k, qv)
    return Scalar(qw.q.mode, total)


def S_q_pow2(k: int, q) -> Scalar:
    """Closed form S_q(2^k) = q (1 - q^k)/(1 - q) 2^{k-1}; limit k 2^{k-1} at q = 1."""
    if k < 0:
        raise DomainError("S_q_pow2 requires k >= 0")
    qw = as_qweight(q)
    return Scalar(qw.q.mode, S_pow2_payload(k, qw.q.value))


def S_q_recursive(n: int, q) -> Scalar:
    """S_q(n) via the shift recursions; equals S_q_direct(n) exactly."""
    qw = as_qweight(q)
    return Scalar(qw.q.mode, S_rec_payload(n, qw.q.value))


def popcount_partial_sum(n: int) -> int:
    """S(n) = sum of popcounts of 0 .. n-1 (classic unweighted case)."""
    if n < 1:
        raise DomainError("S is defined for n >= 1")
    return sum(k.bit_count() for k in range(n))
