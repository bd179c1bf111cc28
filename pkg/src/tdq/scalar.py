"""Numeric tower used throughout the package.

Three explicit modes: exact big rationals (``fractions.Fraction``), double
floats, and double complex.  Arithmetic between mismatched modes raises
``ModeError``; promotion is explicit via :meth:`Scalar.promote`.  The module
also provides the sawtooth (distance to the nearest integer) and dyadic
rationals in the canonical "ending in all zeros" form.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Union

from .errors import DomainError, ModeError, ParseError

Payload = Union[Fraction, float, complex]


class Mode(enum.Enum):
    EXACT = "exact"
    FLOAT = "float"
    COMPLEX = "complex"


_MODE_ORDER = {Mode.EXACT: 0, Mode.FLOAT: 1, Mode.COMPLEX: 2}

_RATIONAL_RE = re.compile(r"^[+-]?[0-9]+(/[0-9]+)?$")


def _format_float(v: float) -> str:
    return format(v, ".17g")


@dataclass(frozen=True)
class Scalar:
    """A numeric value tagged with its mode.

    Exact payloads are always ``Fraction`` (lowest terms, positive
    denominator, which ``Fraction`` guarantees).  Plain Python ints coerce
    into any mode losslessly; everything else must match modes exactly.
    """

    mode: Mode
    value: Payload

    # -- construction -----------------------------------------------------

    @staticmethod
    def exact(v) -> "Scalar":
        return Scalar(Mode.EXACT, Fraction(v))

    @staticmethod
    def flt(v: float) -> "Scalar":
        return Scalar(Mode.FLOAT, float(v))

    @staticmethod
    def cplx(v: complex) -> "Scalar":
        return Scalar(Mode.COMPLEX, complex(v))

    @staticmethod
    def lift(v, mode: Mode) -> "Scalar":
        """Build a Scalar of the given mode from an int/Fraction/float/complex."""
        if mode is Mode.EXACT:
            if isinstance(v, (int, Fraction)):
                return Scalar(Mode.EXACT, Fraction(v))
            raise ModeError(f"cannot lift {type(v).__name__} into exact mode")
        if mode is Mode.FLOAT:
            if isinstance(v, complex):
                raise ModeError("cannot lift complex into float mode")
            return Scalar(Mode.FLOAT, float(v))
        if isinstance(v, Fraction):
            v = float(v)
        return Scalar(Mode.COMPLEX, complex(v))

    @staticmethod
    def zero(mode: Mode) -> "Scalar":
        return Scalar.lift(0, mode)

    @staticmethod
    def one(mode: Mode) -> "Scalar":
        return Scalar.lift(1, mode)

    # -- arithmetic --------------------------------------------------------

    def _other(self, other) -> Payload:
        if isinstance(other, Scalar):
            if other.mode is not self.mode:
                raise ModeError(
                    f"mode mismatch: {self.mode.value} vs {other.mode.value} "
                    "(promote explicitly)"
                )
            return other.value
        if isinstance(other, int):
            return Scalar.lift(other, self.mode).value
        raise ModeError(f"cannot combine Scalar with {type(other).__name__}")

    def __add__(self, other):
        return Scalar(self.mode, self.value + self._other(other))

    __radd__ = __add__

    def __sub__(self, other):
        return Scalar(self.mode, self.value - self._other(other))

    def __rsub__(self, other):
        return Scalar(self.mode, self._other(other) - self.value)

    def __mul__(self, other):
        return Scalar(self.mode, self.value * self._other(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return Scalar(self.mode, self.value / self._other(other))

    def __rtruediv__(self, other):
        return Scalar(self.mode, self._other(other) / self.value)

    def __neg__(self):
        return Scalar(self.mode, -self.value)

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise ModeError("Scalar exponents must be Python ints")
        return Scalar(self.mode, self.value ** k)

    # -- queries -------------------------------------------------------------

    def modulus(self):
        """|self| as a Fraction (exact mode) or float."""
        return abs(self.value)

    def is_zero(self) -> bool:
        return self.value == 0

    def promote(self, mode: Mode) -> "Scalar":
        """Explicit, possibly lossy, upward mode conversion."""
        if mode is self.mode:
            return self
        if _MODE_ORDER[mode] < _MODE_ORDER[self.mode]:
            raise ModeError(f"cannot demote {self.mode.value} to {mode.value}")
        return Scalar.lift(self.value, mode)

    def render(self) -> str:
        if self.mode is Mode.EXACT:
            return str(self.value)
        if self.mode is Mode.FLOAT:
            return _format_float(self.value)
        re_, im = self.value.real, self.value.imag
        sign = "+" if im >= 0 else "-"
        return f"{_format_float(re_)}{sign}{_format_float(abs(im))}i"

    def __str__(self) -> str:  # pragma: no cover - convenience
        return self.render()


def as_scalar(v) -> Scalar:
    """Coerce a plain Python number into a Scalar of the natural mode."""
    if isinstance(v, Scalar):
        return v
    if isinstance(v, (int, Fraction)):
        return Scalar.exact(v)
    if isinstance(v, float):
        return Scalar.flt(v)
    if isinstance(v, complex):
        return Scalar.cplx(v)
    if isinstance(v, DyadicRational):
        return v.to_scalar()
    raise ModeError(f"cannot interpret {type(v).__name__} as a Scalar")


def parse_scalar(text: str, mode: Mode) -> Scalar:
    """Parse scalar text for the requested mode.

    Grammar: rationals ``-?[0-9]+(/[0-9]+)?``, floats in decimal/scientific
    notation, complex ``RE(+|-)IMi`` with no spaces.
    """
    text = text.strip()
    if not text:
        raise ParseError("empty scalar text")
    if mode is Mode.EXACT:
        if not _RATIONAL_RE.match(text):
            raise ParseError(f"not a rational literal: {text!r}")
        try:
            return Scalar.exact(Fraction(text))
        except ZeroDivisionError:
            raise ParseError(f"zero denominator: {text!r}") from None
    if mode is Mode.FLOAT:
        try:
            return Scalar.flt(float(Fraction(text) if "/" in text else text))
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"not a float literal: {text!r}") from None
    # complex: reuse Python's parser with i -> j
    if " " in text:
        raise ParseError(f"complex literal must not contain spaces: {text!r}")
    try:
        return Scalar.cplx(complex(text.replace("i", "j").replace("I", "j")))
    except ValueError:
        raise ParseError(f"not a complex literal: {text!r}") from None


def infer_mode(text: str) -> Mode:
    """Pick the natural mode for scalar text: rational, complex, or float."""
    text = text.strip()
    if _RATIONAL_RE.match(text):
        return Mode.EXACT
    if "i" in text.lower() and "inf" not in text.lower():
        return Mode.COMPLEX
    return Mode.FLOAT


def int_pow(s, k: int) -> Scalar:
    """s**k for a non-negative integer k, exact in exact mode."""
    if k < 0:
        raise DomainError("int_pow exponent must be non-negative")
    s = as_scalar(s)
    return Scalar(s.mode, s.value ** k)


# -- sawtooth ----------------------------------------------------------------


def tau_frac(x: Fraction) -> Fraction:
    f = x - math.floor(x)
    return min(f, 1 - f)


def tau_float(x: float) -> float:
    f = x - math.floor(x)
    return min(f, 1.0 - f)


def tau(x) -> Scalar:
    """Distance from a real x to the nearest integer; exact on rationals."""
    if isinstance(x, DyadicRational):
        return Scalar.exact(tau_frac(x.to_fraction()))
    if isinstance(x, Scalar):
        if x.mode is Mode.COMPLEX:
            raise ModeError("tau is undefined for complex inputs")
        x = x.value
    if isinstance(x, (int, Fraction)):
        return Scalar.exact(tau_frac(Fraction(x)))
    if isinstance(x, float):
        return Scalar.flt(tau_float(x))
    raise ModeError(f"tau: unsupported input {type(x).__name__}")


# -- dyadic rationals ----------------------------------------------------------


@dataclass(frozen=True)
class DyadicRational:
    """x = integer_part + numerator / 2**exponent in canonical form.

    Canonical means numerator is odd and < 2**exponent, or numerator == 0 and
    exponent == 0 (the binary expansion ending in all zeros).
    """

    integer_part: int
    numerator: int
    exponent: int

    def __post_init__(self):
        if self.exponent < 0 or self.numerator < 0:
            raise DomainError("dyadic rational fields must be non-negative")
        if self.numerator == 0:
            if self.exponent != 0:
                raise DomainError("zero fractional part requires exponent 0")
        else:
            if self.numerator >= (1 << self.exponent) or self.numerator % 2 == 0:
                raise DomainError("dyadic rational not in canonical form")

    @staticmethod
    def from_fraction(fr: Fraction) -> "DyadicRational":
        den = fr.denominator
        if den & (den - 1):
            raise DomainError(f"{fr} is not a dyadic rational")
        ip = fr.numerator // den
        rem = fr - ip
        if rem == 0:
            return DyadicRational(ip, 0, 0)
        return DyadicRational(ip, rem.numerator, rem.denominator.bit_length() - 1)

    @staticmethod
    def of(x) -> "DyadicRational":
        if isinstance(x, DyadicRational):
            return x
        if isinstance(x, Scalar):
            if x.mode is not Mode.EXACT:
                raise ModeError("only exact scalars convert to dyadic rationals")
            x = x.value
        if isinstance(x, (int, Fraction)):
            return DyadicRational.from_fraction(Fraction(x))
        raise DomainError(f"cannot build a dyadic rational from {type(x).__name__}")

    def to_fraction(self) -> Fraction:
        return self.integer_part + Fraction(self.numerator, 1 << self.exponent)

    def to_scalar(self) -> Scalar:
        return Scalar.exact(self.to_fraction())


def as_dyadic_fraction(x) -> Fraction | None:
    """Return x as a Fraction if it is exactly a dyadic rational, else None."""
    if isinstance(x, DyadicRational):
        return x.to_fraction()
    if isinstance(x, Scalar):
        if x.mode is not Mode.EXACT:
            return None
        x = x.value
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, Fraction):
        return x if x.denominator & (x.denominator - 1) == 0 else None
    return None


# -- q weights ------------------------------------------------------------------


class Regime(enum.Enum):
    CONTRACTIVE = "contractive"   # |q| > 1/2, i.e. |a| < 1
    BOUNDARY = "boundary"         # |q| = 1/2
    EXPANDING = "expanding"       # |q| < 1/2


@dataclass(frozen=True)
class QWeight:
    """A weight parameter q together with a = 1/(2q) and its regime."""

    q: Scalar
    a: Scalar
    regime: Regime
    is_one: bool

    @staticmethod
    def of(q) -> "QWeight":
        q = as_scalar(q)
        if isinstance(q.value, QWeight):  # defensive; never constructed so
            raise ModeError("nested QWeight")
        if q.is_zero():
            raise DomainError("q = 0 has no associated a = 1/(2q)")
        a = Scalar(q.mode, 1 / (2 * q.value))
        m = q.modulus()
        half = Fraction(1, 2) if q.mode is Mode.EXACT else 0.5
        if m > half:
            regime = Regime.CONTRACTIVE
        elif m == half:
            regime = Regime.BOUNDARY
        else:
            regime = Regime.EXPANDING
        return QWeight(q=q, a=a, regime=regime, is_one=(q.value == 1))


def as_qweight(q) -> QWeight:
    if isinstance(q, QWeight):
        return q
    return QWeight.of(q)
