import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tdq.errors import DomainError, ModeError, ParseError
from tdq.scalar import (
    DyadicRational,
    Mode,
    QWeight,
    Regime,
    Scalar,
    as_scalar,
    int_pow,
    parse_scalar,
    tau,
)

rationals = st.fractions(max_denominator=10**6)


def test_tau_examples():
    assert tau(Fraction(1, 2)).value == Fraction(1, 2)
    assert tau(3).value == 0
    assert tau(Fraction(3, 4)).value == Fraction(1, 4)


def test_tau_float_and_complex():
    assert tau(0.75).value == pytest.approx(0.25)
    with pytest.raises(ModeError):
        tau(Scalar.cplx(1 + 1j))


@given(rationals, st.integers(-50, 50))
def test_tau_periodicity_and_symmetry(x, n):
    t = tau(x).value
    assert tau(x + n).value == t
    assert tau(-x).value == t
    assert tau(1 - x).value == t
    assert 0 <= t <= Fraction(1, 2)


@given(rationals, rationals, rationals)
def test_exact_field_axioms(a, b, c):
    sa, sb, sc = Scalar.exact(a), Scalar.exact(b), Scalar.exact(c)
    assert ((sa + sb) + sc).value == (sa + (sb + sc)).value
    assert (sa * (sb + sc)).value == (sa * sb + sa * sc).value
    assert (sa * sb).value == (sb * sa).value


def test_mode_mismatch_is_an_error():
    with pytest.raises(ModeError):
        Scalar.exact(1) + Scalar.flt(1.0)
    with pytest.raises(ModeError):
        Scalar.flt(1.0) * Scalar.cplx(1j)
    # ints coerce losslessly into any mode
    assert (Scalar.cplx(1j) * 2).value == 2j


def test_promotion_is_explicit_and_upward_only():
    s = Scalar.exact(Fraction(1, 3))
    assert s.promote(Mode.FLOAT).value == pytest.approx(1 / 3)
    assert s.promote(Mode.COMPLEX).value == pytest.approx(complex(1 / 3))
    with pytest.raises(ModeError):
        Scalar.flt(0.5).promote(Mode.EXACT)


def test_parse_examples():
    assert parse_scalar("2/3", Mode.EXACT).value == Fraction(2, 3)
    assert parse_scalar("0.5+0.5i", Mode.COMPLEX).value == 0.5 + 0.5j
    with pytest.raises(ParseError):
        parse_scalar("1/0", Mode.EXACT)
    with pytest.raises(ParseError):
        parse_scalar("0.5", Mode.EXACT)
    assert parse_scalar("i", Mode.COMPLEX).value == 1j


@given(rationals)
def test_parse_render_round_trip_exact(x):
    s = Scalar.exact(x)
    assert parse_scalar(s.render(), Mode.EXACT) == s


@given(st.floats(allow_nan=False, allow_infinity=False, width=64))
def test_parse_render_round_trip_float(x):
    s = Scalar.flt(x)
    assert parse_scalar(s.render(), Mode.FLOAT).value == x


def test_int_pow():
    assert int_pow(Fraction(2, 3), 2).value == Fraction(4, 9)
    assert int_pow(Scalar.flt(1.7), 0).value == 1.0
    assert int_pow(Scalar.cplx(1j), 2).value == -1
    with pytest.raises(DomainError):
        int_pow(2, -1)


@given(rationals)
def test_dyadic_round_trip(fr):
    num = fr.numerator
    d = DyadicRational.from_fraction(Fraction(num, 8))
    assert d.to_fraction() == Fraction(num, 8)
    again = DyadicRational.from_fraction(d.to_fraction())
    assert again == d


def test_dyadic_canonical_form():
    d = DyadicRational.from_fraction(Fraction(6, 8))
    assert (d.integer_part, d.numerator, d.exponent) == (0, 3, 2)
    assert DyadicRational.from_fraction(Fraction(-5, 4)) == DyadicRational(-2, 3, 2)
    with pytest.raises(DomainError):
        DyadicRational.from_fraction(Fraction(1, 3))
    with pytest.raises(DomainError):
        DyadicRational(0, 2, 2)  # even numerator not canonical


def test_qweight_regimes():
    assert QWeight.of(Fraction(2, 3)).regime is Regime.CONTRACTIVE
    assert QWeight.of(Fraction(1, 2)).regime is Regime.BOUNDARY
    assert QWeight.of(Fraction(-1, 3)).regime is Regime.EXPANDING
    assert QWeight.of(complex(0, 1)).regime is Regime.CONTRACTIVE
    assert QWeight.of(1).is_one
    with pytest.raises(DomainError):
        QWeight.of(0)


@given(rationals.filter(lambda q: q != 0))
def test_qweight_inverse_identity(q):
    w = QWeight.of(q)
    assert (w.a * 2 * w.q).value == 1


def test_as_scalar_modes():
    assert as_scalar(3).mode is Mode.EXACT
    assert as_scalar(0.5).mode is Mode.FLOAT
    assert as_scalar(1j).mode is Mode.COMPLEX
