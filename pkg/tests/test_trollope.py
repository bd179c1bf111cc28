import math
from fractions import Fraction

import pytest

from tdq.digit_sums import S_q_direct, WeightSequence, iter_S_direct, popcount_partial_sum
from tdq.errors import DomainError
from tdq.scalar import Scalar
from tdq.trollope import (
    classic_formula,
    dyadic_formula,
    larcher_residual,
    log_decompose,
    theorem1_rhs,
    vdc_star_discrepancy,
)


def test_log_decompose():
    d = log_decompose(6)
    assert (d.k, d.p) == (2, 4)
    assert d.x.to_fraction() == Fraction(1, 2)
    assert d.u == pytest.approx(math.log2(6) - 2)
    d1 = log_decompose(8, Fraction(2, 3))
    assert d1.r.value == Fraction(8, 27)
    with pytest.raises(DomainError):
        log_decompose(0)


@pytest.mark.parametrize("q", [Fraction(2, 3), Fraction(-2, 3), Fraction(3, 2), Fraction(-1)])
def test_theorem1_exact_small_sweep(q):
    for n, s in iter_S_direct(512, q):
        assert theorem1_rhs(n, q).value == s / n


def test_theorem1_pinned_value():
    # q = 2, n = 3: S_2(3)/3 = (s(1)+s(2))/3 = (2+4)/3 = 2
    assert theorem1_rhs(3, Fraction(2)).value == 2
    assert S_q_direct(3, Fraction(2)).value == 6


def test_theorem1_domain():
    with pytest.raises(DomainError):
        theorem1_rhs(5, Fraction(1))  # q = 1 excluded
    with pytest.raises(DomainError):
        theorem1_rhs(5, Fraction(1, 3))  # |q| <= 1/2 excluded
    with pytest.raises(DomainError):
        theorem1_rhs(0, Fraction(2, 3))


@pytest.mark.parametrize(
    "q",
    [Fraction(1, 2), Fraction(-1, 2), Fraction(1, 3), Fraction(2, 3), Fraction(-1), Fraction(3, 2)],
)
def test_dyadic_formula_all_q_small_sweep(q):
    # unlike the hat-F form this holds with no modulus constraint
    for n, s in iter_S_direct(512, q):
        assert dyadic_formula(n, q).value == s / n


def test_dyadic_formula_excludes_one():
    with pytest.raises(DomainError):
        dyadic_formula(5, Fraction(1))


def test_complex_formulas_agree_with_direct():
    for q in (1j, 0.5 + 0.5j, 0.5 - 0.5j):
        for n, s in iter_S_direct(256, q):
            assert abs(theorem1_rhs(n, q).value - s / n) < 1e-12
            assert abs(dyadic_formula(n, q).value - s / n) < 1e-12


def test_classic_formula_small():
    for n in range(1, 2048):
        expected = popcount_partial_sum(n) / n
        assert abs(classic_formula(n).value - expected) < 1e-12


def test_vdc_identity_and_example():
    # (1 - D*_n)/2 = S_{1/2}(n)/n, exactly
    assert vdc_star_discrepancy(3).value == Fraction(1, 2)
    half = Fraction(1, 2)
    for n, s in iter_S_direct(512, half):
        d = vdc_star_discrepancy(n).value
        assert (1 - d) / 2 == s / n


def test_larcher_constant_weights_residual_vanishes():
    gamma = WeightSequence.constant(1.0)
    for n in (3, 17, 100, 255):
        r = larcher_residual(n, gamma, 1e-10).value
        assert abs(r) <= n * 1e-9


def test_larcher_decaying_weights_trend():
    c = 1.0
    gamma = WeightSequence(
        values=tuple(Scalar.flt(c + 2.0**-i) for i in range(64)),
        tail=Scalar.flt(c),
    )
    small = abs(larcher_residual(1 << 6, gamma, 1e-10).value) / (1 << 6)
    big = abs(larcher_residual(1 << 10, gamma, 1e-10).value) / (1 << 10)
    assert big < small  # o(n): the per-n residual shrinks

    with pytest.raises(DomainError):
        larcher_residual(100, WeightSequence.geometric(Fraction(3, 2)), 1e-10)
