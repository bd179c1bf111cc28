"""Acceptance gate: eleven criteria, one pass/fail line each.

Each test prints its verdict line (visible with ``pytest -s`` or on failure)
and asserts it, so ``pytest -v`` shows exactly one PASSED/FAILED row per
criterion.  Tolerances are part of the contract and are pinned here.
"""

import random
from fractions import Fraction

import pytest

from tdq.digit_sums import (
    S_pow2_payload,
    S_rec_payload,
    iter_S_direct,
)
from tdq.odometer import OdometerPoint, birkhoff_deviation, prop2_exact
from tdq.takagi import derham_eval, takagi_dyadic_exact, takagi_series, takagi_system, tilde_F_q
from tdq.trollope import classic_formula, dyadic_formula, theorem1_rhs, vdc_star_discrepancy


def _verdict(ok: bool, label: str, detail: str) -> None:
    print(f"[{'PASS' if ok else 'FAIL'}] {label}: {detail}")
    assert ok, f"{label}: {detail}"


def test_criterion_01_exact_theorem1_sweep():
    panel = [Fraction(2, 3), Fraction(3, 4), Fraction(-2, 3), Fraction(-1),
             Fraction(3, 2), Fraction(4), Fraction(-3)]
    worst = Fraction(0)
    for q in panel:
        for n, s in iter_S_direct(4096, q):
            worst = max(worst, abs(theorem1_rhs(n, q).value - s / n))
    _verdict(worst == 0, "criterion 1",
             f"exact weighted-average identity sweep, 7 rational q, n<=4096, max residual {worst}")


def test_criterion_02_all_q_dyadic_sweep():
    panel = [Fraction(1, 2), Fraction(-1, 2), Fraction(1, 3), Fraction(2, 3),
             Fraction(-1), Fraction(3, 2)]
    worst = Fraction(0)
    for q in panel:
        for n, s in iter_S_direct(4096, q):
            worst = max(worst, abs(dyadic_formula(n, q).value - s / n))
    _verdict(worst == 0, "criterion 2",
             f"all-q dyadic formula sweep, 6 rational q, n<=4096, max residual {worst}")


def test_criterion_03_complex_sweep():
    worst = 0.0
    for q in (1j, 0.5 + 0.5j, 0.5 - 0.5j):
        for n, s in iter_S_direct(4096, q):
            worst = max(worst, abs(theorem1_rhs(n, q).value - s / n))
    _verdict(worst <= 1e-9, "criterion 3",
             f"complex sweep, 3 complex q, n<=4096, max residual {worst:.3g} (tol 1e-9)")


def test_criterion_04_limiting_curve_identity():
    worst_exact = Fraction(0)
    for q in (Fraction(2, 3), Fraction(-1), Fraction(3, 2)):
        for N in range(2, 13):
            worst_exact = max(worst_exact, prop2_exact(q, N).max_residual.value)
    worst_cplx = 0.0
    for q in (1j, 0.5 + 0.5j, 0.5 - 0.5j):
        for N in range(2, 13):
            worst_cplx = max(worst_cplx, prop2_exact(q, N).max_residual.value)
    ok = worst_exact == 0 and worst_cplx <= 1e-9
    _verdict(ok, "criterion 4",
             f"limiting fluctuation curve, N=2..12: exact residual {worst_exact}, "
             f"complex residual {worst_cplx:.3g} (tol 1e-9)")


def test_criterion_05_tilde_F_2_vanishes():
    worst = max(abs(tilde_F_q(j / 1024, Fraction(2)).value) for j in range(1025))
    _verdict(worst <= 1e-12, "criterion 5",
             f"q=2 periodic correction vanishes, 1025-point grid, max |value| {worst:.3g} (tol 1e-12)")


def test_criterion_06_parabola_oracle():
    bad = 0
    for j in range((1 << 12) + 1):
        x = Fraction(j, 1 << 12)
        if takagi_dyadic_exact(x, Fraction(1, 4)).value != 2 * x * (1 - x):
            bad += 1
    _verdict(bad == 0, "criterion 6",
             f"a=1/4 curve equals 2x(1-x) on all 4097 dyadics of depth 12, mismatches {bad}")


def test_criterion_07_classic_formula():
    worst = 0.0
    total = 0
    for n in range(1, 65537):
        if n > 1:
            total += (n - 1).bit_count()
        worst = max(worst, abs(classic_formula(n).value - total / n))
    _verdict(worst <= 1e-10, "criterion 7",
             f"classic digit-average formula, n<=65536, max |error| {worst:.3g} (tol 1e-10)")


def test_criterion_08_vdc_star_discrepancy():
    half = Fraction(1, 2)
    worst = Fraction(0)
    for n, s in iter_S_direct(4096, half):
        d = vdc_star_discrepancy(n).value
        worst = max(worst, abs((1 - d) / 2 - s / n))
    _verdict(worst == 0, "criterion 8",
             f"van der Corput discrepancy identity, n<=4096, max residual {worst}")


def test_criterion_09_route_agreement():
    rng = random.Random(20260823)
    worst_ratio = 0.0
    for _ in range(10_000):
        x = Fraction(rng.randrange(0, (1 << 12) + 1), 1 << 12)
        a = Fraction(rng.randrange(-31, 32), 32)
        if abs(a) >= 1:
            continue
        tol = 10.0 ** -rng.randrange(6, 14)
        err = abs(takagi_series(x, float(a), tol).value - float(takagi_dyadic_exact(x, a).value))
        worst_ratio = max(worst_ratio, err / tol)
    derham_ok = True
    sys_t = takagi_system(Fraction(2, 3))
    for j in range((1 << 12) + 1):
        x = Fraction(j, 1 << 12)
        got = derham_eval(sys_t, x)
        if got.error_bound != 0.0 or got.value.value != takagi_dyadic_exact(x, Fraction(2, 3)).value:
            derham_ok = False
            break
    ok = worst_ratio <= 1.0 and derham_ok
    _verdict(ok, "criterion 9",
             f"route agreement, 10^4 sampled (x,a,tol): worst error/tol {worst_ratio:.3g}; "
             f"digit-descent exact on depth<=12 dyadics: {derham_ok}")


def test_criterion_10_birkhoff_proxy():
    q = Fraction(2, 3)
    n = 1 << 20
    worst = 0.0
    for seed in range(10):
        rng = random.Random(seed)
        omega = OdometerPoint(tuple(rng.getrandbits(1) for _ in range(64)))
        worst = max(worst, abs(float(birkhoff_deviation(omega, float(q), n).value)))
    _verdict(worst < 0.01, "criterion 10",
             f"orbit-average deviation from 1, ten seeded starts, n=2^20, max |dev| {worst:.3g} (tol 0.01)")


def test_criterion_11_recursion_suite():
    panel = [Fraction(2, 3), Fraction(1, 2), Fraction(-1, 2), Fraction(1, 3),
             Fraction(-1), Fraction(1), Fraction(3, 2), Fraction(4), Fraction(-3)]
    worst = Fraction(0)
    for q in panel:
        for n, s in iter_S_direct(1 << 14, q):
            r = abs(S_rec_payload(n, q) - s)
            if n & (n - 1) == 0:
                r = max(r, abs(S_pow2_payload(n.bit_length() - 1, q) - s))
            worst = max(worst, r)
    _verdict(worst == 0, "criterion 11",
             f"recursive/closed-form/direct cumulative sums agree, 9 rational q incl. |q|<=1/2, "
             f"n<=2^14, max residual {worst}")
