import cmath
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bevholt import Backend, ConfigError, DomainError, Model, Periodic, Sampled
from bevholt.symmetry import (
    build_alpha,
    build_beta,
    build_family,
    build_gamma,
    build_lambda,
    canonical_coordinate,
    characteristic_value,
    linearized_trajectory,
    symmetry_residual,
    zeta1_obstruction,
)

TWO_PERIODIC = Model(2, Periodic([F(1, 2), F(1, 3)]), Periodic([F(1, 2), F(2, 3)]))


# --- coefficient sequences ------------------------------------------------


def test_alpha_unit_a_is_constant():
    assert build_alpha(Model(3, 1, 5), [1, 1, 1], 12) == [1] * 13


def test_alpha_doubles_for_half():
    assert build_alpha(Model(1, F(1, 2), 1), [1], 8) == [2**n for n in range(9)]


def test_alpha_per_strand_products():
    alpha = build_alpha(TWO_PERIODIC, [1, 1], 7)
    assert alpha[0::2] == [1, 2, 4, 8]
    assert alpha[1::2] == [1, 3, 9, 27]


def test_beta_examples():
    assert build_beta(Model(2, 1, 3), [1, 1], 9) == [1] * 10
    assert build_beta(Model(1, F(1, 2), 1), [1], 6) == [F(1, 2**n) for n in range(7)]


def test_alpha_beta_product_is_strandwise_constant():
    seeds = [F(3, 2), -2]
    alpha = build_alpha(TWO_PERIODIC, seeds, 20)
    beta = build_beta(TWO_PERIODIC, seeds, 20)
    for n in range(21):
        assert alpha[n] * beta[n] == seeds[n % 2] ** 2


def test_lambda_modes():
    assert build_lambda(5, 0, 7) == [1] * 8
    assert build_lambda(4, 1, 8) == [1, 1j, -1, -1j, 1, 1j, -1, -1j, 1]
    assert build_lambda(2, 1, 4) == [1, -1, 1, -1, 1]
    assert build_lambda(3, 0, 2, Backend.RATIONAL) == [1, 1, 1]
    with pytest.raises(ConfigError):
        build_lambda(3, 1, 2, Backend.RATIONAL)
    with pytest.raises(DomainError):
        build_lambda(3, 3, 2)


@pytest.mark.parametrize("k", [2, 3, 5, 7])
def test_lambda_unit_modulus_and_k_periodic(k):
    for p in range(k):
        lam = build_lambda(k, p, 4 * k)
        for n in range(3 * k):
            assert abs(abs(lam[n]) - 1) < 1e-15
            assert lam[n + k] == lam[n]
            assert abs(lam[n] - cmath.exp(2j * cmath.pi * p * n / k)) < 1e-12


def test_gamma_homogeneous_case_is_beta():
    m = Model(2, Periodic([F(2, 3), -3]), 0)
    assert build_gamma(m, [1, F(1, 2)], 0, 15) == build_beta(m, [1, F(1, 2)], 15)


def test_gamma_first_order():
    # gamma[n+1] = gamma[n]/2 - 1
    assert build_gamma(Model(1, F(1, 2), 1), [0], 0, 3) == [0, -1, F(-3, 2), F(-7, 4)]


def test_gamma_unit_decrement():
    k = 3
    gamma = build_gamma(Model(k, 1, 1), [0] * k, 0, 30)
    for g, value in enumerate(gamma):
        assert value == -(g // k)


# --- characteristics ------------------------------------------------------


def test_characteristic_values():
    z2 = build_family(Model(1, 1, 1), "zeta2", [1], 4)
    assert characteristic_value(z2, 0, 3) == 9
    z1 = build_family(Model(1, F(1, 2), F(1, 2)), "zeta1", [1], 4)
    assert characteristic_value(z1, 0, 1) == 2
    z3 = build_family(Model(1, 1, 1), "zeta3", [0], 4)
    assert characteristic_value(z3, 0, 5) == 5


def test_characteristic_beyond_built_range():
    fam = build_family(Model(1, 1, 1), "zeta2", [1], 4)
    with pytest.raises(DomainError):
        characteristic_value(fam, 5, 1)


def test_unknown_family():
    with pytest.raises(ValueError):
        build_family(Model(1, 1, 1), "zeta4", [1], 3)


# --- residuals ------------------------------------------------------------


def test_zeta2_residual_vanishes():
    fam = build_family(TWO_PERIODIC, "zeta2", [F(2, 3), -5], 40)
    for n in range(30):
        for z in (F(-3), F(1, 7), F(9, 2)):
            assert symmetry_residual(TWO_PERIODIC, fam, n, z) == 0


def test_corrupted_beta_is_detected():
    fam = build_family(TWO_PERIODIC, "zeta2", [1, 1], 20)
    fam.coefficients["beta"][7] += 1
    assert symmetry_residual(TWO_PERIODIC, fam, 5, F(1, 2)) != 0


def test_residual_at_singular_point():
    m = Model(1, F(1, 2), -1)
    fam = build_family(m, "zeta2", [1], 5)
    with pytest.raises(DomainError):
        symmetry_residual(m, fam, 0, F(1, 2))


def _zeta1_residual_by_hand(m, alpha, n, z):
    k = m.k
    a, b, a2, b2 = m.a(n), m.b(n), m.a(n + k), m.b(n + k)
    return alpha[n] * z * (b2 + a2 * b) / (a * a2 * (a + b * z))


@pytest.mark.parametrize(
    "model",
    [Model(1, F(1, 2), F(1, 3)), Model(2, Periodic([3, F(-1, 4)]), Periodic([F(2, 5), 7])), Model(3, 4, -2)],
)
def test_zeta1_residual_matches_hand_expansion(model):
    fam = build_family(model, "zeta1", [1] * model.k, 30)
    alpha = fam.coefficients["alpha"]
    for n in range(20):
        for z in (F(-2), F(1, 3), F(5)):
            assert symmetry_residual(model, fam, n, z) == _zeta1_residual_by_hand(model, alpha, n, z)
    assert zeta1_obstruction(model, 10) == list(range(11))


@pytest.mark.parametrize("model", [Model(4, -1, F(7, 3)), Model(2, Periodic([-1, -1]), Periodic([2, F(-1, 5)])), Model(3, F(1, 2), 0)])
def test_zeta1_is_a_symmetry_when_side_condition_holds(model):
    fam = build_family(model, "zeta1", [1, 2, 3, 4][: model.k], 40)
    assert zeta1_obstruction(model, 30) == []
    for n in range(30):
        for z in (F(-2), F(1, 3), F(5)):
            try:
                assert symmetry_residual(model, fam, n, z) == 0
            except DomainError:
                pass


def test_zeta1_with_alternating_b():
    # B[n+1] = -A B[n] with A = 2
    m = Model(1, 2, Sampled(lambda n: F(3) * (-2) ** n, "3*(-2)^n", None, True))
    fam = build_family(m, "zeta1", [1], 25)
    assert zeta1_obstruction(m, 20) == []
    for n in range(20):
        assert symmetry_residual(m, fam, n, F(1, 5)) == 0


@pytest.mark.parametrize("k", [2, 3, 4])
def test_zeta3_complex_residuals(k):
    m = Model(k, Periodic([F(j + 2, 3) for j in range(k)]), Periodic([F(1, j + 1) for j in range(k)]), Backend.COMPLEX)
    for p in range(k):
        fam = build_family(m, "zeta3", [F(1, 2)] * k, 70, p)
        worst = max(
            abs(symmetry_residual(m, fam, n, z)) for n in range(60) for z in (-3, -0.5, 0.25, 2, 7.5)
        )
        assert worst < 1e-10


def test_zeta3_p0_is_exact_in_rational_backend():
    fam = build_family(TWO_PERIODIC, "zeta3", [1, -2], 40, 0)
    for n in range(30):
        assert symmetry_residual(TWO_PERIODIC, fam, n, F(3, 4)) == 0


@given(
    st.fractions(min_value=-5, max_value=5, max_denominator=5),
    st.fractions(min_value=-5, max_value=5, max_denominator=5),
    st.integers(0, 30),
    st.fractions(min_value=-10, max_value=10, max_denominator=9),
)
def test_linearity_of_condition(c1, c2, n, z):
    m = TWO_PERIODIC
    f1 = build_family(m, "zeta2", [1, 2], 40)
    f2 = build_family(m, "zeta2", [F(-1, 3), 5], 40)
    broken = build_family(m, "zeta1", [1, 1], 40)
    if m.a(n) + m.b(n) * z == 0:
        return
    combo = c1 * f1 + c2 * f2
    assert symmetry_residual(m, combo, n, z) == 0
    mixed = c1 * f1 + c2 * broken
    assert symmetry_residual(m, mixed, n, z) == c1 * symmetry_residual(m, f1, n, z) + c2 * symmetry_residual(
        m, broken, n, z
    )


# --- canonical coordinate and linearisation -------------------------------


def test_canonical_coordinate_examples():
    m = Model(1, 1, 1)
    fam = build_family(m, "zeta2", [1], 3)
    assert canonical_coordinate(fam, 0, 1) == -1
    fam2 = build_family(m, "zeta2", [2], 3)
    assert canonical_coordinate(fam2, 0, F(-1, 2)) == 1
    for z in (F(3), F(-2, 7)):
        assert -fam2.coefficients["beta"][0] * canonical_coordinate(fam2, 0, z) == 1 / z
    with pytest.raises(DomainError):
        canonical_coordinate(fam, 0, 0)
    with pytest.raises(DomainError):
        canonical_coordinate(build_family(m, "zeta1", [1], 3), 0, 1)


def test_linearization_harmonic():
    report = linearized_trajectory(Model(1, 1, 1), [1], 8)
    assert report.values == tuple(range(1, 9))
    assert report.recurrence_holds and report.matches_direct


def test_linearization_fig3():
    ic = [1, 2, 1, F(-1, 2), 1, F(1, 2), F(-1, 4), F(1, 2)]
    report = linearized_trajectory(Model(8, -1, 12), ic, 48)
    s = report.values
    assert all(s[n + 8] == -s[n] + 12 for n in range(40))
    assert report.direct == s


def test_linearization_fixed_point_is_constant():
    report = linearized_trajectory(Model(2, F(1, 3), 4), [F(1, 6), F(1, 6)], 12)
    assert set(report.values) == {F(6)}  # B / (1 - A)


def test_linearization_zero_state_truncates():
    report = linearized_trajectory(Model(2, 2, 1), [1, 0], 10)
    assert report.truncated_at == 1
    assert report.values == (1,)


def test_linearization_float_uses_tolerance():
    m = Model(3, Sampled.from_formula("2 + sin(n)"), Sampled.from_formula("1 + cos(n)/2"), Backend.FLOAT)
    report = linearized_trajectory(m, [0.3, 1.2, 2.0], 60)
    assert not report.exact
    assert report.recurrence_holds and report.matches_direct
