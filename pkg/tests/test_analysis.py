import cmath
import math
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bevholt import Backend, DomainError, Model, Periodic, Sampled
from bevholt.analysis import (
    Certificate,
    Classification,
    certify_period,
    characteristic_roots,
    classify,
    cyclic_period,
    detect_period,
    equilibria,
    multiplier,
    periodic_initial_conditions,
    sufficient_stability,
)
from bevholt.figures import FIG3_IC, FIG4_IC, FIGURES
from bevholt.solver import iterate

STABLE = Classification.STABLE
UNSTABLE = Classification.UNSTABLE
NEUTRAL = Classification.NON_HYPERBOLIC


def _run(name):
    config = FIGURES[name]
    model = config.model()
    ic = config.initial_values(model)
    return model, ic, iterate(model, ic, config.horizon)


# --- equilibria and multipliers ------------------------------------------


def test_equilibria_examples():
    assert equilibria(Model(3, F(1, 2), F(1, 2))) == [0, 1]
    assert equilibria(Model(14, F(1, 4), 2)) == [0, F(3, 8)]
    assert equilibria(Model(2, 1, 5)) == [0]
    assert equilibria(Model(2, 3, 0)) == [0]
    with pytest.raises(DomainError):
        equilibria(Model(2, Periodic([1, 2]), 1))


def test_equilibria_are_fixed():
    m = Model(5, F(-7, 3), F(2, 9))
    for z in equilibria(m):
        assert z / (m.a(0) + m.b(0) * z) == z


def test_multiplier_examples():
    m = Model(14, 14, -2)
    assert multiplier(m, 0) == F(1, 14)
    assert multiplier(m, F(13, 2)) == 14
    with pytest.raises(DomainError):
        multiplier(m, 1)
    with pytest.raises(DomainError):
        multiplier(Model(1, 1, 1), -1)


def test_characteristic_roots_fig5():
    roots = characteristic_roots(Model(14, 14.0, -2.0, Backend.FLOAT), 0.0)
    assert len(roots) == 14
    for lam in roots:
        assert abs(abs(lam) - 14 ** (-1 / 14)) < 1e-12
        assert abs(lam**14 - 1 / 14) < 1e-12
        assert abs(abs(lam) ** 14 * 14 - 1) < 1e-12
    assert round(14 ** (-1 / 14), 4) == 0.8282


def test_characteristic_roots_unit_multiplier_are_roots_of_unity():
    roots = characteristic_roots(Model(6, 1, 3), 0)
    for q, lam in enumerate(roots):
        assert abs(lam - cmath.exp(2j * math.pi * q / 6)) < 1e-12


def test_characteristic_roots_fig6():
    roots = characteristic_roots(Model(14, F(1, 4), 2), F(3, 8))
    for lam in roots:
        assert abs(abs(lam) - 0.25 ** (1 / 14)) < 1e-12
    assert abs(0.25 ** (1 / 14) - 0.906) < 1e-3


def test_negative_multiplier_roots():
    # A = -2: multiplier at 0 is -1/2
    roots = characteristic_roots(Model(3, -2, 1), 0)
    for lam in roots:
        assert abs(lam**3 + 0.5) < 1e-12


@pytest.mark.parametrize(
    "a, b, expected",
    [
        (F(1, 2), 1, (UNSTABLE, STABLE)),
        (2, 1, (STABLE, UNSTABLE)),
        (14, -2, (STABLE, UNSTABLE)),
        (F(1, 4), 2, (UNSTABLE, STABLE)),
        (-1, 3, (NEUTRAL, NEUTRAL)),
        (-2, 1, (STABLE, UNSTABLE)),
    ],
)
def test_classify_examples(a, b, expected):
    m = Model(4, a, b)
    got = tuple(classify(m, z).classification for z in equilibria(m))
    assert got == expected


def test_classify_unit_growth():
    m = Model(2, 1, 1)
    assert [classify(m, z).classification for z in equilibria(m)] == [NEUTRAL]


def test_report_fields():
    report = classify(Model(3, 2, 1), 0)
    assert report.multiplier == F(1, 2)
    assert report.coefficients == (F(1, 2), 0, 0)
    assert all(abs(r - 0.5 ** (1 / 3)) < 1e-12 for r in report.root_moduli)


def test_sufficient_stability_examples():
    assert sufficient_stability([F(1, 2), F(1, 4)])
    assert not sufficient_stability([F(1, 2), F(1, 2)])
    assert not sufficient_stability([2])
    assert sufficient_stability([0, 0, 0.9])


@given(st.lists(st.fractions(min_value=-1, max_value=1, max_denominator=20), min_size=1, max_size=4))
def test_sufficient_stability_implies_roots_inside(p):
    # single-lag polynomial lam^k - p0: roots have modulus |p0|^(1/k)
    if sufficient_stability([p[0]]):
        for lam in _roots_of_single_lag(p[0], len(p)):
            assert abs(lam) < 1


def _roots_of_single_lag(p0, k):
    if p0 == 0:
        return [0j]
    r = abs(float(p0)) ** (1 / k)
    return [cmath.rect(r, (cmath.phase(complex(p0)) + 2 * math.pi * q) / k) for q in range(k)]


# --- dynamics agree with the classification -------------------------------


@settings(max_examples=40, deadline=None)
@given(
    st.sampled_from([F(-7, 2), F(-3), F(-1, 2), F(1, 3), F(3, 4), F(2), F(5)]),
    st.sampled_from([F(1, 2), F(1), F(2)]),
    st.integers(1, 4),
)
def test_stable_equilibrium_attracts_nearby_orbits(a, b, k):
    m = Model(k, float(a), float(b), Backend.FLOAT)
    for z in equilibria(Model(k, a, b)):
        if classify(Model(k, a, b), z).classification is not STABLE:
            continue
        start = [float(z) + 1e-4 * (j + 1) for j in range(k)]
        traj = iterate(m, start, 400 * k)
        tail = traj[-k:]
        assert traj.complete
        assert all(abs(v - float(z)) < 1e-6 for v in tail)


# --- periods ---------------------------------------------------------------


def test_detect_period_constant_sequence():
    report = detect_period([F(3)] * 10)
    assert report.minimal_period == 1
    assert report.certified_by is Certificate.EXACT


def test_detect_period_none():
    assert detect_period([1, 2, 3, 4, 5, 6]).minimal_period is None


def test_detect_period_needs_two_cycles():
    # 1 2 3 1 2: period 3 would need n >= 6
    assert detect_period([1, 2, 3, 1, 2]).minimal_period is None


def test_detect_period_fig1():
    _, _, traj = _run("fig1")
    report = detect_period(traj)
    assert report.minimal_period == 16
    assert report.certified_by is Certificate.TOLERANCE


def test_detect_period_fig3_fig4():
    assert detect_period(_run("fig3")[2]).minimal_period == 16
    assert detect_period(_run("fig4")[2]).minimal_period == 28


def test_detect_period_on_truncated_prefix():
    traj = iterate(Model(1, -1, 1), [1], 6)
    assert not traj.complete
    assert detect_period(traj).checked == 1


def test_cyclic_period():
    assert cyclic_period([1, 2, 1, 2]) == 2
    assert cyclic_period([1, 1, 1]) == 1
    assert cyclic_period([1, 2, 3]) == 3


def test_periodic_initial_conditions_exact():
    m = Model(2, Periodic([F(1, 2), F(1, 3)]), Periodic([1, 2]))
    assert periodic_initial_conditions(m) == [F(1, 2), F(1, 3)]


def test_periodic_initial_conditions_fig1():
    model = FIGURES["fig1"].model()
    seeds = periodic_initial_conditions(model)
    for j, z in enumerate(seeds):
        t = j * math.pi / 8
        assert abs(z - (-2 - math.sin(t)) / (2 + math.cos(t))) < 1e-15


def test_periodic_initial_conditions_rejects():
    with pytest.raises(DomainError):
        periodic_initial_conditions(Model(2, Periodic([1, 2]), 1))
    with pytest.raises(DomainError):
        periodic_initial_conditions(Model(2, 2, 0))
    with pytest.raises(DomainError):
        periodic_initial_conditions(Model(2, Sampled.from_formula("n + 2"), 1))


def test_fixed_point_seeds_give_k_periodic_orbit():
    m = Model(3, Periodic([F(1, 2), F(-4), F(5, 3)]), Periodic([F(2), F(1, 3), F(-1)]))
    seeds = periodic_initial_conditions(m)
    traj = iterate(m, seeds, 30)
    assert all(traj[n + 3] == traj[n] for n in range(27))


def test_certify_period_cases():
    m = Model(2, Periodic([F(1, 2), F(1, 3)]), Periodic([1, 2]))
    report = certify_period(m, [F(1, 2), F(1, 3)])
    assert (report.minimal_period, report.certified_by) == (2, Certificate.FIXED_POINT_SEED)

    m = Model(3, F(1, 2), 1)
    report = certify_period(m, [F(1, 2)] * 3)
    assert (report.minimal_period, report.certified_by) == (1, Certificate.CONSTANT_FIXED_POINT)

    fig3 = FIGURES["fig3"]
    report = certify_period(fig3.model(), fig3.initial_values())
    assert (report.minimal_period, report.certified_by) == (16, Certificate.ALTERNATING)
    fig4 = FIGURES["fig4"]
    assert certify_period(fig4.model(), fig4.initial_values()).minimal_period == 28

    assert certify_period(Model(2, 2, 1), [1, 1]) is None
    assert certify_period(Model(1, -1, 1), [1]) is None


def test_alternating_orbit_structure():
    for name, ic, b in (("fig3", FIG3_IC, 12), ("fig4", FIG4_IC, 15)):
        _, _, traj = _run(name)
        k = len(ic)
        seeds = [F(v) for v in ic]
        images = [z / (b * z - 1) for z in seeds]
        for n, value in enumerate(traj):
            block, j = divmod(n, k)
            assert value == (seeds if block % 2 == 0 else images)[j]


@settings(max_examples=50, deadline=None)
@given(
    st.integers(1, 4),
    st.fractions(min_value=-5, max_value=5, max_denominator=7).filter(lambda b: b != 0),
    st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=7), min_size=4, max_size=4),
)
def test_certify_agrees_with_detection(k, b, raw):
    m = Model(k, -1, b)
    ic = raw[:k]
    report = certify_period(m, ic)
    traj = iterate(m, ic, 8 * k)
    if report is None:
        return
    assert traj.complete
    assert detect_period(traj).minimal_period == report.minimal_period
