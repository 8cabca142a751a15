"""Sampled checkers: axioms, s-convexity, doubling constants, Fatou."""

import numpy as np
import pytest

from rhofix import (
    INVALID_FUNCTIONALS,
    InvalidModularError,
    ModularSpec,
    NamedFunctional,
    Phi,
    PointSampler,
    check_fatou_sampled,
    check_modular_axioms,
    check_s_convexity,
    delta2_type_estimate,
    exact_doubling_constant,
    sine_bump,
    sign_skewed,
)

VALID = [
    ModularSpec.p_power(0.5, 3),
    ModularSpec.p_power(1.0, 3),
    ModularSpec.p_power(2.0, 3),
    ModularSpec.weighted_sum(2.0, [0.5, 1.5, 3.0]),
    ModularSpec.orlicz(Phi.POWER, 4, p=2.0),
    ModularSpec.orlicz(Phi.EXP_MINUS_ONE, 4),
    ModularSpec.orlicz(Phi.U_LOG, 4),
]


def test_sampler_is_deterministic_per_seed():
    a = PointSampler(3, seed=9).points(100)
    b = PointSampler(3, seed=9).points(100)
    c = PointSampler(3, seed=10).points(100)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_sampler_directions_have_unit_sup_norm():
    d = PointSampler(4, seed=1).directions(200)
    assert np.allclose(np.max(np.abs(d), axis=1), 1.0)


@pytest.mark.parametrize("m", VALID, ids=lambda m: f"{m.family.value}-{m.phi or m.p}")
def test_axioms_pass_on_valid_families(m):
    rep = check_modular_axioms(m, PointSampler(m.dim, seed=2024), 10_000)
    assert rep.passed
    assert rep.max_slack_violation == 0.0


@pytest.mark.parametrize("name", sorted(INVALID_FUNCTIONALS))
def test_axioms_catch_planted_invalid(name):
    fn, target = INVALID_FUNCTIONALS[name]
    rep = check_modular_axioms(fn, PointSampler(1, seed=2024), 10_000)
    assert target in rep.violated_axioms()
    assert rep.max_slack_violation > 0.0


def test_hand_witness_sine_bump():
    # x = 0, y = 1, a = 0.5: lhs = 1.05 against rhs = 0.1
    assert sine_bump(np.array([0.5])) == pytest.approx(1.05)
    assert sine_bump(np.array([0.0])) == 0.0
    assert sine_bump(np.array([1.0])) == pytest.approx(0.1)


def test_hand_witness_sign_skewed():
    assert sign_skewed(np.array([1.0])) == 1.0
    assert sign_skewed(np.array([-1.0])) == 2.0


def test_axiom_report_has_witnesses():
    fn, _ = INVALID_FUNCTIONALS["sine_bump"]
    rep = check_modular_axioms(fn, PointSampler(1, seed=7), 5_000)
    v = rep.violations[0]
    assert v.axiom == "convexity"
    assert len(v.points) == 2 and v.lhs > v.rhs


def test_axioms_require_at_least_one_trial():
    with pytest.raises(ValueError):
        check_modular_axioms(VALID[0], PointSampler(3, 0), 0)


# --- s-convexity -----------------------------------------------------------

def test_s_convexity_holds_for_convex_families():
    for m in (ModularSpec.p_power(1.0, 2), ModularSpec.p_power(2.0, 2)):
        rep = check_s_convexity(m, 1.0, PointSampler(2, seed=5), 10_000)
        assert rep.passed


def test_s_convexity_fails_for_sqrt_power():
    # hand witness: x = 1, y = 0, a = 0.5 gives sqrt(0.5) > 0.5
    m = ModularSpec.p_power(0.5, 1)
    rep = check_s_convexity(m, 1.0, PointSampler(1, seed=5), 10_000)
    assert not rep.passed
    assert rep.violations[0].axiom == "s_convexity"


def test_s_convexity_handles_infinite_rho_samples():
    # the exponential modular overflows to +inf at sampled magnitudes ~1e3;
    # a vanished coefficient must remove its term rather than produce nan
    m = ModularSpec.orlicz(Phi.EXP_MINUS_ONE, 2)
    rep = check_s_convexity(m, 1.0, PointSampler(2, seed=8), 5_000)
    assert rep.passed


def test_s_convexity_validates_s():
    with pytest.raises(ValueError):
        check_s_convexity(VALID[0], 0.0, PointSampler(3, 0), 10)
    with pytest.raises(ValueError):
        check_s_convexity(VALID[0], 1.5, PointSampler(3, 0), 10)


# --- doubling constant -----------------------------------------------------

@pytest.mark.parametrize("p", [0.5, 1.0, 2.0])
def test_delta2_exact_for_p_power(p):
    m = ModularSpec.p_power(p, 3)
    est = delta2_type_estimate(m, PointSampler(3, seed=3), 2_000)
    assert est.constant == pytest.approx(2.0**p, abs=1e-6)
    assert not est.unbounded


def test_delta2_flags_exponential_orlicz():
    m = ModularSpec.orlicz(Phi.EXP_MINUS_ONE, 4)
    est = delta2_type_estimate(m, PointSampler(4, seed=3), 2_000)
    assert est.unbounded


def test_delta2_u_log_bounded_near_four():
    m = ModularSpec.orlicz(Phi.U_LOG, 4)
    est = delta2_type_estimate(m, PointSampler(4, seed=3), 2_000)
    assert not est.unbounded
    assert est.constant < 4.0 + 1e-9


def test_delta2_invalid_modular_raises():
    fn, _ = INVALID_FUNCTIONALS["dead_zone"]
    with pytest.raises(InvalidModularError):
        delta2_type_estimate(fn, PointSampler(1, seed=3), 500)


def test_exact_doubling_constant():
    assert exact_doubling_constant(ModularSpec.p_power(2.0, 2)) == 4.0
    assert exact_doubling_constant(ModularSpec.weighted_sum(1.0, [1.0, 2.0])) == 2.0
    assert exact_doubling_constant(ModularSpec.orlicz(Phi.POWER, 2, p=3.0)) == 8.0
    assert exact_doubling_constant(ModularSpec.orlicz(Phi.U_LOG, 2)) is None


# --- Fatou -----------------------------------------------------------------

def test_fatou_constant_sequence_is_equality():
    m = ModularSpec.p_power(1.0, 2)
    rep = check_fatou_sampled(m, [1.0, 2.0], [0.5, 0.5], 0.5, 20,
                              directions=[(np.zeros(2), np.zeros(2))])
    assert rep.passed


def test_fatou_closed_form_decreasing_sequence():
    # p = 2, x = 1, y = 0, u = 1, v = 0: rho(x_n - y_n) = (1 + 0.5**n)**2 -> 1
    m = ModularSpec.p_power(2.0, 1)
    rep = check_fatou_sampled(m, [1.0], [0.0], 0.5, 30, directions=[([1.0], [0.0])])
    assert rep.passed


def test_fatou_zero_gap_trivial():
    m = ModularSpec.p_power(1.0, 1)
    rep = check_fatou_sampled(m, [2.0], [2.0], 0.5, 10, directions=[([1.0], [1.0])])
    assert rep.passed


@pytest.mark.parametrize("m", VALID, ids=lambda m: f"{m.family.value}-{m.phi or m.p}")
def test_fatou_sampled_passes_on_valid_families(m):
    s = PointSampler(m.dim, seed=17)
    rep = check_fatou_sampled(m, s.point(), s.point(), 0.5, 24, sampler=s)
    assert rep.passed


def test_fatou_catches_planted_jump():
    # rho jumps up exactly at |u| = 1, so a sequence approaching from above
    # has liminf 1 while rho at the limit is 2: a genuine Fatou failure
    def heavy_core(x):
        u = abs(float(x[0]))
        return 2.0 * u if u <= 1.0 else u

    fn = NamedFunctional("heavy_core", heavy_core, dim=1)
    rep = check_fatou_sampled(fn, [1.0], [0.0], 0.5, 20, directions=[([1.0], [0.0])])
    assert not rep.passed
    assert rep.violations[0].axiom == "fatou"


def test_fatou_validates_ratio():
    with pytest.raises(ValueError):
        check_fatou_sampled(VALID[0], np.ones(3), np.zeros(3), 1.0, 10,
                            directions=[(np.ones(3), np.ones(3))])
