import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from banachdiff.algebra import GridAlgebra, MatrixAlgebra, RealAlgebra
from banachdiff.equations import CoefficientSequence, LinearArgEquation, NonlinearitySpec, iterate
from banachdiff.errors import ConfigError, RootRejected
from banachdiff.reduction import reduce_order
from banachdiff.scenarios import (
    make_c01,
    make_dham,
    make_gla0,
    make_gla1,
    make_gla2,
    make_th,
    random_contractive,
    random_init,
)
from banachdiff.stability import (
    COROLLARY1,
    COROLLARY2,
    THEOREM1A,
    THEOREM1B,
    THEOREM2,
    alpha_direct,
    alpha_factored,
    check,
    check_corollary1,
    check_corollary2,
    check_theorem1,
    convergence_horizon,
    sigma_bound_er,
    sigma_bound_factored,
    sigma_bound_wc,
    theorem2_factor,
)

REAL = RealAlgebra()


def _const(sigma):
    return NonlinearitySpec("pointwise_tanh", sigma)


def test_alpha_direct_examples():
    eq = LinearArgEquation(REAL, (0.3, 0.0), (0.0, 0.0), NonlinearitySpec("linear_scale", 0.5))
    assert alpha_direct(eq) == pytest.approx(0.3)
    assert alpha_direct(make_dham(0.5, 1, 0.6)) == pytest.approx(0.5 + 0.6 * 1.5)
    gla2 = make_gla2(0.5, 0.4, NonlinearitySpec("pointwise_sin", 0.3))
    assert gla2.a[1] == pytest.approx(-0.04)
    assert alpha_direct(gla2) == pytest.approx(0.96)


def test_alpha_factored_examples():
    red = reduce_order(make_dham(0.5, 2, 0.6), 0.5)
    assert alpha_factored(red, 0.6) == pytest.approx(0.9)
    eq = make_gla2(0.7, 0.4, _const(0.2))
    assert alpha_factored(reduce_order(eq, 0.4), 0.2) == pytest.approx(abs(0.7 - 0.4) + 0.2)


def test_alpha_factored_single_lag_shape_is_sigma_times_q_sum():
    g = _const(0.3)
    eq = make_gla0(REAL, 0.6, [1.0, -0.2, 0.5], g)
    red = reduce_order(eq, 0.6)
    assert all(p_i == 0 for p_i in red.p)
    assert alpha_factored(red, 0.3) == pytest.approx(0.3 * sum(abs(q) for q in red.q), rel=1e-15)


def test_direct_branch_verdict():
    rep = check_theorem1(make_gla2(0.5, 0.4, NonlinearitySpec("pointwise_sin", 0.3)))
    assert THEOREM1A in rep.verdicts
    assert rep.direct_holds


def test_factored_branch_only():
    rep = check_theorem1(make_dham(0.5, 2, 0.6))
    assert rep.alpha_direct == pytest.approx(1.25)
    assert not rep.direct_holds
    assert rep.alpha_factored == pytest.approx(0.9)
    assert rep.verdicts == [THEOREM1B]
    assert rep.concluded


def test_both_bounds_failing_is_inconclusive():
    eq = make_gla2(0.9, 0.4, _const(0.9))
    rep = check_theorem1(eq)
    assert rep.alpha_direct >= 1 and rep.alpha_factored >= 1
    assert rep.verdicts == [] and rep.verdict == "none" and not rep.concluded


def test_root_outside_unit_ball_is_inconclusive():
    eq = make_gla2(1.3, 1.2, _const(0.05))
    rep = check_theorem1(eq)
    assert rep.alpha_factored < 1
    assert not rep.factored_holds


def test_branch_check_propagates_root_rejection():
    with pytest.raises(RootRejected):
        check_theorem1(make_dham(0.5, 2, 0.6), rho=0.51)


def test_single_lag_sum_for_delayed_tanh():
    for a, k in [(0.5, 2), (0.3, 4), (-0.7, 3)]:
        rep = check_corollary1(make_dham(a, k, 0.4))
        assert rep.residual <= 1e-15
        assert rep.q_sum == pytest.approx((1 - abs(a) ** k) / (1 - abs(a)), rel=1e-14)
    rep = check_corollary1(make_dham(0.5, 2, 0.6))
    assert rep.q_sum == pytest.approx(1.5)
    assert rep.holds


def test_single_lag_perturbed_last_coefficient_fails():
    eq = make_dham(0.5, 2, 0.6)
    bad = LinearArgEquation(REAL, eq.a, eq.b[:-1] + (eq.b[-1] + 0.01,), eq.g)
    rep = check_corollary1(bad)
    assert rep.residual == pytest.approx(0.01)
    assert not rep.root_ok and not rep.holds


def test_single_lag_shape_violation():
    with pytest.raises(ConfigError):
        check_corollary1(make_gla2(0.5, 0.4, _const(0.3)))


def test_difference_argument_second_order_conditions():
    # b unit, |b| < 1, a_0 b + a_1 = b^2, |a_0 - b| + sigma < 1
    for a0, b, sigma in [(0.5, 0.4, 0.3), (0.9, 0.2, 0.25), (-0.3, 0.6, 0.2), (0.9, 0.2, 0.35)]:
        eq = make_gla2(a0, b, _const(sigma))
        rep = check_corollary2(eq)
        assert rep.p_sum == pytest.approx(abs(a0 - b))
        expected = b != 0 and abs(b) < 1 and abs(a0 * b + eq.a[1] - b * b) <= 1e-9 and abs(a0 - b) + sigma < 1
        assert rep.holds == expected


def test_difference_argument_integral_example():
    eq = make_c01(1.5, 0.5, 0.4)
    rep = check_corollary2(eq)
    assert rep.p_sum == pytest.approx((1.5 - 0.5) / 2, abs=1e-12)
    assert rep.b_norm == pytest.approx(0.5)
    assert rep.holds
    assert not check_corollary2(eq, sigma=0.5).holds
    assert check_corollary2(eq, sigma=0.499).holds


def test_difference_argument_boundary_is_excluded():
    eq = make_gla2(0.5, 0.25, _const(0.75))
    rep = check_corollary2(eq)
    assert rep.p_sum == 1 - 0.75
    assert not rep.holds


def test_difference_argument_shape_violation():
    with pytest.raises(ConfigError):
        check_corollary2(make_dham(0.5, 2, 0.6))


def test_sigma_bounds():
    assert sigma_bound_er(0.5, 2).value == pytest.approx(2 / 3)
    assert sigma_bound_wc(make_dham(0.5, 2, 0.6)).value == pytest.approx(0.4)
    assert sigma_bound_er(1.0, 2).valid is False
    # first order: the factored range gives 1, the direct range (1-|a|)/(1+|a|)
    for a in (0.1, 0.5, 0.9):
        er = sigma_bound_er(a, 1).value
        wc = sigma_bound_wc(make_dham(a, 1, 0.1)).value
        assert er == 1.0
        assert wc == pytest.approx((1 - a) / (1 + a))
        assert er > wc


def test_sigma_bound_direct_matches_solved_form():
    # with a_1 = b^2 - a_0 b the direct bound solves to (1 - |a_0| - |b||a_0 - b|)/(1 + |b|)
    for a0, b in [(0.5, 0.4), (0.2, 0.6), (-0.3, 0.5)]:
        eq = make_gla2(a0, b, _const(0.1))
        expected = (1 - abs(a0) - abs(b) * abs(a0 - b)) / (1 + abs(b))
        assert sigma_bound_wc(eq).value == pytest.approx(expected, rel=1e-12)
        red = reduce_order(eq, b)
        assert sigma_bound_factored(red).value == pytest.approx(1 - abs(a0 - b))
        # never smaller; equal only when a_0 and b have opposite signs
        assert sigma_bound_factored(red).value >= sigma_bound_wc(eq).value - 1e-15
        if a0 * b > 0:
            assert sigma_bound_factored(red).value > sigma_bound_wc(eq).value


def test_theorem2_factor_is_h_map():
    eq = make_th(-1.0, 0.5, 1.2)
    fac = theorem2_factor(eq)
    assert fac.k == 0
    assert fac.a[0] == pytest.approx(-1.0 - 0.5)
    assert fac.b[0] == pytest.approx(1.0)
    t = 1.0
    assert fac.a[0] * t + fac.g(REAL, 0, fac.b[0] * t) == pytest.approx(-1.5 + 1.2 * math.tanh(1.0))


def test_theorem2_factor_pure_nonlinearity():
    fac = theorem2_factor(make_gla2(0.4, 0.4, _const(0.5)))
    assert fac.a[0] == 0.0


def test_theorem2_factor_root_rejection():
    eq = make_gla2(0.5, 0.4, _const(0.5))
    bad = LinearArgEquation(REAL, (eq.a[0], eq.a[1] + 1e-3), eq.b, eq.g)
    with pytest.raises(RootRejected):
        theorem2_factor(bad, tol=1e-9)


def test_check_aggregate_delayed_tanh():
    rep = check(make_dham(0.5, 2, 0.6))
    assert rep.verdicts == [THEOREM1B, COROLLARY1]
    assert rep.sigma_bounds["single_lag"].value == pytest.approx(2 / 3)
    assert rep.sigma_bounds["direct"].value == pytest.approx(0.4)
    assert rep.sigma_bounds["factored"].value == pytest.approx(2 / 3)


def test_check_aggregate_tanh_cycle_model_is_conditional():
    rep = check(make_th(-0.3, 0.5, 1.1))
    assert not rep.concluded
    assert THEOREM2 in rep.verdicts


def test_check_aggregate_integral_example():
    rep = check(make_c01(1.5, 0.5, 0.4))
    assert COROLLARY2 in rep.verdicts and rep.concluded


# -- properties ---------------------------------------------------------------

def _family(alg):
    return "norm_saturated" if alg.kind in ("matrix", "complex") else "pointwise_tanh"


@given(seed=st.integers(0, 2**32 - 1), s1=st.floats(0.01, 2.0), s2=st.floats(0.01, 2.0))
@settings(max_examples=60, deadline=None)
def test_increasing_sigma_never_helps(seed, s1, s2):
    lo, hi = sorted((s1, s2))
    rng = np.random.default_rng(seed)
    a = float(rng.uniform(-0.9, 0.9))
    b = float(rng.uniform(0.05, 0.95))
    k = int(rng.integers(1, 4))
    for eq_lo, eq_hi in [
        (make_dham(a if a else 0.5, k, lo), make_dham(a if a else 0.5, k, hi)),
        (make_gla2(a, b, _const(lo)), make_gla2(a, b, _const(hi))),
    ]:
        r_lo, r_hi = check(eq_lo), check(eq_hi)
        assert not (r_hi.direct_holds and not r_lo.direct_holds)
        assert not (r_hi.factored_holds and not r_lo.factored_holds)
        for name in r_hi.corollary_checks:
            assert not (r_hi.corollary_checks[name].holds and not r_lo.corollary_checks[name].holds)


def _verdict_cases():
    rng = np.random.default_rng(2024)
    cases = [make_dham(0.5, 2, 0.6), make_c01(1.5, 0.5, 0.4, m=41),
             make_gla2(0.5, 0.4, NonlinearitySpec("pointwise_sin", 0.3))]
    for alg in (REAL, MatrixAlgebra(2), GridAlgebra(21)):
        cases.append(random_contractive(alg, rng))
    alg = MatrixAlgebra(2)
    g = NonlinearitySpec("norm_saturated", 0.2)
    cases.append(make_gla1(alg, [alg.scale(0.2, alg.random_element(rng))], alg.constant(0.5), g))
    return cases


@pytest.mark.parametrize("eq", _verdict_cases(), ids=lambda e: f"{e.name}-{e.alg.kind}")
def test_positive_verdict_is_confirmed_by_simulation(eq):
    rep = check(eq)
    assert rep.concluded
    rng = np.random.default_rng(7)
    for _ in range(20):
        init = random_init(eq.alg, eq.order, rng, scale=3.0)
        n = convergence_horizon(rep, eq, init, eps=1e-6, n_max=5000)
        assert n is not None
        traj = iterate(eq, init, n)
        assert traj.norms[-1] < 1e-6
