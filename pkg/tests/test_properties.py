"""Property-based checks of model invariants."""
import math

from hypothesis import assume, given, settings, strategies as st

from cyberins.closed_form import optimal_contract_A, optimal_contract_B, participation_margin
from cyberins.core_model import (
    BreachProbSpec,
    InvariantViolation,
    ScenarioAParams,
    ScenarioBParams,
    UtilitySpec,
    ValueScaleSpec,
    breach_prob,
    eval_utility,
    firm_best_response,
    firm_profit,
    outcome_weights_B,
    value_scale,
    wealth_A,
)

pos = st.floats(0.01, 100.0, allow_nan=False)
utilities = st.one_of(
    st.builds(UtilitySpec, st.just("exponential"), st.floats(1e-3, 2.0)),
    st.builds(UtilitySpec, st.just("power"), st.floats(0.05, 0.95)),
    st.builds(UtilitySpec, st.just("log-shifted"), st.floats(0.1, 50.0)),
)


@st.composite
def scenario_a(draw):
    alpha = draw(st.floats(0.01, 0.9))
    gamma = draw(st.floats(alpha + 0.005, 0.99))
    return ScenarioAParams(draw(pos), draw(st.floats(0.0, 500.0)), draw(pos), draw(pos), alpha, gamma, draw(utilities))


# ranges where p(k) stays resolvable in doubles up to k = 64
breach_specs = st.one_of(
    st.builds(lambda p1: BreachProbSpec("compound", p1=p1), st.floats(0.001, 0.3)),
    st.builds(
        lambda p_max, q: BreachProbSpec("saturating", p1=q * p_max, p_max=p_max),
        st.floats(0.01, 0.99),
        st.floats(0.02, 0.4),
    ),
)
wide_breach_specs = st.one_of(
    st.builds(lambda p1: BreachProbSpec("compound", p1=p1), st.floats(0.001, 0.99)),
    st.builds(
        lambda p1, gap: BreachProbSpec("saturating", p1=p1, p_max=min(p1 + gap, 0.999)),
        st.floats(0.001, 0.9),
        st.floats(1e-3, 0.9),
    ),
)
scale_specs = st.one_of(
    st.builds(lambda b: ValueScaleSpec("power", b), st.floats(0.01, 0.99)),
    st.builds(lambda c: ValueScaleSpec("log", c), st.floats(0.01, 5.0)),
)


class TestUtility:
    @given(utilities, st.floats(0.0, 1e3), st.floats(1e-6, 1e3))
    def test_strictly_increasing(self, u, x, h):
        # non-strict where both values round to the same double
        assert eval_utility(u, x + h) >= eval_utility(u, x)
        # exponential utility rounds to 1 once a*x is large
        if u.family != "exponential" or u.risk_param * (x + h) < 30:
            assert eval_utility(u, x + h) > eval_utility(u, x)

    @given(utilities, st.floats(0.0, 100.0), st.floats(1e-2, 10.0))
    def test_midpoint_concavity(self, u, x, h):
        mid = eval_utility(u, x + h)
        chord = 0.5 * (eval_utility(u, x) + eval_utility(u, x + 2 * h))
        assert mid >= chord - 1e-12 * max(1.0, abs(mid))


class TestFirm:
    @given(scenario_a(), st.floats(0, 1), st.floats(0, 1), st.floats(0, 1))
    def test_best_response_monotone_in_fine(self, p, phi_frac, t1, t2):
        lo, hi = sorted((t1 * p.L, t2 * p.L))
        phi = phi_frac * p.V
        assert firm_best_response(p, phi, lo) <= firm_best_response(p, phi, hi)

    @given(scenario_a(), st.floats(0, 1), st.floats(0, 1))
    def test_best_response_maximizes_profit(self, p, phi_frac, t_frac):
        phi, t = phi_frac * p.V, t_frac * p.L
        i = firm_best_response(p, phi, t)
        other = firm_profit(p, phi, t, 1 - i)
        assert firm_profit(p, phi, t, i) >= other - 1e-12 * max(1.0, p.psi)


class TestContracts:
    @given(scenario_a(), st.floats(0, 1), st.integers(0, 1))
    def test_full_insurance_equalizes_wealth(self, p, t_frac, i):
        t = t_frac * p.L
        b, nb = wealth_A(p, 1.0, t, p.L - t, i)
        assert b == nb

    @given(scenario_a())
    @settings(max_examples=200)
    def test_optimal_contract_zero_profit(self, p):
        try:
            c = optimal_contract_A(p)
        except ValueError:
            assume(False)
        assert abs(firm_profit(p, c.phi, c.t, c.investment)) <= 1e-12 * max(1.0, p.V)
        assert c.L_c == p.L - c.t

    @given(breach_specs, scale_specs, st.integers(2, 64), st.floats(1.0, 100.0), st.floats(0.5, 100.0))
    def test_consortium_decision_matches_margin(self, b, s, k, W, L):
        p = ScenarioBParams(W, L, k, b, s, UtilitySpec("exponential", 0.01))
        c = optimal_contract_B(p)
        assert c.s == (participation_margin(p) >= 0)
        assert (c.t, c.L_c) == (0.0, L)


class TestConsortiumLaws:
    @given(breach_specs, st.integers(2, 64))
    def test_weights_sum_to_one(self, b, k):
        p = ScenarioBParams(10.0, 5.0, k, b, ValueScaleSpec("power", 0.5), UtilitySpec("exponential", 0.1))
        w = outcome_weights_B(p)
        assert all(x >= 0 for x in w)
        assert math.isclose(sum(w), 1.0, rel_tol=0, abs_tol=4 * 2.0**-52)

    @given(breach_specs, st.integers(2, 64))
    def test_breach_sublinear_and_increasing(self, b, k):
        p1 = breach_prob(b, 1)
        pk = breach_prob(b, k)
        assert breach_prob(b, k - 1) < pk < k * p1 < k

    @given(wide_breach_specs, st.integers(2, 64))
    def test_wide_laws_validate_or_name_the_inequality(self, b, k):
        try:
            pk = breach_prob(b, k)
        except InvariantViolation as exc:
            assert exc.inequality in {"0 < p(k) < 1", "p(k) > p(k-1)", "p(k) < k*p(1)", "p(k)-p(k-1) <= p(k-1)-p(k-2)"}
            assert 2 <= exc.k <= k
        else:
            assert 0 < pk < 1

    @given(scale_specs, st.integers(2, 64))
    def test_value_scale_bounds(self, s, k):
        # concavity with v(1) = 1 bounds v by its first secant
        v2 = value_scale(s, 2)
        assert value_scale(s, 1) == 1.0
        assert 1.0 < value_scale(s, k) <= 1.0 + (k - 1) * (v2 - 1.0) * (1 + 1e-12)
