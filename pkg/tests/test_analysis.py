import math

import numpy as np
import pytest

from cyberins.analysis import (
    SweepSeries,
    fig2_default_params,
    investment_threshold,
    participation_threshold,
    sweep_k,
    sweep_psi,
)
from cyberins.closed_form import optimal_contract_B
from cyberins.core_model import (
    BreachProbSpec,
    ScenarioAParams,
    ScenarioBParams,
    UtilityDomainError,
    UtilitySpec,
    ValueScaleSpec,
    breach_prob,
    eval_utility,
    value_scale,
)


class TestInvestmentThreshold:
    def test_canonical(self, canon_a):
        th = investment_threshold(canon_a)
        assert (th.psi_threshold_L, th.psi_threshold_V, th.psi_star) == pytest.approx((8, 8, 8))

    def test_liability_binds(self, sqrt_u):
        th = investment_threshold(ScenarioAParams(10, 50, 2, 1, 0.1, 0.5, sqrt_u))
        assert th.psi_star == pytest.approx(0.8)
        assert th.binding == "L"

    def test_useless_investment_limit(self, sqrt_u):
        stars = [investment_threshold(ScenarioAParams(10, 50, 20, 1, 0.5 - eps, 0.5, sqrt_u)).psi_star for eps in (1e-1, 1e-3, 1e-6)]
        assert stars[0] > stars[1] > stars[2] and stars[2] < 1e-4


class TestSweepPsi:
    def test_regime_flip_at_threshold(self, canon_a):
        s = sweep_psi(canon_a, np.arange(1.0, 13.0))
        assert s.regime.tolist() == [1] * 8 + [0] * 4

    def test_low_branch_values_identical(self, canon_a):
        s = sweep_psi(canon_a, np.linspace(8.5, 20, 9))
        vals = s.columns["value"]
        assert np.all(vals == vals[0])
        assert vals[0] == eval_utility(canon_a.utility, canon_a.W + canon_a.V - canon_a.gamma * canon_a.L)

    def test_slope_minus_one_in_high_branch(self, canon_a):
        psis = np.array([1.0, 1.25, 3.0, 3.5])
        ce = sweep_psi(canon_a, psis).columns["certainty_equivalent"]
        np.testing.assert_allclose(np.diff(ce), -np.diff(psis), atol=1e-9)

    def test_rejects_non_increasing(self, canon_a):
        with pytest.raises(ValueError):
            sweep_psi(canon_a, [2.0, 1.0])

    def test_domain_error_names_psi(self):
        p = ScenarioAParams(1.0, 5.0, 20.0, 1.0, 0.1, 0.5, UtilitySpec("power", 0.5))
        with pytest.raises(UtilityDomainError, match="psi=100"):
            sweep_psi(p, [100.0])


class TestParticipationThreshold:
    def test_canonical_margin_at_4(self, canon_b):
        rep = participation_threshold(canon_b, 16)
        assert 4 in rep.participating
        m4 = rep.margins[list(rep.ks).index(4)]
        assert m4 == pytest.approx((2 - 1) * 10 - (0.18549375 - 0.05) * 5, abs=1e-12)

    def test_nobody_joins(self, sqrt_u):
        p = ScenarioBParams(10.0, 100.0, 2, BreachProbSpec("compound", p1=0.05), ValueScaleSpec("log", 0.01), sqrt_u)
        rep = participation_threshold(p, 32)
        assert rep.participating == ()
        assert rep.k_star is None
        assert rep.margins[0] == pytest.approx(0.01 * math.log(2) * 10 - 0.0475 * 100, abs=1e-12)

    def test_agrees_with_closed_form(self):
        p = fig2_default_params()
        rep = participation_threshold(p, 64)
        for k, m in zip(rep.ks, rep.margins):
            assert (m >= 0) == bool(optimal_contract_B(p.with_k(int(k))).s)

    def test_non_monotone_flagged(self):
        # margin increments +0.1, -0.15, +0.15 from concave tables
        breach = BreachProbSpec("table", values=(0.05, 0.099, 0.1405, 0.1785))
        scale = ValueScaleSpec("table", values=(1.0, 1.5, 1.9, 2.295))
        p = ScenarioBParams(10.0, 100.0, 2, breach, scale, UtilitySpec("exponential", 0.01))
        rep = participation_threshold(p, 4)
        np.testing.assert_allclose(rep.margins, [0.1, -0.05, 0.1], atol=1e-12)
        assert rep.participating == (2, 4)
        assert len(rep.change_points) == 2
        assert not rep.monotone
        assert rep.k_star is None


class TestSweepK:
    def test_columns(self, canon_b):
        s = sweep_k(canon_b, range(2, 11))
        assert np.all(s.columns["H1"] == math.sqrt(9.75))
        for k, hk in zip(s.values, s.columns["Hk"]):
            pk = breach_prob(canon_b.breach, int(k))
            v = value_scale(canon_b.scale, int(k))
            assert hk == pytest.approx(math.sqrt(v * 10 - pk * 5), abs=1e-14)
        assert s.columns["s"].tolist() == (s.columns["Hk"] >= s.columns["H1"]).astype(int).tolist()

    def test_fig2_default_single_crossing(self):
        s = sweep_k(fig2_default_params(), range(2, 65))
        above = s.columns["Hk"] >= s.columns["H1"]
        assert np.count_nonzero(above[1:] != above[:-1]) == 1
        assert above[0]


def test_sweep_series_validates_lengths():
    with pytest.raises(ValueError):
        SweepSeries("k", np.array([2, 3]), {"H1": np.array([1.0])})
