"""Closed-form optimal contracts for both scenarios.

The intermediate reductions are exposed as separate helpers so that the
brute-force solver in :mod:`cyberins.oracle` can check each one alone.
"""
from __future__ import annotations

from dataclasses import dataclass

from .core_model import (
    ContractA,
    ContractB,
    ScenarioAParams,
    ScenarioBParams,
    breach_prob,
    firm_best_response,
    provider_utility_A,
    provider_utility_B,
    value_scale,
)

__all__ = [
    "ThresholdReport",
    "threshold_report",
    "optimal_insurance_A",
    "lp_branch_low",
    "lp_branch_high",
    "optimal_contract_A",
    "participation_margin",
    "optimal_contract_B",
]


@dataclass(frozen=True)
class ThresholdReport:
    """Investment-cost thresholds above which the firm is left at low investment."""

    psi_threshold_L: float
    psi_threshold_V: float
    binding: str  # "L", "V" or "both"

    @property
    def psi_star(self) -> float:
        return min(self.psi_threshold_L, self.psi_threshold_V)


def threshold_report(p: ScenarioAParams) -> ThresholdReport:
    spread = p.gamma - p.alpha
    by_liability = spread * p.L
    by_value = spread * p.V / p.gamma
    if by_liability < by_value:
        binding = "L"
    elif by_value < by_liability:
        binding = "V"
    else:
        binding = "both"
    return ThresholdReport(by_liability, by_value, binding)


def optimal_insurance_A(p: ScenarioAParams, t: float) -> float:
    """Full-insurance payout: cover whatever the fine leaves uncovered."""
    if not 0 <= t <= p.L:
        raise ValueError(f"t must lie in [0, L={p.L}], got {t}")
    return p.L - t


def lp_branch_low(p: ScenarioAParams) -> tuple[float, float]:
    """Best (phi, t) when the firm is left at low investment.

    Maximizes phi + gamma t subject to phi + gamma t <= V and
    (gamma - alpha) t < psi; t = 0 is always feasible so the vertex
    (V, 0) attains the bound.
    """
    return float(p.V), 0.0


def lp_branch_high(p: ScenarioAParams) -> tuple[float, float] | None:
    """Best (phi, t) inducing high investment, or None if infeasible.

    The fine is the smallest one that makes investing worthwhile; the price
    then takes the rest of the firm's surplus.
    """
    spread = p.gamma - p.alpha
    if p.psi > spread * p.L or p.psi > spread * p.V / p.gamma:
        return None
    t = p.psi / spread
    phi = p.V - p.gamma * p.psi / spread
    # psi <= spread*V/gamma can still leave phi a hair below zero
    phi = max(phi, 0.0)
    t = min(t, p.L)
    return phi, t


def optimal_contract_A(p: ScenarioAParams) -> ContractA:
    high = lp_branch_high(p)
    if high is None:
        phi, t = lp_branch_low(p)
    else:
        phi, t = high
    L_c = optimal_insurance_A(p, t)
    investment = firm_best_response(p, phi, t)
    if investment != (0 if high is None else 1):
        raise AssertionError(
            f"firm response {investment} disagrees with branch at t={t!r}, psi={p.psi!r}"
        )
    value = provider_utility_A(p, phi, t, L_c, investment)
    return ContractA(phi=phi, t=t, L_c=L_c, investment=investment, provider_value=value)


def participation_margin(p: ScenarioBParams, k: int | None = None) -> float:
    """(v(k) - 1) W - (p(k) - p(1)) L; joining is optimal iff this is >= 0."""
    k = p.k if k is None else k
    v = value_scale(p.scale, k)
    pk = breach_prob(p.breach, k)
    p1 = breach_prob(p.breach, 1)
    return (v * p.W - pk * p.L) - (p.W - p1 * p.L)


def optimal_contract_B(p: ScenarioBParams) -> ContractB:
    """No fine, full insurance, and join iff the participation margin is >= 0."""
    s = 1 if participation_margin(p) >= 0 else 0
    t, L_c = 0.0, float(p.L)
    value = provider_utility_B(p, t, L_c, s)
    return ContractB(s=s, t=t, L_c=L_c, provider_value=value)
