"""Parameter sweeps and threshold finders for both scenarios.

``sweep_psi`` traces the provider's optimal value against the firm's
investment cost; ``sweep_k`` and ``participation_threshold`` trace the
consortium decision against consortium size.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .closed_form import (
    ThresholdReport,
    optimal_contract_A,
    optimal_contract_B,
    participation_margin,
    threshold_report,
)
from .core_model import (
    BreachProbSpec,
    ScenarioAParams,
    ScenarioBParams,
    UtilityDomainError,
    UtilitySpec,
    ValueScaleSpec,
    inverse_utility,
    provider_utility_B,
)

__all__ = [
    "SweepSeries",
    "ParticipationReport",
    "investment_threshold",
    "sweep_psi",
    "participation_threshold",
    "sweep_k",
    "fig1_default_params",
    "fig2_default_params",
]

SWEEP_A_COLUMNS = ("phi", "t", "L_c", "investment", "value", "certainty_equivalent")
SWEEP_B_COLUMNS = ("H1", "Hk", "s", "margin")


@dataclass(frozen=True)
class SweepSeries:
    axis: str
    values: np.ndarray
    columns: dict = field(default_factory=dict)

    def __post_init__(self):
        vals = np.asarray(self.values)
        if vals.ndim != 1 or (vals.size > 1 and not np.all(np.diff(vals) > 0)):
            raise ValueError(f"{self.axis} values must be strictly increasing")
        for name, col in self.columns.items():
            if len(col) != vals.size:
                raise ValueError(f"column {name} has {len(col)} rows, expected {vals.size}")

    @property
    def regime(self) -> np.ndarray:
        """Induced investment (psi sweeps) or participation (k sweeps)."""
        return self.columns["investment" if "investment" in self.columns else "s"]

    def __len__(self):
        return len(self.values)

    def rows(self):
        """(axis value, column values...) tuples in column order."""
        cols = list(self.columns.values())
        for i, x in enumerate(self.values):
            yield (x, *(c[i] for c in cols))


@dataclass(frozen=True)
class ParticipationReport:
    ks: np.ndarray
    margins: np.ndarray
    participating: tuple
    change_points: tuple  # first k after each sign change
    k_star: int | None  # largest participating k; None when nobody joins or signs flip repeatedly

    @property
    def monotone(self) -> bool:
        return len(self.change_points) <= 1


def investment_threshold(p: ScenarioAParams) -> ThresholdReport:
    """Both investment-cost thresholds; ``psi_star`` is the effective switch point."""
    return threshold_report(p)


def sweep_psi(p: ScenarioAParams, psi_values) -> SweepSeries:
    psi_values = np.asarray(psi_values, dtype=float)
    if np.any(psi_values <= 0):
        raise ValueError("psi values must be positive")
    cols = {name: [] for name in SWEEP_A_COLUMNS}
    for psi in psi_values:
        q = ScenarioAParams(p.V, p.W, p.L, float(psi), p.alpha, p.gamma, p.utility)
        try:
            c = optimal_contract_A(q)
            ce = inverse_utility(p.utility, c.provider_value)
        except UtilityDomainError as exc:
            raise UtilityDomainError(f"at psi={float(psi)!r}: {exc}", exc.wealth) from exc
        cols["phi"].append(c.phi)
        cols["t"].append(c.t)
        cols["L_c"].append(c.L_c)
        cols["investment"].append(c.investment)
        cols["value"].append(c.provider_value)
        cols["certainty_equivalent"].append(ce)
    columns = {k: np.asarray(v, dtype=int if k == "investment" else float) for k, v in cols.items()}
    return SweepSeries("psi", psi_values, columns)


def participation_threshold(p: ScenarioBParams, k_max: int) -> ParticipationReport:
    """Scan the participation margin over k = 2..k_max."""
    if k_max < 2:
        raise ValueError(f"k_max must be >= 2, got {k_max}")
    ks = np.arange(2, k_max + 1)
    margins = np.array([participation_margin(p, int(k)) for k in ks])
    joins = margins >= 0
    flips = np.flatnonzero(joins[1:] != joins[:-1]) + 1
    change_points = tuple(int(ks[i]) for i in flips)
    participating = tuple(int(k) for k in ks[joins])
    if len(change_points) <= 1 and participating:
        k_star = participating[-1]
    else:
        k_star = None
    return ParticipationReport(ks, margins, participating, change_points, k_star)


def sweep_k(p: ScenarioBParams, k_values) -> SweepSeries:
    k_values = np.asarray(k_values)
    if k_values.size and (np.any(k_values < 2) or np.any(k_values != np.round(k_values))):
        raise ValueError("k values must be integers >= 2")
    k_values = k_values.astype(int)
    cols = {name: [] for name in SWEEP_B_COLUMNS}
    for k in k_values:
        q = p.with_k(int(k))
        try:
            h1 = provider_utility_B(q, 0.0, q.L, 0)
            hk = provider_utility_B(q, 0.0, q.L, 1)
        except UtilityDomainError as exc:
            raise UtilityDomainError(f"at k={int(k)}: {exc}", exc.wealth) from exc
        cols["H1"].append(h1)
        cols["Hk"].append(hk)
        cols["s"].append(optimal_contract_B(q).s)
        cols["margin"].append(participation_margin(q))
    columns = {k: np.asarray(v, dtype=int if k == "s" else float) for k, v in cols.items()}
    return SweepSeries("k", k_values, columns)


def fig1_default_params() -> ScenarioAParams:
    """Investment-cost sweep defaults (our choice; the threshold sits at psi = 8)."""
    return ScenarioAParams(
        V=10.0, W=50.0, L=20.0, psi=1.0, alpha=0.1, gamma=0.5,
        utility=UtilitySpec("power", 0.5),
    )


def fig2_default_params() -> ScenarioBParams:
    """Consortium-size defaults with one participation threshold inside k <= 64."""
    return ScenarioBParams(
        W=10.0, L=140.0, k=2,
        breach=BreachProbSpec("compound", p1=0.02),
        scale=ValueScaleSpec("power", 0.5),
        utility=UtilitySpec("exponential", 0.05),
    )
