"""Brute-force solvers for the raw contract-design programs.

Nothing here uses the closed-form results. The solvers enumerate a grid of
contracts, let the firm best-respond at every point, drop points that break
the firm's participation constraint, and keep the best provider utility.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core_model import (
    ContractA,
    ContractB,
    ScenarioAParams,
    ScenarioBParams,
    firm_best_response,
    firm_profit,
    provider_utility_A,
    provider_utility_B,
)

__all__ = ["GridSpec", "OracleResult", "grid_solve_A", "grid_solve_B", "EmptyFeasibleSet"]

PARTICIPATION_TOL = 1e-12
# values this close (relative) to the maximum count as ties
TIE_BAND = 1e-12


class EmptyFeasibleSet(RuntimeError):
    pass


@dataclass(frozen=True)
class GridSpec:
    """Grid point counts per axis.

    With ``breakpoints`` the fine axis also carries the firm's indifference
    fine, where its best response jumps; without it an optimum sitting on
    that jump can be missed by a whole branch.
    """

    n_phi: int = 401
    n_t: int = 401
    n_Lc: int = 401
    breakpoints: bool = True

    def __post_init__(self):
        for name in ("n_phi", "n_t", "n_Lc"):
            n = getattr(self, name)
            if int(n) != n or n < 2:
                raise ValueError(f"{name} must be an integer >= 2, got {n!r}")

    @classmethod
    def uniform(cls, n: int, breakpoints: bool = True) -> "GridSpec":
        return cls(n, n, n, breakpoints)

    def axes_A(self, p: ScenarioAParams):
        """(phi, t, L_c) axes. linspace keeps 0, V and L exactly on the grid."""
        ts = np.linspace(0.0, p.L, self.n_t)
        if self.breakpoints:
            t_sw = indifference_fine(p)
            if t_sw is not None and 0.0 <= t_sw <= p.L:
                ts = np.unique(np.append(ts, t_sw))
        return np.linspace(0.0, p.V, self.n_phi), ts, np.linspace(0.0, p.L, self.n_Lc)

    def axes_B(self, p: ScenarioBParams):
        return np.linspace(0.0, p.L, self.n_t), np.linspace(0.0, p.L, self.n_Lc)

    def step_A(self, p: ScenarioAParams) -> float:
        """Largest spacing over the three axes."""
        return max(p.V / (self.n_phi - 1), p.L / (self.n_t - 1), p.L / (self.n_Lc - 1))


@dataclass(frozen=True)
class OracleResult:
    """``value`` is the grid maximum; ``contract`` is the tie-broken pick within
    ``TIE_BAND`` of it, so its provider_value may sit a hair below."""

    contract: ContractA | ContractB
    value: float
    grid: GridSpec
    n_feasible: int


def indifference_fine(p: ScenarioAParams) -> float | None:
    """Fine at which the firm's two profit levels are equal.

    The profit gap between investing and not investing is affine in the fine,
    so two evaluations locate its root. None if the gap does not depend on t.
    """
    gap0 = firm_profit(p, 0.0, 0.0, 1) - firm_profit(p, 0.0, 0.0, 0)
    gap1 = firm_profit(p, 0.0, 1.0, 1) - firm_profit(p, 0.0, 1.0, 0)
    slope = gap1 - gap0
    if slope == 0:
        return None
    return -gap0 / slope


def _lexmin_argmax(values: np.ndarray, *coords: np.ndarray, band: float = 0.0) -> int:
    """Index of the maximum; ties go to the lexicographically smallest coords.

    With ``band > 0`` every value within ``band * max(1, |max|)`` of the
    maximum is a tie.
    """
    best = values.max()
    idx = np.flatnonzero(values >= best - band * max(1.0, abs(best)))
    if idx.size == 1:
        return int(idx[0])
    keys = tuple(c[idx] for c in reversed(coords))
    return int(idx[np.lexsort(keys)[0]])


def _feasible_prices(p: ScenarioAParams, phis: np.ndarray, ts: np.ndarray):
    """Firm response per fine and the participation mask over the (t, phi) grid."""
    T, PHI = np.meshgrid(ts, phis, indexing="ij")
    inv = np.asarray(firm_best_response(p, PHI, T))
    profit = np.asarray(firm_profit(p, PHI, T, inv))
    return inv[:, 0], profit >= -PARTICIPATION_TOL


def grid_solve_A(p: ScenarioAParams, g: GridSpec = GridSpec(), exhaustive: bool = False) -> OracleResult:
    """Solve the provider's bilevel contract program by enumeration.

    The firm's response depends on the fine alone and its profit falls as the
    price rises, so for every (t, L_c) the feasible prices form a prefix of
    the price axis. The provider's utility rises with the price, hence the
    best point of each (t, L_c) column is its largest feasible price. The
    default path evaluates only those column maxima; ``exhaustive=True``
    evaluates every grid point, one fine at a time, and returns the same
    optimum.
    """
    phis, ts, lcs = g.axes_A(p)
    inv_by_t, feasible = _feasible_prices(p, phis, ts)
    n_feasible = int(feasible.sum()) * lcs.size
    if n_feasible == 0:
        raise EmptyFeasibleSet("no grid contract satisfies the firm's participation constraint")

    if exhaustive:
        return _exhaustive_A(p, g, phis, ts, lcs, inv_by_t, feasible, n_feasible)

    has_price = feasible.any(axis=1)
    # feasible prices are a prefix; the last True is the largest feasible price
    last = feasible.shape[1] - 1 - np.argmax(feasible[:, ::-1], axis=1)
    t_idx = np.flatnonzero(has_price)
    phi_col = phis[last[t_idx]]
    t_col = ts[t_idx]
    inv_col = inv_by_t[t_idx]

    PHI = np.repeat(phi_col[:, None], lcs.size, axis=1)
    T = np.repeat(t_col[:, None], lcs.size, axis=1)
    INV = np.repeat(inv_col[:, None], lcs.size, axis=1)
    LC = np.broadcast_to(lcs[None, :], PHI.shape)
    values = np.asarray(provider_utility_A(p, PHI, T, LC, INV))

    flat = _lexmin_argmax(values.ravel(), T.ravel(), PHI.ravel(), LC.ravel(), band=TIE_BAND)
    r, c = np.unravel_index(flat, values.shape)
    contract = ContractA(
        phi=float(PHI[r, c]),
        t=float(T[r, c]),
        L_c=float(LC[r, c]),
        investment=int(INV[r, c]),
        provider_value=float(values[r, c]),
    )
    return OracleResult(contract, float(values.max()), g, n_feasible)


def _exhaustive_A(p, g, phis, ts, lcs, inv_by_t, feasible, n_feasible) -> OracleResult:
    PHI, LC = np.meshgrid(phis, lcs, indexing="ij")
    # per-fine maxima first, then one banded reduction across fines
    cands = []  # (t, phi, L_c, value, inv)
    for j, t in enumerate(ts):
        mask = feasible[j]
        if not mask.any():
            continue
        inv = int(inv_by_t[j])
        phi_sel, lc_sel = PHI[mask].ravel(), LC[mask].ravel()
        vals = np.asarray(provider_utility_A(p, phi_sel, t, lc_sel, inv))
        top = vals.max()
        near = vals >= top - TIE_BAND * max(1.0, abs(top))
        for k in np.flatnonzero(near):
            cands.append((float(t), float(phi_sel[k]), float(lc_sel[k]), float(vals[k]), inv))
    arr = np.array([c[:4] for c in cands])
    k = _lexmin_argmax(arr[:, 3], arr[:, 0], arr[:, 1], arr[:, 2], band=TIE_BAND)
    t, phi, L_c, value, inv = cands[k]
    contract = ContractA(phi=phi, t=t, L_c=L_c, investment=inv, provider_value=value)
    return OracleResult(contract, float(arr[:, 3].max()), g, n_feasible)


def grid_solve_B(p: ScenarioBParams, g: GridSpec = GridSpec()) -> OracleResult:
    """Enumerate (s, t, L_c) for the consortium program; no inner problem here."""
    ts, lcs = g.axes_B(p)
    T, LC = np.meshgrid(ts, lcs, indexing="ij")
    best = None
    for s in (0, 1):
        vals = np.asarray(provider_utility_B(p, T, LC, s), dtype=float)
        k = _lexmin_argmax(vals.ravel(), T.ravel(), LC.ravel())
        cand = (float(vals.ravel()[k]), s, float(T.ravel()[k]), float(LC.ravel()[k]))
        # s = 0 is visited first, so on an exact tie it is kept (lexicographic order)
        if best is None or cand[0] > best[0]:
            best = cand
    value, s, t, L_c = best
    contract = ContractB(s=s, t=t, L_c=L_c, provider_value=value)
    return OracleResult(contract, value, g, 2 * T.size)
