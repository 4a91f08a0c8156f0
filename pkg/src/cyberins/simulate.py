"""Seeded Monte Carlo check of the provider's expected utility.

Breach outcomes are sampled with numpy's PCG64 generator, provider wealth is
realized per draw, and the sample-mean utility is compared to the analytical
expectation through a z-score.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core_model import (
    ContractA,
    ContractB,
    ScenarioAParams,
    ScenarioBParams,
    breach_prob,
    eval_utility,
    provider_utility_A,
    provider_utility_B,
    wealth_A,
    wealth_B,
)

__all__ = ["SimReport", "simulate_A", "simulate_B", "RNG_NAME"]

RNG_NAME = "numpy.random.PCG64"


@dataclass(frozen=True)
class SimReport:
    n: int
    mean_utility: float
    std_error: float
    analytical: float
    z: float
    seed: int
    outcome_counts: dict
    rng: str = RNG_NAME


def _rng(seed: int) -> np.random.Generator:
    if int(seed) != seed or seed < 0 or seed >= 2**64:
        raise ValueError(f"seed must be an integer in [0, 2**64), got {seed!r}")
    return np.random.Generator(np.random.PCG64(int(seed)))


def _summarize(utilities: np.ndarray, analytical: float, seed: int, counts: dict) -> SimReport:
    n = utilities.size
    # shifting by the first draw keeps a constant sample exactly constant
    shift = utilities[0]
    dev = utilities - shift
    mean = float(shift + dev.mean())
    if n > 1:
        se = float(dev.std(ddof=1) / math.sqrt(n))
    else:
        se = 0.0
    diff = mean - analytical
    if se > 0:
        z = diff / se
    elif diff == 0:
        z = 0.0
    else:
        z = math.copysign(math.inf, diff)
    return SimReport(n, mean, se, float(analytical), float(z), int(seed), counts)


def _check_n(n: int) -> int:
    if int(n) != n or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    return int(n)


def simulate_A(p: ScenarioAParams, c: ContractA, n: int, seed: int) -> SimReport:
    n = _check_n(n)
    rng = _rng(seed)
    prob = p.alpha if c.investment == 1 else p.gamma
    breach = rng.random(n) < prob
    w_breach, w_none = wealth_A(p, c.phi, c.t, c.L_c, c.investment)
    u_breach = eval_utility(p.utility, w_breach)
    u_none = eval_utility(p.utility, w_none)
    utilities = np.where(breach, u_breach, u_none)
    analytical = provider_utility_A(p, c.phi, c.t, c.L_c, c.investment)
    n_breach = int(breach.sum())
    return _summarize(utilities, analytical, seed, {"breach": n_breach, "none": n - n_breach})


def simulate_B(p: ScenarioBParams, c: ContractB, n: int, seed: int) -> SimReport:
    """Participants see own breach, another member's breach, or none; others see two outcomes."""
    n = _check_n(n)
    rng = _rng(seed)
    draws = rng.random(n)
    p1 = breach_prob(p.breach, 1)
    analytical = provider_utility_B(p, c.t, c.L_c, c.s)
    if c.s:
        pk = breach_prob(p.breach, p.k)
        category = np.where(draws < p1, 0, np.where(draws < pk, 1, 2))
        outcome_u = np.array([eval_utility(p.utility, w) for w in wealth_B(p, c.t, c.L_c, True)])
        counts = np.bincount(category, minlength=3)
        labels = ("own_breach", "other_breach", "none")
    else:
        category = np.where(draws < p1, 0, 1)
        outcome_u = np.array([eval_utility(p.utility, w) for w in wealth_B(p, c.t, c.L_c, False)])
        counts = np.bincount(category, minlength=2)
        labels = ("breach", "none")
    utilities = outcome_u[category]
    return _summarize(utilities, analytical, seed, dict(zip(labels, map(int, counts))))
