"""Domain types and exact evaluators for both contract scenarios.

Scenario A: a provider sells data to a risk-neutral firm that picks a high or
low cybersecurity investment. Scenario B: identical providers decide whether
to join a data-sharing consortium. Every profit and expected-utility
expression used elsewhere in the package lives here.

Evaluators accept scalars or numpy arrays. Scalar inputs give Python scalars.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

__all__ = [
    "UtilityDomainError",
    "InvariantViolation",
    "UtilitySpec",
    "ScenarioAParams",
    "ContractA",
    "BreachProbSpec",
    "ValueScaleSpec",
    "ScenarioBParams",
    "ContractB",
    "eval_utility",
    "marginal_utility",
    "inverse_utility",
    "firm_profit",
    "firm_best_response",
    "wealth_A",
    "provider_utility_A",
    "breach_prob",
    "value_scale",
    "wealth_B",
    "provider_utility_B",
    "outcome_weights_B",
]

# (gamma - alpha) * t >= psi is tested with this relative slack, so that a
# fine computed as psi / (gamma - alpha) still induces investment.
TIE_TOL = 1e-12


class UtilityDomainError(ValueError):
    """Wealth fell below the valid domain of a utility family."""

    def __init__(self, message: str, wealth: float):
        super().__init__(message)
        self.wealth = wealth


class InvariantViolation(ValueError):
    """A breach-probability or value-scale spec breaks a modelling assumption."""

    def __init__(self, message: str, inequality: str, k: int):
        super().__init__(f"{inequality} violated at k={k}: {message}")
        self.inequality = inequality
        self.k = k


def _scalarize(x):
    arr = np.asarray(x)
    if arr.ndim == 0:
        return arr.item()
    return arr


# --------------------------------------------------------------------------
# Utility
# --------------------------------------------------------------------------

UTILITY_FAMILIES = ("exponential", "power", "log-shifted")


@dataclass(frozen=True)
class UtilitySpec:
    """Risk-averse utility.

    ``exponential``: U(x) = 1 - exp(-a x), risk_param = a > 0.
    ``power``: U(x) = x**beta on x >= 0, risk_param = beta in (0, 1).
    ``log-shifted``: U(x) = ln(x + c) on x > -c, risk_param = c > 0.
    """

    family: str
    risk_param: float

    def __post_init__(self):
        if self.family not in UTILITY_FAMILIES:
            raise ValueError(
                f"unknown utility family {self.family!r}; expected one of {UTILITY_FAMILIES}"
            )
        r = self.risk_param
        if not (math.isfinite(r) and r > 0):
            raise ValueError(f"risk_param must be a positive finite number, got {r}")
        if self.family == "power" and not r < 1:
            raise ValueError(f"power utility needs beta in (0, 1), got {r}")

    @property
    def lower_bound(self) -> float:
        """Infimum of the valid wealth domain (-inf when unrestricted)."""
        if self.family == "power":
            return 0.0
        if self.family == "log-shifted":
            return -self.risk_param
        return -math.inf

    @property
    def lower_bound_inclusive(self) -> bool:
        return self.family == "power"

    def check_domain(self, x) -> None:
        arr = np.asarray(x, dtype=float)
        if self.family == "exponential":
            bad = np.isnan(arr)
        elif self.lower_bound_inclusive:
            bad = ~(arr >= self.lower_bound)
        else:
            bad = ~(arr > self.lower_bound)
        if np.any(bad):
            worst = float(np.min(arr[bad])) if not np.all(np.isnan(arr[bad])) else math.nan
            op = ">=" if self.lower_bound_inclusive else ">"
            raise UtilityDomainError(
                f"{self.family} utility needs wealth {op} {self.lower_bound:g}; got {worst!r}",
                wealth=worst,
            )


def eval_utility(u: UtilitySpec, x):
    """U(x), raising UtilityDomainError outside the family's domain."""
    u.check_domain(x)
    x = np.asarray(x, dtype=float)
    if u.family == "exponential":
        out = -np.expm1(-u.risk_param * x)
    elif u.family == "power":
        out = np.power(x, u.risk_param)
    else:
        out = np.log(x + u.risk_param)
    return _scalarize(out)


def marginal_utility(u: UtilitySpec, x):
    """U'(x)."""
    u.check_domain(x)
    x = np.asarray(x, dtype=float)
    r = u.risk_param
    if u.family == "exponential":
        out = r * np.exp(-r * x)
    elif u.family == "power":
        with np.errstate(divide="ignore"):
            out = r * np.power(x, r - 1.0)
    else:
        out = 1.0 / (x + r)
    return _scalarize(out)


def inverse_utility(u: UtilitySpec, value):
    """Certainty-equivalent wealth: the x with U(x) = value."""
    value = np.asarray(value, dtype=float)
    r = u.risk_param
    if u.family == "exponential":
        if np.any(value >= 1.0):
            raise UtilityDomainError("exponential utility is bounded above by 1", float(np.max(value)))
        out = -np.log1p(-value) / r
    elif u.family == "power":
        if np.any(value < 0):
            raise UtilityDomainError("power utility is non-negative", float(np.min(value)))
        out = np.power(value, 1.0 / r)
    else:
        out = np.exp(value) - r
    return _scalarize(out)


# --------------------------------------------------------------------------
# Scenario A: provider sells data to a firm
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ScenarioAParams:
    V: float
    W: float
    L: float
    psi: float
    alpha: float
    gamma: float
    utility: UtilitySpec

    def __post_init__(self):
        for name in ("V", "W", "L", "psi", "alpha", "gamma"):
            val = getattr(self, name)
            if not isinstance(val, (int, float)) or not math.isfinite(val):
                raise ValueError(f"{name} must be a finite number, got {val!r}")
        if not 0 < self.alpha < self.gamma < 1:
            raise ValueError(
                f"need 0 < alpha < gamma < 1, got alpha={self.alpha}, gamma={self.gamma}"
            )
        if self.V < 0:
            raise ValueError(f"V must be >= 0, got {self.V}")
        if self.W < 0:
            raise ValueError(f"W must be >= 0, got {self.W}")
        if self.L <= 0:
            raise ValueError(f"L must be > 0, got {self.L}")
        if self.psi <= 0:
            raise ValueError(f"psi must be > 0, got {self.psi}")

    def breach_probability(self, investment):
        """Breach probability given the firm's investment level."""
        return _scalarize(np.where(np.asarray(investment) == 1, self.alpha, self.gamma))


@dataclass(frozen=True)
class ContractA:
    phi: float
    t: float
    L_c: float
    investment: int
    provider_value: float


def firm_profit(p: ScenarioAParams, phi, t, i):
    """Firm's expected profit: V - phi - gamma t (low) or V - phi - psi - alpha t (high)."""
    phi = np.asarray(phi, dtype=float)
    t = np.asarray(t, dtype=float)
    high = np.asarray(i) == 1
    low_profit = p.V - phi - p.gamma * t
    high_profit = p.V - phi - p.psi - p.alpha * t
    return _scalarize(np.where(high, high_profit, low_profit))


def firm_best_response(p: ScenarioAParams, phi, t):
    """Investment level maximizing firm profit; ties go to high investment.

    The purchase price cancels out of the comparison, so only ``t`` matters.
    """
    t = np.asarray(t, dtype=float)
    phi = np.broadcast_to(np.asarray(phi, dtype=float), np.broadcast(phi, t).shape)
    gain = (p.gamma - p.alpha) * t - p.psi
    out = np.where(gain >= -TIE_TOL * max(1.0, p.psi), 1, 0)
    out = np.broadcast_to(out, phi.shape)
    return _scalarize(out)


def wealth_A(p: ScenarioAParams, phi, t, L_c, i):
    """(breach wealth, no-breach wealth) with an actuarially fair premium.

    The breach state adds back the uncovered loss ``L - t - L_c``; when
    ``L_c = L - t`` this is exactly zero and both states coincide bitwise.
    """
    prob = np.where(np.asarray(i) == 1, p.alpha, p.gamma)
    no_breach = p.W + np.asarray(phi, dtype=float) - prob * np.asarray(L_c, dtype=float)
    uncovered = (p.L - np.asarray(t, dtype=float)) - np.asarray(L_c, dtype=float)
    breach = no_breach - uncovered
    return _scalarize(breach), _scalarize(no_breach)


def provider_utility_A(p: ScenarioAParams, phi, t, L_c, i):
    """Provider's expected utility under investment level ``i``."""
    prob = np.where(np.asarray(i) == 1, p.alpha, p.gamma)
    breach, no_breach = wealth_A(p, phi, t, L_c, i)
    u_b = np.asarray(eval_utility(p.utility, breach))
    u_n = np.asarray(eval_utility(p.utility, no_breach))
    mixed = prob * u_b + (1.0 - prob) * u_n
    return _scalarize(np.where(np.asarray(breach) == np.asarray(no_breach), u_n, mixed))


# --------------------------------------------------------------------------
# Scenario B: consortium of identical providers
# --------------------------------------------------------------------------

K_CHECK_MAX = 64


@dataclass(frozen=True)
class BreachProbSpec:
    """Breach probability p(k) for a consortium of k providers.

    ``compound``: 1 - (1 - p1)**k.
    ``saturating``: p_max (1 - (1 - p1/p_max)**k).
    ``table``: explicit values (p(1), p(2), ...), mainly for custom data.
    """

    family: str
    p1: float = 0.0
    p_max: float = 1.0
    values: tuple = field(default=())

    def __post_init__(self):
        if self.family not in ("compound", "saturating", "table"):
            raise ValueError(f"unknown breach family {self.family!r}")
        if self.family == "table":
            if len(self.values) < 1:
                raise ValueError("table breach spec needs at least one value")
            object.__setattr__(self, "values", tuple(float(v) for v in self.values))
            object.__setattr__(self, "p1", self.values[0])
        if not 0 < self.p1 < 1:
            raise ValueError(f"p1 must lie in (0, 1), got {self.p1}")
        if self.family == "saturating" and not 0 < self.p_max <= 1:
            raise ValueError(f"p_max must lie in (0, 1], got {self.p_max}")

    def raw(self, k: int) -> float:
        if k == 1:
            return self.p1
        if self.family == "compound":
            return 1.0 - (1.0 - self.p1) ** k
        if self.family == "saturating":
            q = self.p1 / self.p_max
            return self.p_max * (1.0 - (1.0 - q) ** k)
        if k > len(self.values):
            raise InvariantViolation(
                f"table breach spec defines p(k) only up to k={len(self.values)}, asked for k={k}",
                "k <= len(values)",
                k,
            )
        return self.values[k - 1]


@lru_cache(maxsize=4096)
def _validate_breach(spec: BreachProbSpec, k: int) -> None:
    if k > 1:
        _validate_breach(spec, k - 1)
    pk = spec.raw(k)
    if not 0 < pk < 1:
        raise InvariantViolation(f"p({k}) = {pk!r} is outside (0, 1)", "0 < p(k) < 1", k)
    if k == 1:
        return
    prev = spec.raw(k - 1)
    if not pk > prev:
        raise InvariantViolation(
            f"p(k) must be strictly increasing: p({k}) = {pk!r} <= p({k - 1}) = {prev!r}",
            "p(k) > p(k-1)",
            k,
        )
    if not pk < k * spec.p1:
        raise InvariantViolation(
            f"sublinearity p(k) < k*p(1) fails at k={k}: {pk!r} >= {k * spec.p1!r}",
            "p(k) < k*p(1)",
            k,
        )
    if k >= 3:
        prev2 = spec.raw(k - 2)
        if pk - prev > prev - prev2:
            raise InvariantViolation(
                f"discrete concavity p(k)-p(k-1) <= p(k-1)-p(k-2) fails at k={k}",
                "p(k)-p(k-1) <= p(k-1)-p(k-2)",
                k,
            )


def breach_prob(spec: BreachProbSpec, k: int) -> float:
    """p(k), after checking the model assumptions for every j <= k."""
    k = int(k)
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    _validate_breach(spec, k)
    return spec.raw(k)


@dataclass(frozen=True)
class ValueScaleSpec:
    """Data-value multiplier v(k) with v(1) = 1.

    ``power``: k**beta, beta in (0, 1). ``log``: 1 + c ln k, c > 0.
    ``table``: explicit values (v(1), v(2), ...).
    """

    family: str
    param: float = 0.0
    values: tuple = field(default=())

    def __post_init__(self):
        if self.family not in ("power", "log", "table"):
            raise ValueError(f"unknown value-scale family {self.family!r}")
        if self.family == "power" and not 0 < self.param < 1:
            raise ValueError(f"power value scale needs beta in (0, 1), got {self.param}")
        if self.family == "log" and not self.param > 0:
            raise ValueError(f"log value scale needs c > 0, got {self.param}")
        if self.family == "table":
            object.__setattr__(self, "values", tuple(float(v) for v in self.values))
            if not self.values:
                raise ValueError("table value scale needs at least one value")

    def raw(self, k: int) -> float:
        if self.family == "power":
            return float(k) ** self.param
        if self.family == "log":
            return 1.0 + self.param * math.log(k)
        if k > len(self.values):
            raise InvariantViolation(
                f"table value scale defines v(k) only up to k={len(self.values)}, asked for k={k}",
                "k <= len(values)",
                k,
            )
        return self.values[k - 1]


@lru_cache(maxsize=4096)
def _validate_scale(spec: ValueScaleSpec, k: int) -> None:
    if k > 1:
        _validate_scale(spec, k - 1)
    vk = spec.raw(k)
    if k == 1:
        if vk != 1.0:
            raise InvariantViolation(f"v(1) must equal 1, got {vk!r}", "v(1) = 1", 1)
        return
    prev = spec.raw(k - 1)
    if not vk > prev:
        raise InvariantViolation(
            f"v(k) must be strictly increasing: v({k}) = {vk!r} <= v({k - 1}) = {prev!r}",
            "v(k) > v(k-1)",
            k,
        )
    if k >= 3:
        prev2 = spec.raw(k - 2)
        if vk - prev > prev - prev2:
            raise InvariantViolation(
                f"discrete concavity v(k)-v(k-1) <= v(k-1)-v(k-2) fails at k={k}",
                "v(k)-v(k-1) <= v(k-1)-v(k-2)",
                k,
            )


def value_scale(spec: ValueScaleSpec, k: int) -> float:
    k = int(k)
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    _validate_scale(spec, k)
    return spec.raw(k)


@dataclass(frozen=True)
class ScenarioBParams:
    W: float
    L: float
    k: int
    breach: BreachProbSpec
    scale: ValueScaleSpec
    utility: UtilitySpec

    def __post_init__(self):
        for name in ("W", "L"):
            val = getattr(self, name)
            if not isinstance(val, (int, float)) or not math.isfinite(val):
                raise ValueError(f"{name} must be a finite number, got {val!r}")
        if isinstance(self.k, bool) or int(self.k) != self.k:
            raise ValueError(f"k must be an integer, got {self.k!r}")
        object.__setattr__(self, "k", int(self.k))
        if self.W < 0:
            raise ValueError(f"W must be >= 0, got {self.W}")
        if self.L <= 0:
            raise ValueError(f"L must be > 0, got {self.L}")
        if self.k < 2:
            raise ValueError(f"k must be >= 2, got {self.k}")
        breach_prob(self.breach, self.k)
        value_scale(self.scale, self.k)

    def with_k(self, k: int) -> "ScenarioBParams":
        return ScenarioBParams(self.W, self.L, k, self.breach, self.scale, self.utility)


@dataclass(frozen=True)
class ContractB:
    s: int
    t: float
    L_c: float
    provider_value: float


def outcome_weights_B(p: ScenarioBParams) -> tuple[float, float, float]:
    """(own breach, other member's breach, no breach) probabilities when participating."""
    p1 = breach_prob(p.breach, 1)
    pk = breach_prob(p.breach, p.k)
    return p1, pk - p1, 1.0 - pk


def wealth_B(p: ScenarioBParams, t, L_c, participate):
    """Outcome wealths.

    Non-participation gives (breach, no breach). Participation gives
    (own breach, other member's breach, no breach).
    """
    t = np.asarray(t, dtype=float)
    L_c = np.asarray(L_c, dtype=float)
    uncovered = p.L - L_c
    if participate:
        pk = breach_prob(p.breach, p.k)
        base = value_scale(p.scale, p.k) * p.W - pk * L_c
        own = base - uncovered - (p.k - 1) * t
        other = base - uncovered + t
        return _scalarize(own), _scalarize(other), _scalarize(base)
    p1 = breach_prob(p.breach, 1)
    base = p.W - p1 * L_c
    return _scalarize(base - uncovered), _scalarize(base)


def provider_utility_B(p: ScenarioBParams, t, L_c, participate):
    """H^1(L_c) when not participating, H^k(t, L_c) when participating."""
    u = p.utility
    if participate:
        w_own, w_other, w_none = outcome_weights_B(p)
        own, other, none = (np.asarray(w) for w in wealth_B(p, t, L_c, True))
        u_own = np.asarray(eval_utility(u, own))
        u_other = np.asarray(eval_utility(u, other))
        u_none = np.asarray(eval_utility(u, none))
        mixed = w_own * u_own + w_other * u_other + w_none * u_none
        flat = (own == none) & (other == none)
        return _scalarize(np.where(flat, u_none, mixed))
    p1 = breach_prob(p.breach, 1)
    breach, none = (np.asarray(w) for w in wealth_B(p, t, L_c, False))
    u_b = np.asarray(eval_utility(u, breach))
    u_n = np.asarray(eval_utility(u, none))
    return _scalarize(np.where(breach == none, u_n, p1 * u_b + (1.0 - p1) * u_n))
