"""Optimal cybersecurity-insurance contracts for medical data sharing."""
from .core_model import (
    BreachProbSpec,
    ContractA,
    ContractB,
    InvariantViolation,
    ScenarioAParams,
    ScenarioBParams,
    UtilityDomainError,
    UtilitySpec,
    ValueScaleSpec,
    breach_prob,
    eval_utility,
    firm_best_response,
    firm_profit,
    provider_utility_A,
    provider_utility_B,
    value_scale,
)
from .closed_form import (
    ThresholdReport,
    lp_branch_high,
    lp_branch_low,
    optimal_contract_A,
    optimal_contract_B,
    optimal_insurance_A,
    participation_margin,
    threshold_report,
)
from .oracle import GridSpec, OracleResult, grid_solve_A, grid_solve_B
from .analysis import (
    SweepSeries,
    fig1_default_params,
    fig2_default_params,
    investment_threshold,
    participation_threshold,
    sweep_k,
    sweep_psi,
)
from .simulate import SimReport, simulate_A, simulate_B

__version__ = "0.1.0"
