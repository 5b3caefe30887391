"""Counterfactual engine for attention-policy experiments.

A click-to-cancel style regulation is modeled as a uniform multiplicative
boost gamma to attention sensitivity.  The comparative-statics report
re-optimizes the contract under the shock and differentiates the optimum by
a two-point finite difference in gamma; the model gives directions, not
closed forms, so slopes are always numerical.

A word on what this model actually does at re-optimized contracts (the test
suite documents it too): at any interior optimum the two first-order
conditions pin the pair (lam(T*) * P*, P*) independently of gamma, so the
re-optimized price does not move with the shock at all and the trial length
*rises* to restore the pinned effective sensitivity; at corner (T* = 0)
optima the re-optimized price falls with gamma.  Fixed-contract effects do
behave as expected: a boost raises utility and lowers inattentive revenue.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .consumer import AttentionParams
from .distributions import PiecewiseIsoElastic, ValuationDistribution
from .exceptions import DomainError
from .market import Contract, MarketOutcome, standard_revenue
from .solver import (
    OptimalContract,
    SolverConfig,
    T_AT_ZERO,
    _golden_max,
    joint_optimum,
)

GAMMA_FD_STEP = 0.1


@dataclass(frozen=True)
class PolicyShock:
    gamma: float
    label: str = ""

    def __post_init__(self) -> None:
        if self.gamma < 1.0:
            raise DomainError(f"shock multiplier must be at least 1, got {self.gamma}")


@dataclass(frozen=True)
class ComparativeStaticsReport:
    baseline: OptimalContract
    shocked: OptimalContract
    dT_dGamma: float
    dP_dGamma: float
    epsilon_used: float | None
    sign_rule_holds: bool | None
    baseline_interior: bool


def apply_shock(params: AttentionParams, shock: PolicyShock) -> AttentionParams:
    """Scale the policy multiplier; effective sensitivity scales by shock.gamma at every T."""
    return replace(params, gamma=params.gamma * shock.gamma)


def click_to_cancel_statics(
    dist: ValuationDistribution,
    params: AttentionParams,
    shock: PolicyShock,
    config: SolverConfig | None = None,
) -> ComparativeStaticsReport:
    """Re-optimized contract under the shock plus finite-difference slopes.

    Slopes are two-point differences between the re-optimized optima at the
    baseline gamma and gamma + 0.1, solved with the same configuration.  For
    iso-elastic tails the report compares sign(dP*/dgamma) with
    sign(1 - eps); the comparison is recorded, not enforced.
    """
    config = config or SolverConfig()
    baseline = joint_optimum(dist, params, config)
    shocked = joint_optimum(dist, apply_shock(params, shock), config)
    bumped = joint_optimum(
        dist, replace(params, gamma=params.gamma + GAMMA_FD_STEP), config
    )
    dT = (bumped.contract.T - baseline.contract.T) / GAMMA_FD_STEP
    dP = (bumped.contract.P - baseline.contract.P) / GAMMA_FD_STEP
    eps = dist.eps if isinstance(dist, PiecewiseIsoElastic) else None
    sign_rule = None
    if eps is not None:
        sign_rule = bool(np.sign(dP) == np.sign(1.0 - eps))
    return ComparativeStaticsReport(
        baseline=baseline,
        shocked=shocked,
        dT_dGamma=dT,
        dP_dGamma=dP,
        epsilon_used=eps,
        sign_rule_holds=sign_rule,
        baseline_interior=baseline.is_interior,
    )


@dataclass(frozen=True)
class BetaCurvePoint:
    beta: float
    profit: float
    T_star: float
    P_star: float


@dataclass(frozen=True)
class BetaCurve:
    points: tuple[BetaCurvePoint, ...]
    argmax_beta: float
    interior_max: bool


def beta_profit_curve(
    dist: ValuationDistribution,
    params_base: AttentionParams,
    beta_grid: list[float],
    config: SolverConfig | None = None,
    noise_tol: float = 1e-9,
) -> BetaCurve:
    """Re-optimized profit per decay rate with the argmax flagged.

    ``interior_max`` is true only when the maximum beats both endpoints by
    more than ``noise_tol``, so solver-level jitter on a flat curve cannot
    masquerade as a hump.  Under the hyperbolic decay law the decay rate
    only rescales the trial axis, so re-optimized profit is flat in beta
    whenever the optimum is unconstrained; the flag then honestly reads
    false.
    """
    if len(beta_grid) < 12:
        raise DomainError(f"beta grid needs at least 12 points, got {len(beta_grid)}")
    grid = sorted(float(b) for b in beta_grid)
    if grid[0] <= 0.0:
        raise DomainError("beta grid must be strictly positive")
    if grid[-1] / grid[0] < 1e3:
        raise DomainError("beta grid must span at least three decades")
    config = config or SolverConfig()
    points = []
    for b in grid:
        params = replace(params_base, beta=b)
        opt = joint_optimum(dist, params, config)
        points.append(
            BetaCurvePoint(
                beta=b, profit=opt.outcome.profit, T_star=opt.contract.T, P_star=opt.contract.P
            )
        )
    profits = np.array([p.profit for p in points])
    i = int(np.argmax(profits))
    interior = bool(
        profits[i] > profits[0] + noise_tol and profits[i] > profits[-1] + noise_tol
    )
    return BetaCurve(points=tuple(points), argmax_beta=points[i].beta, interior_max=interior)


def mandatory_reminder_limit(
    dist: ValuationDistribution, config: SolverConfig | None = None
) -> OptimalContract:
    """Contract when cancellation always succeeds: plain monopoly pricing.

    With q* forced to one the inattentive channel is dead, the trial has no
    revenue role, and the firm solves max_P P (1 - F(P)) over the window.
    """
    from .market import surplus_integral

    config = config or SolverConfig()
    w = config.price_window
    grid = w.grid(max(config.bracket_grid, 64) + 1)
    revenues = [standard_revenue(dist, Contract(T=0.0, P=p)) for p in grid]
    i = int(np.argmax(revenues))
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, len(grid) - 1)]
    P = _golden_max(
        lambda p: standard_revenue(dist, Contract(T=0.0, P=p)), lo, hi, config.opt_tol
    )
    contract = Contract(T=0.0, P=P)
    std = standard_revenue(dist, contract)
    outcome = MarketOutcome(
        standard_revenue=std,
        inattentive_revenue=0.0,
        profit=std,
        utility=surplus_integral(dist, P),
        ir_slack=0.0,
        q_star=1.0,
        lambda_eff=float("inf"),
    )
    flags = {T_AT_ZERO}
    if P - w.p_lo < 1e-6 or w.p_hi - P < 1e-6:
        flags.add("P_at_window_edge")
    return OptimalContract(
        contract=contract,
        outcome=outcome,
        foc_residuals=(float("nan"), 0.0),
        boundary_flags=frozenset(flags),
        participation_satisfied=outcome.utility >= -1e-12,
    )
