"""Firm-side optimization: price and trial-length first-order conditions.

The price condition at a fixed trial length is the derivative of profit in P:

    [1 - F - P f]  +  (1 - q*) {F + P f}  -  P F lam q* (1 - q*) = 0 .

The trial condition balances the price-weighted marginal inattentive revenue
against the marginal utility harm of a longer trial:

    g(T) = P * dIR/dT - ir_slack(T, P) ,      dIR/dT = P F(P) (-dq*/dT).

``joint_optimum`` solves the two conditions as a system by coordinate
iteration (price root at the current T, then trial root at the current P),
which is the construction under which an interior solution has both
residuals at zero.  Nesting a scalar maximization of market profit over T
does not work here: profit is strictly increasing in T whenever beta > 0 and
F(P) > 0, so any profit-grid over T just climbs to the cap.

Quantitative warning baked into the implementation (and verified by the test
suite): g(0) is negative unless baseline sensitivity is large.  For uniform
valuations the interior threshold is lambda0 of roughly 5.93; below it the
trial corner T* = 0 is the genuine optimum of the modeled trade-off.  At
interior solutions the effective sensitivity lam(T*) is invariant to lambda0,
beta and gamma, which pins the optimal price as well.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .consumer import AttentionParams, effective_lambda, optimal_q, q_derivatives
from .distributions import PriceWindow, ValuationDistribution, check_ifr
from .exceptions import ConvergenceError, MonotonicityError, NoRootError, TrialBoundError
from .market import Contract, MarketOutcome, cancel_mass, consumer_utility, ir_slack, profit

T_AT_ZERO = "T_at_zero"
T_AT_MAX = "T_at_max"
P_AT_WINDOW_EDGE = "P_at_window_edge"

PARTICIPATION_MODES = ("interior", "binding_ir", "report_only")


@dataclass(frozen=True)
class SolverConfig:
    price_window: PriceWindow = field(default_factory=lambda: PriceWindow(0.05, 0.95))
    t_max: float = 365.0
    bracket_grid: int = 256
    root_tol: float = 1e-10
    opt_tol: float = 1e-9
    participation_mode: str = "report_only"
    max_iter: int = 200

    def __post_init__(self) -> None:
        if self.t_max <= 0.0:
            raise ValueError(f"t_max must be positive, got {self.t_max}")
        if self.root_tol <= 0.0 or self.opt_tol <= 0.0:
            raise ValueError("tolerances must be positive")
        if self.participation_mode not in PARTICIPATION_MODES:
            raise ValueError(f"unknown participation mode {self.participation_mode!r}")


@dataclass(frozen=True)
class PriceSolution:
    price: float
    residual: float
    sign_changes: int
    roots: tuple[float, ...]
    ifr_ok: bool
    at_edge: bool = False


@dataclass(frozen=True)
class TrialSolution:
    T: float
    residual: float
    at_zero: bool
    g_decreasing: bool


@dataclass(frozen=True)
class OptimalContract:
    contract: Contract
    outcome: MarketOutcome
    foc_residuals: tuple[float, float]
    boundary_flags: frozenset[str]
    participation_satisfied: bool
    iterations: int = 0

    @property
    def is_interior(self) -> bool:
        return not self.boundary_flags


def price_foc(dist: ValuationDistribution, params: AttentionParams, T: float, P: float) -> float:
    """Marginal profit in P: standard margin plus the inattentive margin."""
    lam = effective_lambda(params, T)
    q = optimal_q(P, lam).q_star
    F = cancel_mass(dist, P)
    f = dist.pdf(P)
    standard = 1.0 - F - P * f
    inattentive = (1.0 - q) * (F + P * f) - P * F * lam * q * (1.0 - q)
    return standard + inattentive


def trial_foc(dist: ValuationDistribution, params: AttentionParams, P: float, T: float) -> float:
    """P * dIR/dT minus the marginal utility harm of lengthening the trial."""
    lam = effective_lambda(params, T)
    _, _, dq_dT = q_derivatives(P, lam, params, T)
    dIR_dT = P * cancel_mass(dist, P) * (-dq_dT)
    return P * dIR_dT - ir_slack(dist, params, Contract(T=T, P=P))


def solve_price(
    dist: ValuationDistribution,
    params: AttentionParams,
    T: float,
    config: SolverConfig,
) -> PriceSolution:
    """Root of the price condition on the window via bracket scan plus polish.

    All sign changes on the `bracket_grid` scan are polished; with several
    roots the profit-maximizing one is selected and the count is reported.
    Uniqueness is only guaranteed for increasing-hazard families, so the
    report carries the IFR diagnostic alongside.
    """
    w = config.price_window
    grid = w.grid(config.bracket_grid + 1)
    vals = np.array([price_foc(dist, params, T, p) for p in grid])
    roots: list[float] = []
    for i in range(len(grid) - 1):
        if vals[i] == 0.0:
            roots.append(float(grid[i]))
        elif vals[i] * vals[i + 1] < 0.0:
            roots.append(
                float(
                    brentq(
                        lambda p: price_foc(dist, params, T, p),
                        grid[i],
                        grid[i + 1],
                        xtol=config.root_tol,
                        rtol=4.0 * np.finfo(float).eps,
                    )
                )
            )
    if vals[-1] == 0.0:
        roots.append(float(grid[-1]))
    ifr_ok = check_ifr(dist, w).is_ifr
    if not roots:
        raise NoRootError(
            f"price condition has no sign change on ({w.p_lo}, {w.p_hi}) at T={T}; "
            f"endpoint values {vals[0]:.3e}, {vals[-1]:.3e}"
        )
    if len(roots) == 1:
        best = roots[0]
    else:
        profits = [profit(dist, params, Contract(T=T, P=r)).profit for r in roots]
        best = roots[int(np.argmax(profits))]
    return PriceSolution(
        price=best,
        residual=price_foc(dist, params, T, best),
        sign_changes=len(roots),
        roots=tuple(roots),
        ifr_ok=ifr_ok,
    )


def _price_by_profit_grid(
    dist: ValuationDistribution,
    params: AttentionParams,
    T: float,
    config: SolverConfig,
) -> PriceSolution:
    """Fallback: direct profit maximization over the window (grid + golden)."""
    w = config.price_window
    grid = w.grid(max(config.bracket_grid, 64) + 1)
    profits = np.array([profit(dist, params, Contract(T=T, P=p)).profit for p in grid])
    i = int(np.argmax(profits))
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, len(grid) - 1)]
    best = _golden_max(lambda p: profit(dist, params, Contract(T=T, P=p)).profit, lo, hi, config.opt_tol)
    at_edge = best - w.p_lo < 1e-6 or w.p_hi - best < 1e-6
    return PriceSolution(
        price=best,
        residual=price_foc(dist, params, T, best),
        sign_changes=0,
        roots=(),
        ifr_ok=check_ifr(dist, w).is_ifr,
        at_edge=at_edge,
    )


def _golden_max(f, lo: float, hi: float, tol: float) -> float:
    inv_phi = (np.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = f(d)
    return (a + b) / 2.0


def solve_trial(
    dist: ValuationDistribution,
    params: AttentionParams,
    P: float,
    config: SolverConfig,
) -> TrialSolution:
    """Trial length solving g(T) = 0, or the T = 0 corner when g(0) <= 0.

    beta = 0 makes g identically zero and is reported as the corner.  Raises
    ``TrialBoundError`` when g is still positive at t_max.  The bracket
    monotonicity of g is sampled and reported as a diagnostic.
    """
    if params.beta == 0.0:
        return TrialSolution(T=0.0, residual=0.0, at_zero=True, g_decreasing=True)
    g = lambda t: trial_foc(dist, params, P, t)
    g0 = g(0.0)
    if g0 <= 0.0:
        return TrialSolution(T=0.0, residual=g0, at_zero=True, g_decreasing=True)
    hi = 1.0
    while g(hi) > 0.0:
        hi *= 2.0
        if hi > config.t_max:
            if g(config.t_max) > 0.0:
                raise TrialBoundError(
                    f"trial condition still positive at t_max={config.t_max} for P={P}"
                )
            hi = config.t_max
            break
    root = float(
        brentq(g, 0.0, hi, xtol=config.root_tol, rtol=4.0 * np.finfo(float).eps)
    )
    samples = [g(t) for t in np.linspace(0.0, hi, 9)]
    decreasing = all(samples[i + 1] <= samples[i] + 1e-12 for i in range(len(samples) - 1))
    return TrialSolution(T=root, residual=g(root), at_zero=False, g_decreasing=decreasing)


def _inner_price(dist, params, T, config) -> PriceSolution:
    try:
        return solve_price(dist, params, T, config)
    except NoRootError:
        return _price_by_profit_grid(dist, params, T, config)


def joint_optimum(
    dist: ValuationDistribution,
    params: AttentionParams,
    config: SolverConfig | None = None,
) -> OptimalContract:
    """Joint contract (T*, P*) from the two first-order conditions.

    Coordinate iteration: price root at the current trial length, trial root
    at the current price, until both residuals are inside ``root_tol`` (or
    the matching boundary flag is set).  ``binding_ir`` mode instead
    maximizes profit along the zero-utility locus.  ``interior`` and
    ``report_only`` run the same unconstrained solve; participation is
    evaluated and reported, never enforced.
    """
    config = config or SolverConfig()
    if config.participation_mode == "binding_ir":
        return _binding_ir_optimum(dist, params, config)

    T = 0.0
    flags: set[str] = set()
    history: list[tuple[float, float]] = []
    for iteration in range(1, config.max_iter + 1):
        price_sol = _inner_price(dist, params, T, config)
        P = price_sol.price
        try:
            trial_sol = solve_trial(dist, params, P, config)
            T_new = trial_sol.T
            trial_corner = trial_sol.at_zero
            at_max = False
        except TrialBoundError:
            T_new, trial_corner, at_max = config.t_max, False, True
        price_res = price_foc(dist, params, T_new, P)
        trial_res = trial_foc(dist, params, P, T_new)
        price_ok = abs(price_res) <= config.root_tol or price_sol.at_edge
        trial_ok = abs(trial_res) <= config.root_tol or (trial_corner and trial_res <= 0.0) or at_max
        if price_ok and trial_ok:
            T = T_new
            flags = set()
            if price_sol.at_edge:
                flags.add(P_AT_WINDOW_EDGE)
            if trial_corner:
                flags.add(T_AT_ZERO)
            if at_max:
                flags.add(T_AT_MAX)
            return _assemble(dist, params, T, P, price_res, trial_res, flags, iteration)
        history.append((T_new, P))
        if len(history) > 4 and _cycling(history):
            raise ConvergenceError(
                f"coordinate iteration cycles; last iterates {history[-2]} and {history[-1]}"
            )
        T = T_new
    raise ConvergenceError(f"no convergence after {config.max_iter} iterations")


def _cycling(history: list[tuple[float, float]]) -> bool:
    (t1, p1), (t2, p2), (t3, p3), (t4, p4) = history[-4:]
    period_two = abs(t1 - t3) < 1e-14 and abs(t2 - t4) < 1e-14 and abs(t1 - t2) > 1e-10
    return period_two


def _assemble(dist, params, T, P, price_res, trial_res, flags, iterations) -> OptimalContract:
    contract = Contract(T=float(T), P=float(P))
    outcome = profit(dist, params, contract)
    return OptimalContract(
        contract=contract,
        outcome=outcome,
        foc_residuals=(float(price_res), float(trial_res)),
        boundary_flags=frozenset(flags),
        participation_satisfied=bool(outcome.utility >= -1e-12),
        iterations=iterations,
    )


def _binding_ir_optimum(dist, params, config) -> OptimalContract:
    """Profit maximum along the zero-utility locus U(T, P) = 0.

    For each trial length the admissible price range is capped where the
    average participation utility hits zero (utility is decreasing in P);
    profit is maximized on the feasible range, then the trial length is
    chosen by coarse grid plus golden refinement.
    """
    w = config.price_window

    def best_at(T: float) -> tuple[float, float]:
        def u_of_p(p: float) -> float:
            return consumer_utility(dist, params, Contract(T=T, P=p))

        hi = w.p_hi
        if u_of_p(w.p_lo) < 0.0:
            return -np.inf, w.p_lo
        if u_of_p(w.p_hi) < 0.0:
            hi = brentq(u_of_p, w.p_lo, w.p_hi, xtol=config.root_tol)
        sub = SolverConfig(
            price_window=PriceWindow(w.p_lo, max(hi, w.p_lo + 1e-9)),
            t_max=config.t_max,
            bracket_grid=config.bracket_grid,
            root_tol=config.root_tol,
            opt_tol=config.opt_tol,
        )
        sol = _inner_price(dist, params, T, sub)
        return profit(dist, params, Contract(T=T, P=sol.price)).profit, sol.price

    t_grid = np.linspace(0.0, config.t_max, 65)
    values = [best_at(t)[0] for t in t_grid]
    i = int(np.argmax(values))
    lo = t_grid[max(i - 1, 0)]
    hi = t_grid[min(i + 1, len(t_grid) - 1)]
    T = _golden_max(lambda t: best_at(t)[0], lo, hi, config.opt_tol)
    if best_at(0.0)[0] >= best_at(T)[0]:
        T = 0.0
    _, P = best_at(T)
    flags: set[str] = set()
    if T == 0.0:
        flags.add(T_AT_ZERO)
    if config.t_max - T < 1e-9:
        flags.add(T_AT_MAX)
    price_res = price_foc(dist, params, T, P)
    trial_res = trial_foc(dist, params, P, T)
    return _assemble(dist, params, T, P, price_res, trial_res, flags, 1)


def price_response_curve(
    dist: ValuationDistribution,
    params: AttentionParams,
    T_grid: list[float],
    config: SolverConfig | None = None,
    assert_increasing: bool | None = None,
) -> list[tuple[float, float]]:
    """Best-response price per trial length.

    When the baseline sensitivity exceeds the hazard supremum over the window
    the curve is expected to rise strictly with T; in that case a violation
    raises.  Pass ``assert_increasing`` to override the automatic hypothesis
    check.
    """
    from .distributions import lambda_crit

    config = config or SolverConfig()
    curve = []
    for T in sorted(T_grid):
        sol = solve_price(dist, params, T, config)
        curve.append((float(T), sol.price))
    if assert_increasing is None:
        crit = lambda_crit(dist, config.price_window)
        assert_increasing = params.beta > 0.0 and params.gamma * params.lambda0 > crit
    if assert_increasing:
        for (t0, p0), (t1, p1) in zip(curve, curve[1:]):
            if p1 <= p0:
                raise MonotonicityError(
                    f"price response not strictly increasing: P*({t1}) = {p1} <= P*({t0}) = {p0}"
                )
    return curve
