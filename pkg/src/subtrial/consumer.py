"""Consumer monitoring behavior under an entropy cost of attention.

A consumer who wants to cancel before renewal picks a success probability q
to minimize

    (1 - q) * P  +  H(q) / lam,      H(q) = q ln q + (1 - q) ln(1 - q),

where ``lam`` is the effective attention sensitivity.  H is negative on
(0, 1), so the second term is negative with this sign convention; the
objective is implemented literally because the first-order condition it
produces is the logistic

    q*(P, lam) = 1 / (1 + exp(-lam * P)),

which everything downstream relies on.  Reports that need a nonnegative
"cognitive effort" should use ``abs(entropy_cost)``.

Sensitivity decays with trial length T as lam(T) = gamma * lam0 / (1 + beta*T);
beta = 0 recovers a constant-attention consumer and gamma >= 1 models a
uniform policy boost to attention.
"""

from __future__ import annotations

from dataclasses import dataclass

from scipy.special import expit, xlogy

from .exceptions import DomainError, InconsistentInputError

LAMBDA_CONSISTENCY_TOL = 1e-9


@dataclass(frozen=True)
class AttentionParams:
    """Baseline sensitivity, decay rate and policy multiplier."""

    lambda0: float
    beta: float = 0.0
    gamma: float = 1.0

    def __post_init__(self) -> None:
        if self.lambda0 <= 0.0:
            raise DomainError(f"lambda0 must be positive, got {self.lambda0}")
        if self.beta < 0.0:
            raise DomainError(f"beta must be nonnegative, got {self.beta}")
        if self.gamma < 1.0:
            raise DomainError(f"gamma must be at least 1, got {self.gamma}")


@dataclass(frozen=True)
class MonitoringSolution:
    """Minimizer of the monitoring objective and its value decomposition."""

    q_star: float
    objective_value: float
    entropy_cost: float
    expected_loss: float


def entropy(q: float) -> float:
    """H(q) = q ln q + (1-q) ln(1-q), with 0 ln 0 = 0; nonpositive, convex."""
    if not (0.0 <= q <= 1.0):
        raise DomainError(f"q must lie in [0, 1], got {q}")
    return float(xlogy(q, q) + xlogy(1.0 - q, 1.0 - q))


def effective_lambda(params: AttentionParams, T: float) -> float:
    """gamma * lambda0 / (1 + beta * T); weakly decreasing in T."""
    if T < 0.0:
        raise DomainError(f"trial length must be nonnegative, got {T}")
    return params.gamma * params.lambda0 / (1.0 + params.beta * T)


def optimal_q(P: float, lam: float) -> MonitoringSolution:
    """Closed-form minimizer of the monitoring objective.

    P = 0 is accepted and resolves to q* = 1/2 by continuity (logistic at
    argument zero).  expit is overflow-safe for large lam * P.
    """
    if P < 0.0 or P > 1.0:
        raise DomainError(f"price must lie in [0, 1], got {P}")
    if lam <= 0.0:
        raise DomainError(f"sensitivity must be positive, got {lam}")
    q = float(expit(lam * P))
    expected_loss = (1.0 - q) * P
    entropy_cost = entropy(q) / lam
    return MonitoringSolution(
        q_star=q,
        objective_value=expected_loss + entropy_cost,
        entropy_cost=entropy_cost,
        expected_loss=expected_loss,
    )


def monitoring_objective(q: float, P: float, lam: float) -> float:
    """(1 - q) * P + H(q) / lam, the quantity optimal_q minimizes over q."""
    return (1.0 - q) * P + entropy(q) / lam


def q_derivatives(
    P: float, lam: float, params: AttentionParams, T: float
) -> tuple[float, float, float]:
    """Closed-form (dq*/dP, dq*/dlam, dq*/dT) at (P, lam) with lam = lam(T).

    Raises when ``lam`` disagrees with ``effective_lambda(params, T)``: the
    T-derivative is a chain rule through the decay law, so a stale lam would
    silently produce the wrong slope.
    """
    lam_implied = effective_lambda(params, T)
    if abs(lam - lam_implied) > LAMBDA_CONSISTENCY_TOL:
        raise InconsistentInputError(
            f"lam = {lam} but effective_lambda(params, T) = {lam_implied}"
        )
    q = float(expit(lam * P))
    slope = q * (1.0 - q)
    dq_dP = lam * slope
    dq_dlam = P * slope
    dlam_dT = -params.beta * params.gamma * params.lambda0 / (1.0 + params.beta * T) ** 2
    dq_dT = dq_dlam * dlam_dT
    return dq_dP, dq_dlam, dq_dT
