"""Valuation distributions on [0, 1].

Three families are supported:

* ``Uniform(a, b)`` with ``[a, b]`` inside the unit interval.
* ``PiecewiseIsoElastic(kappa, eps, v0)``: the survivor function is exactly
  ``kappa * v**(-eps)`` on ``[v0, 1]``, which is the region where pricing
  happens.  A raw iso-elastic survivor exceeds 1 near zero, so below ``v0``
  the CDF is closed with a linear segment from (0, 0) to (v0, F(v0)), and an
  atom of mass ``kappa`` sits at v = 1 so the total mass is one.  The atom
  never enters F(P) or f(P) for P < 1.
* ``TruncatedWeibull(k, s)``: a Weibull(k, s) right-truncated to [0, 1],
  increasing hazard for k >= 1.

All quantities are deterministic pure functions; there is no sampling here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DomainError, SingularityError, UnboundedError

SURVIVOR_FLOOR = 1e-12
IFR_STEP_TOL = 1e-9
HAZARD_CAP = 1e12


@dataclass(frozen=True)
class PriceWindow:
    """Open price interval (p_lo, p_hi) on which pricing results are evaluated."""

    p_lo: float
    p_hi: float

    def __post_init__(self) -> None:
        if not (0.0 < self.p_lo < self.p_hi < 1.0):
            raise DomainError(
                f"price window must satisfy 0 < p_lo < p_hi < 1, got ({self.p_lo}, {self.p_hi})"
            )

    def grid(self, n: int) -> np.ndarray:
        return np.linspace(self.p_lo, self.p_hi, n)


class ValuationDistribution:
    """Base interface: CDF, density, survivor and hazard on [0, 1]."""

    #: probability mass concentrated at v = 1 (zero for continuous families)
    atom_at_one: float = 0.0

    def cdf(self, v: float) -> float:
        raise NotImplementedError

    def pdf(self, v: float) -> float:
        raise NotImplementedError

    def survivor(self, v: float) -> float:
        """P(V >= v); equals 1 - cdf(v) except at a declared atom."""
        self._check_closed(v)
        return 1.0 - self.cdf(v) + (self.atom_at_one if v >= 1.0 else 0.0)

    def hazard(self, v: float) -> float:
        """f(v) / survivor(v); raises when the survivor is numerically zero."""
        if not (0.0 < v < 1.0):
            raise DomainError(f"hazard requires v in (0, 1), got {v}")
        surv = self.survivor(v)
        if surv <= SURVIVOR_FLOOR:
            raise SingularityError(f"survivor({v}) = {surv:.3e} is below tolerance")
        return self.pdf(v) / surv

    def to_spec(self) -> dict:
        raise NotImplementedError

    @staticmethod
    def _check_closed(v: float) -> None:
        if not (0.0 <= v <= 1.0):
            raise DomainError(f"valuation must lie in [0, 1], got {v}")

    @staticmethod
    def _check_open(v: float) -> None:
        if not (0.0 < v < 1.0):
            raise DomainError(f"density is defined on (0, 1), got {v}")


@dataclass(frozen=True)
class Uniform(ValuationDistribution):
    """Uniform valuations on [a, b] with 0 <= a < b <= 1."""

    a: float = 0.0
    b: float = 1.0

    def __post_init__(self) -> None:
        if not (0.0 <= self.a < self.b <= 1.0):
            raise DomainError(f"uniform support must satisfy 0 <= a < b <= 1, got [{self.a}, {self.b}]")

    def cdf(self, v: float) -> float:
        self._check_closed(v)
        if v <= self.a:
            return 0.0
        if v >= self.b:
            return 1.0
        return (v - self.a) / (self.b - self.a)

    def pdf(self, v: float) -> float:
        self._check_open(v)
        if self.a <= v <= self.b:
            return 1.0 / (self.b - self.a)
        return 0.0

    def to_spec(self) -> dict:
        return {"family": "uniform", "a": self.a, "b": self.b}


@dataclass(frozen=True)
class PiecewiseIsoElastic(ValuationDistribution):
    """Linear CDF head on [0, v0], survivor kappa * v**(-eps) on [v0, 1], atom at 1."""

    kappa: float
    eps: float
    v0: float

    def __post_init__(self) -> None:
        if not (self.kappa > 0.0 and 0.0 < self.eps < 1.0 and 0.0 < self.v0 < 1.0):
            raise DomainError(
                f"need kappa > 0, eps in (0,1), v0 in (0,1); got ({self.kappa}, {self.eps}, {self.v0})"
            )
        if self.kappa * self.v0 ** (-self.eps) > 1.0:
            raise DomainError(
                "survivor kappa * v0**(-eps) exceeds 1 at the splice point; shrink kappa or raise v0"
            )
        object.__setattr__(self, "atom_at_one", self.kappa)

    def _head_slope(self) -> float:
        return (1.0 - self.kappa * self.v0 ** (-self.eps)) / self.v0

    def cdf(self, v: float) -> float:
        self._check_closed(v)
        if v >= 1.0:
            return 1.0
        if v < self.v0:
            return self._head_slope() * v
        return 1.0 - self.kappa * v ** (-self.eps)

    def pdf(self, v: float) -> float:
        self._check_open(v)
        if v < self.v0:
            return self._head_slope()
        return self.kappa * self.eps * v ** (-self.eps - 1.0)

    def survivor(self, v: float) -> float:
        self._check_closed(v)
        if v >= self.v0:
            # exact on the pricing region, including the atom value kappa at v = 1
            return self.kappa * v ** (-self.eps) if v < 1.0 else self.kappa
        return 1.0 - self._head_slope() * v

    def to_spec(self) -> dict:
        return {"family": "iso_elastic", "kappa": self.kappa, "eps": self.eps, "v0": self.v0}


@dataclass(frozen=True)
class TruncatedWeibull(ValuationDistribution):
    """Weibull(shape k >= 1, scale s > 0) right-truncated to [0, 1]."""

    k: float
    s: float

    def __post_init__(self) -> None:
        if not (self.k >= 1.0 and self.s > 0.0):
            raise DomainError(f"need shape k >= 1 and scale s > 0, got ({self.k}, {self.s})")

    def _mass(self) -> float:
        return 1.0 - math.exp(-((1.0 / self.s) ** self.k))

    def cdf(self, v: float) -> float:
        self._check_closed(v)
        return (1.0 - math.exp(-((v / self.s) ** self.k))) / self._mass()

    def pdf(self, v: float) -> float:
        self._check_open(v)
        z = v / self.s
        return (self.k / self.s) * z ** (self.k - 1.0) * math.exp(-(z**self.k)) / self._mass()

    def to_spec(self) -> dict:
        return {"family": "trunc_weibull", "k": self.k, "s": self.s}


def from_spec(spec: dict) -> ValuationDistribution:
    """Build a distribution from its tagged-record form used in scenario files."""
    family = spec.get("family")
    if family == "uniform":
        return Uniform(a=float(spec.get("a", 0.0)), b=float(spec.get("b", 1.0)))
    if family == "iso_elastic":
        return PiecewiseIsoElastic(
            kappa=float(spec["kappa"]), eps=float(spec["eps"]), v0=float(spec["v0"])
        )
    if family == "trunc_weibull":
        return TruncatedWeibull(k=float(spec["k"]), s=float(spec["s"]))
    raise DomainError(f"unknown distribution family: {family!r}")


@dataclass(frozen=True)
class IfrReport:
    """Outcome of the increasing-hazard diagnostic over a window."""

    is_ifr: bool
    first_violation: float | None
    grid_n: int


def check_ifr(dist: ValuationDistribution, window: PriceWindow, grid_n: int = 64) -> IfrReport:
    """Check that the hazard is weakly increasing across the window.

    Returns a report rather than raising: callers use this as a diagnostic on
    whether price first-order conditions are guaranteed a unique root.
    """
    if grid_n < 16:
        raise DomainError(f"grid_n must be at least 16, got {grid_n}")
    grid = window.grid(grid_n)
    rates = [dist.hazard(v) for v in grid]
    for i in range(1, len(rates)):
        if rates[i] < rates[i - 1] - IFR_STEP_TOL:
            return IfrReport(is_ifr=False, first_violation=float(grid[i]), grid_n=grid_n)
    return IfrReport(is_ifr=True, first_violation=None, grid_n=grid_n)


def lambda_crit(
    dist: ValuationDistribution,
    window: PriceWindow,
    grid_n: int = 512,
    cap: float = HAZARD_CAP,
) -> float:
    """Supremum of the hazard over the window, with refinement near the maximizer.

    The supremum is always taken over an explicit window: for full-support
    families the hazard diverges as the survivor vanishes at v = 1, so a
    global supremum would be infinite and useless as a threshold.
    """
    grid = window.grid(grid_n)
    rates = np.array([dist.hazard(v) for v in grid])
    i = int(np.argmax(rates))
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, grid_n - 1)]
    # local refinement: three rounds of 3x zoom around the running maximizer
    best = float(rates[i])
    for _ in range(3):
        sub = np.linspace(lo, hi, 65)
        sub_rates = np.array([dist.hazard(v) for v in sub])
        j = int(np.argmax(sub_rates))
        best = max(best, float(sub_rates[j]))
        lo = sub[max(j - 1, 0)]
        hi = sub[min(j + 1, len(sub) - 1)]
    if best > cap:
        raise UnboundedError(f"hazard supremum {best:.3e} exceeds cap {cap:.3e}")
    return best
