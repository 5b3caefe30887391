"""Valuation-distribution families: closed forms vs numerical oracles."""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from subtrial.distributions import (
    PiecewiseIsoElastic,
    PriceWindow,
    TruncatedWeibull,
    Uniform,
    check_ifr,
    from_spec,
    lambda_crit,
)
from subtrial.exceptions import DomainError, SingularityError

ISO = PiecewiseIsoElastic(kappa=0.3, eps=0.4, v0=0.2)
WEIBULL = TruncatedWeibull(k=2.0, s=0.5)
FAMILIES = [Uniform(), ISO, WEIBULL]


class TestCdf:
    def test_uniform_midpoint(self):
        assert Uniform().cdf(0.5) == pytest.approx(0.5, abs=1e-15)

    @pytest.mark.parametrize("dist", FAMILIES)
    def test_zero_at_lower_bound(self, dist):
        assert dist.cdf(0.0) == 0.0

    def test_iso_elastic_closed_form(self):
        # survivor is exactly kappa * v**(-eps) on the pricing region
        assert ISO.cdf(0.5) == pytest.approx(1.0 - 0.3 * 0.5 ** (-0.4), abs=1e-14)

    def test_iso_elastic_matches_density_integral(self):
        for v in [0.1, 0.3, 0.5, 0.8, 0.99]:
            mass, _ = quad(ISO.pdf, 0.0, v, points=[ISO.v0], epsabs=1e-12, limit=200)
            assert mass == pytest.approx(ISO.cdf(v), abs=1e-9)

    @pytest.mark.parametrize("dist", FAMILIES)
    def test_monotone_on_grid(self, dist):
        grid = np.linspace(0.0, 1.0, 201)
        vals = [dist.cdf(v) for v in grid]
        assert all(b >= a for a, b in zip(vals, vals[1:]))

    @pytest.mark.parametrize("dist", FAMILIES)
    def test_rejects_out_of_range(self, dist):
        with pytest.raises(DomainError):
            dist.cdf(-0.1)
        with pytest.raises(DomainError):
            dist.cdf(1.1)


class TestPdf:
    def test_uniform_is_flat(self):
        for v in [0.1, 0.5, 0.9]:
            assert Uniform().pdf(v) == 1.0

    def test_iso_elastic_closed_form(self):
        assert ISO.pdf(0.5) == pytest.approx(0.3 * 0.4 * 0.5 ** (-1.4), rel=1e-14)

    def test_weibull_renormalization(self):
        # oracle: renormalize the raw Weibull density by its mass on [0, 1]
        raw = lambda v: (2.0 / 0.5) * (v / 0.5) * math.exp(-((v / 0.5) ** 2))
        mass, _ = quad(raw, 0.0, 1.0, epsabs=1e-12)
        for v in [0.2, 0.5, 0.8]:
            assert WEIBULL.pdf(v) == pytest.approx(raw(v) / mass, rel=1e-10)

    @pytest.mark.parametrize("dist", FAMILIES)
    def test_total_mass_is_one(self, dist):
        points = [ISO.v0] if isinstance(dist, PiecewiseIsoElastic) else None
        mass, _ = quad(dist.pdf, 0.0, 1.0, points=points, epsabs=1e-12, limit=200)
        assert mass + dist.atom_at_one == pytest.approx(1.0, abs=1e-8)

    @pytest.mark.parametrize("dist", FAMILIES)
    def test_matches_cdf_finite_difference(self, dist):
        h = 1e-6
        for v in np.linspace(0.05, 0.95, 19):
            if isinstance(dist, PiecewiseIsoElastic) and abs(v - dist.v0) < 2 * h:
                continue
            fd = (dist.cdf(v + h) - dist.cdf(v - h)) / (2 * h)
            assert fd == pytest.approx(dist.pdf(v), rel=1e-4)

    @pytest.mark.parametrize("dist", FAMILIES)
    def test_positive_on_support(self, dist):
        for v in np.linspace(0.05, 0.95, 19):
            assert dist.pdf(v) >= 1e-12


class TestHazard:
    def test_uniform_value(self):
        assert Uniform().hazard(0.5) == pytest.approx(2.0, rel=1e-14)

    def test_iso_elastic_is_eps_over_v(self):
        for v in [0.3, 0.5, 0.8]:
            assert ISO.hazard(v) == pytest.approx(0.4 / v, rel=1e-12)

    def test_diverges_at_upper_support(self):
        with pytest.raises(SingularityError):
            Uniform().hazard(1.0 - 1e-13)

    @pytest.mark.parametrize("dist", FAMILIES)
    def test_hazard_times_survivor_is_pdf(self, dist):
        for v in np.linspace(0.1, 0.9, 17):
            assert dist.hazard(v) * dist.survivor(v) == pytest.approx(dist.pdf(v), rel=1e-10)


class TestSurvivorIdentity:
    @pytest.mark.parametrize("dist", FAMILIES)
    def test_complement_away_from_atom(self, dist):
        for v in np.linspace(0.0, 0.999, 21):
            assert dist.cdf(v) + dist.survivor(v) == pytest.approx(1.0, abs=1e-12)

    def test_iso_elastic_atom_at_one(self):
        assert ISO.atom_at_one == pytest.approx(0.3)
        assert ISO.survivor(1.0) == pytest.approx(0.3)
        assert ISO.cdf(1.0) == 1.0


class TestIfrCheck:
    def test_uniform_is_ifr(self):
        assert check_ifr(Uniform(), PriceWindow(0.05, 0.95)).is_ifr

    def test_iso_elastic_tail_is_not(self):
        report = check_ifr(ISO, PriceWindow(0.25, 0.9))
        assert not report.is_ifr
        assert report.first_violation is not None

    def test_weibull_is_ifr(self):
        assert check_ifr(WEIBULL, PriceWindow(0.05, 0.95)).is_ifr

    def test_rejects_tiny_grid(self):
        with pytest.raises(DomainError):
            check_ifr(Uniform(), PriceWindow(0.1, 0.9), grid_n=8)


class TestLambdaCrit:
    @pytest.mark.parametrize(
        "window,expected", [(PriceWindow(0.05, 0.9), 10.0), (PriceWindow(0.05, 0.95), 20.0)]
    )
    def test_uniform_hazard_sup(self, window, expected):
        assert lambda_crit(Uniform(), window) == pytest.approx(expected, rel=1e-9)

    def test_iso_elastic_sup_at_left_edge(self):
        assert lambda_crit(ISO, PriceWindow(0.25, 0.9)) == pytest.approx(1.6, rel=1e-9)

    def test_shrinks_with_window(self):
        full = lambda_crit(Uniform(), PriceWindow(0.05, 0.95))
        inner = lambda_crit(Uniform(), PriceWindow(0.1, 0.8))
        assert inner <= full


class TestSubIntervalUniform:
    def test_cdf_clamps_outside_support(self):
        dist = Uniform(a=0.3, b=0.8)
        assert dist.cdf(0.1) == 0.0
        assert dist.cdf(0.9) == 1.0
        assert dist.cdf(0.55) == pytest.approx(0.5)

    def test_density_zero_off_support(self):
        dist = Uniform(a=0.3, b=0.8)
        assert dist.pdf(0.1) == 0.0
        assert dist.pdf(0.9) == 0.0
        assert dist.pdf(0.5) == pytest.approx(2.0)


class TestWeibullHazardShape:
    def test_strictly_increasing_for_shape_above_one(self):
        grid = np.linspace(0.05, 0.95, 40)
        rates = [WEIBULL.hazard(v) for v in grid]
        assert all(b > a for a, b in zip(rates, rates[1:]))

    def test_exceeds_untruncated_hazard(self):
        # right truncation removes upper mass, raising the conditional rate
        for v in [0.3, 0.6, 0.9]:
            raw = (2.0 / 0.5) * (v / 0.5)
            assert WEIBULL.hazard(v) > raw


class TestConstruction:
    def test_iso_elastic_rejects_unit_overflow(self):
        # survivor would exceed one at the splice point
        with pytest.raises(DomainError):
            PiecewiseIsoElastic(kappa=0.9, eps=0.4, v0=0.2)

    def test_weibull_rejects_decreasing_hazard_shape(self):
        with pytest.raises(DomainError):
            TruncatedWeibull(k=0.5, s=0.5)

    def test_from_spec_round_trip(self):
        for dist in FAMILIES:
            rebuilt = from_spec(dist.to_spec())
            assert rebuilt == dist

    def test_from_spec_rejects_unknown_family(self):
        with pytest.raises(DomainError):
            from_spec({"family": "lognormal"})

    def test_window_ordering(self):
        with pytest.raises(DomainError):
            PriceWindow(0.9, 0.2)
