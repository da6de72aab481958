import logging
import math

import numpy as np
import pytest

from conftest import gaussian_density
from errors import ContractError, InequalityViolation
from models import ComplexField, DensityProfile, Domain1D, InfoSample
from services import grid, infomeasures


def cosine_density(a: float, points: int = 1024, shift: float = 0.0) -> DensityProfile:
    """ρ(φ) = (1 + a·cos(φ - shift))/(2π) with its derivative; Fisher information is 1 - √(1 - a²)."""
    domain = Domain1D.circle(points)
    phi = domain.nodes - shift
    return DensityProfile(domain, (1 + a * np.cos(phi)) / (2 * math.pi), -a * np.sin(phi) / (2 * math.pi))


def counter_propagating_bumps(k: float = 1.5, a: float = 5.0) -> ComplexField:
    domain = Domain1D.half_line(lower=-20.0, upper=20.0, points=4096)
    x = domain.nodes
    right = np.exp(-(x - a) ** 2 / 4 + 1j * k * x)
    left = np.exp(-(x + a) ** 2 / 4 - 1j * k * x)
    values = right + left
    derivative = (-(x - a) / 2 + 1j * k) * right + (-(x + a) / 2 - 1j * k) * left
    return grid.normalized(ComplexField(domain, values, derivative))


# --- Entropy ---

@pytest.mark.parametrize('variance', [0.25, 1.0, 9.0])
def test_gaussian_entropy_and_power(variance):
    rho = gaussian_density(variance)
    S = infomeasures.shannon_entropy(rho)
    assert S == pytest.approx(0.5 * math.log(2 * math.pi * math.e * variance), abs=1e-9)
    assert infomeasures.entropy_power(S) == pytest.approx(variance, rel=1e-8)


def test_entropy_of_uniform_circle():
    domain = Domain1D.circle(512)
    rho = DensityProfile(domain, np.full(512, 1 / (2 * math.pi)))
    assert infomeasures.shannon_entropy(rho) == pytest.approx(math.log(2 * math.pi), abs=1e-12)


def test_entropy_power_of_zero_entropy():
    assert infomeasures.entropy_power(0.0) == pytest.approx(1 / (2 * math.pi * math.e))


def test_negative_density_is_rejected():
    rho = gaussian_density(1.0)
    values = rho.rho.copy()
    values[10] = -1e-6
    with pytest.raises(ContractError):
        infomeasures.shannon_entropy(DensityProfile(rho.domain, values, rho.drho))


def test_round_off_negatives_are_clamped():
    rho = gaussian_density(1.0)
    values = rho.rho.copy()
    values[0] = -1e-15
    assert infomeasures.shannon_entropy(DensityProfile(rho.domain, values)) == pytest.approx(
        infomeasures.shannon_entropy(rho), abs=1e-12)


# --- Fisher information ---

@pytest.mark.parametrize('variance', [0.25, 1.0, 9.0])
def test_gaussian_saturates_isoperimetric_bound(variance):
    sample = infomeasures.fisher_shannon_product(gaussian_density(variance))
    assert sample.I == pytest.approx(1 / variance, rel=1e-8)
    assert sample.P == pytest.approx(1.0, abs=1e-6)
    assert sample.var_x == pytest.approx(variance, rel=1e-8)
    assert sample.var_p is None


def test_circle_fisher_matches_closed_form():
    a = math.sqrt(3) / 2
    assert infomeasures.fisher_information(cosine_density(a)) == pytest.approx(0.5, abs=1e-12)


def test_uniform_circle_has_no_fisher_information():
    domain = Domain1D.circle(512)
    rho = DensityProfile(domain, np.full(512, 1 / (2 * math.pi)), np.zeros(512))
    assert infomeasures.fisher_information(rho) == 0.0


def test_circle_measures_ignore_rotation():
    base = cosine_density(0.6)
    rotated = cosine_density(0.6, shift=2 * math.pi * 100 / 1024)
    assert infomeasures.fisher_information(rotated) == pytest.approx(infomeasures.fisher_information(base), abs=1e-13)
    assert infomeasures.shannon_entropy(rotated) == pytest.approx(infomeasures.shannon_entropy(base), abs=1e-13)


def test_finite_difference_fallback_matches_analytic():
    line = gaussian_density(1.0)
    bare_line = DensityProfile(line.domain, line.rho)
    assert infomeasures.fisher_information(bare_line) == pytest.approx(infomeasures.fisher_information(line), abs=1e-4)

    circle = cosine_density(0.5)
    bare_circle = DensityProfile(circle.domain, circle.rho)
    assert infomeasures.fisher_information(bare_circle) == pytest.approx(infomeasures.fisher_information(circle), abs=1e-10)


def test_disabled_fallback_needs_derivative():
    rho = gaussian_density(1.0)
    with pytest.raises(ContractError):
        infomeasures.fisher_information(DensityProfile(rho.domain, rho.rho), allow_finite_difference=False)


@pytest.mark.parametrize('alpha', [0.5, 2.0, 3.0])
def test_scale_covariance(alpha):
    unit = infomeasures.fisher_shannon_product(gaussian_density(1.0))
    scaled = infomeasures.fisher_shannon_product(gaussian_density(alpha ** 2))
    assert scaled.I * alpha ** 2 == pytest.approx(unit.I, rel=1e-8)
    assert scaled.N / alpha ** 2 == pytest.approx(unit.N, rel=1e-8)
    assert scaled.P == pytest.approx(unit.P, abs=1e-8)


# --- Bound checks ---

def test_undershoot_is_logged(caplog):
    rho = gaussian_density(1.0)
    damped = DensityProfile(rho.domain, rho.rho, 0.5 * rho.drho)
    with caplog.at_level(logging.WARNING, logger='services.infomeasures'):
        sample = infomeasures.fisher_shannon_product(damped, t=3.0)
    assert sample.P == pytest.approx(0.25, abs=1e-6)
    assert "Isoperimetric bound undershot" in caplog.text


def test_undershoot_raises_when_strict():
    rho = gaussian_density(1.0)
    damped = DensityProfile(rho.domain, rho.rho, 0.5 * rho.drho)
    with pytest.raises(InequalityViolation):
        infomeasures.fisher_shannon_product(damped, strict=True)


def test_chain_is_saturated_by_gaussian():
    rho = gaussian_density(0.25)
    sample = infomeasures.fisher_shannon_product(rho, var_p=1.0)
    report = infomeasures.check_uncertainty_chain(sample)
    assert report.all_hold
    assert report.stam_margin == pytest.approx(0.0, abs=1e-6)
    assert report.power_entropy_margin == pytest.approx(0.0, abs=1e-6)
    assert report.heisenberg_margin == pytest.approx(0.0, abs=1e-6)


def test_chain_has_slack_for_moving_bumps():
    psi = counter_propagating_bumps(k=1.5)
    sample = infomeasures.fisher_shannon_product(psi.density(), var_p=grid.momentum_variance(psi))
    report = infomeasures.check_uncertainty_chain(sample)
    assert report.all_hold
    # 4·Var(p) - I = 4∫ρ(θ')² = 4k² for well separated bumps
    assert report.stam_margin == pytest.approx(9.0, rel=1e-3)
    assert report.power_entropy_margin > 20.0
    assert report.heisenberg_margin > 1.0


def test_chain_needs_momentum_variance():
    sample = InfoSample(t=0.0, S=1.0, N=1.0, I=1.0, P=1.0, var_x=1.0)
    with pytest.raises(ContractError):
        infomeasures.check_uncertainty_chain(sample)


def test_violated_chain_is_reported():
    sample = InfoSample(t=0.0, S=0.0, N=2.0, I=5.0, P=10.0, var_x=1.0, var_p=1.0)
    report = infomeasures.check_uncertainty_chain(sample)
    assert not report.stam_holds
    assert not report.power_entropy_holds
    assert report.heisenberg_holds
    assert not report.all_hold


def test_entropic_uncertainty_floor_for_gaussian():
    domain = Domain1D.half_line(lower=-10.0, upper=10.0, points=1024)
    x = domain.nodes
    values = (2 * math.pi * 0.25) ** -0.25 * np.exp(-x ** 2)
    psi = ComplexField(domain, values, -2 * x * values)
    total, margin = infomeasures.entropic_uncertainty(psi.density(), grid.momentum_density(psi))
    assert total == pytest.approx(infomeasures.ENTROPIC_FLOOR, abs=1e-6)
    assert margin == pytest.approx(0.0, abs=1e-6)
