import math
from pathlib import Path

import numpy as np
import pytest

from models import DensityProfile, Domain1D, InfoSample, InfoSeries, RingParams
from services import bouncer, ring, specfun
from services.infomeasures import entropy_power


@pytest.fixture(scope='session')
def zero_table():
    return specfun.airy_zeros(60)


@pytest.fixture(scope='session')
def bouncer_packet():
    return bouncer.packet_coefficients(100.0, 1.0)


@pytest.fixture(scope='session')
def bouncer_domain():
    return bouncer.default_domain(100.0)


@pytest.fixture(scope='session')
def bouncer_propagator(bouncer_packet, bouncer_domain):
    return bouncer.BouncerPropagator(bouncer_packet, bouncer_domain)


@pytest.fixture(scope='session')
def fig2_params():
    return RingParams(R=50.0, Delta=50.0)


@pytest.fixture(scope='session')
def fig2_packet(fig2_params):
    return ring.ring_packet(15, 13.0, fig2_params)


def gaussian_density(variance: float, points: int = 4096, half_width: float = 15.0, center: float = 0.0) -> DensityProfile:
    """Normal density with analytic derivative on [center - L, center + L], L = half_width·s."""
    s = math.sqrt(variance)
    domain = Domain1D.half_line(lower=center - half_width * s, upper=center + half_width * s, points=points)
    x = domain.nodes - center
    rho = np.exp(-x ** 2 / (2 * variance)) / math.sqrt(2 * math.pi * variance)
    return DensityProfile(domain, rho, -x / variance * rho)


def series_from(t, P, model_tag: str = 'bouncer') -> InfoSeries:
    """Series carrying a given P(t); the other measures are filled consistently."""
    N = entropy_power(0.0)
    samples = [InfoSample(t=float(ti), S=0.0, N=N, I=float(pi) / N, P=float(pi), var_x=1.0) for ti, pi in zip(t, P)]
    return InfoSeries(samples=samples, model_tag=model_tag)


def write_config(directory: Path, name: str, text: str) -> Path:
    path = Path(directory) / f"{name}.conf"
    path.write_text(text, encoding='utf-8')
    return path
