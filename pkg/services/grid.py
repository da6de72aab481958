# FILE: services/grid.py
# Quadrature, moments, finite differences and the position -> momentum transform.

import logging
import math

import numpy as np
from scipy.integrate import simpson

from errors import ArgumentError, ContractError, NumericError
from models import ComplexField, DensityProfile, Domain1D, DomainKind

logger = logging.getLogger(__name__)

PADDING_FACTOR = 4
NORM_TOLERANCE = 1e-4
FD_HALF_WIDTH = 8


# --- Quadrature and moments ---

def integrate(f, domain: Domain1D) -> float:
    """Composite Simpson on line segments, periodic trapezoid on the circle."""
    f = np.asarray(f)
    if f.shape != (domain.points,):
        raise ArgumentError(f"Integrand has {f.size} values for a {domain.points}-point domain.")
    if np.any(np.isnan(f)):
        raise NumericError("NaN in integrand.")
    if domain.is_periodic:
        return float(np.sum(f) * domain.spacing)
    return float(simpson(f, dx=domain.spacing))


def mean(rho: DensityProfile) -> float:
    return integrate(rho.domain.nodes * rho.rho, rho.domain)


def variance(rho: DensityProfile) -> float:
    """∫x²ρ - (∫xρ)², clipped at zero against round-off."""
    x = rho.domain.nodes
    first = integrate(x * rho.rho, rho.domain)
    second = integrate(x * x * rho.rho, rho.domain)
    return max(second - first * first, 0.0)


def norm(psi: ComplexField) -> float:
    return integrate(np.abs(psi.values) ** 2, psi.domain)


def normalized(psi: ComplexField) -> ComplexField:
    scale = 1.0 / math.sqrt(norm(psi))
    derivative = None if psi.derivative is None else psi.derivative * scale
    return ComplexField(psi.domain, psi.values * scale, derivative)


def expectation_momentum(psi: ComplexField) -> float:
    """⟨p⟩ = ∫ Im(ψ* ψ') with ħ = 1."""
    _require_derivative(psi)
    return integrate(np.imag(np.conj(psi.values) * psi.derivative), psi.domain)


def momentum_variance(psi: ComplexField) -> float:
    """Var(p) = ∫|ψ'|² - ⟨p⟩² from the derivative channel (ψ vanishing at both ends)."""
    _require_derivative(psi)
    second = integrate(np.abs(psi.derivative) ** 2, psi.domain)
    first = expectation_momentum(psi)
    return max(second - first * first, 0.0)


def expectation_energy(psi: ComplexField, potential) -> float:
    """⟨ψ|p² + V|ψ⟩ = ∫|ψ'|² + V|ψ|² (kinetic term by parts, ψ vanishing at both ends)."""
    _require_derivative(psi)
    integrand = np.abs(psi.derivative) ** 2 + np.asarray(potential, dtype=float) * np.abs(psi.values) ** 2
    return integrate(integrand, psi.domain)


def _require_derivative(psi: ComplexField):
    if psi.derivative is None:
        raise ContractError("Operation needs the analytic derivative channel of the field.")


# --- Finite differences ---

def _central_weights(half_width: int) -> np.ndarray:
    # Weights of the centered first-derivative stencil of order 2p, offsets 1..p.
    p = half_width
    k = np.arange(1, p + 1)
    fact = math.factorial
    return np.array([(-1) ** (j + 1) * fact(p) ** 2 / (j * fact(p - j) * fact(p + j)) for j in k], dtype=float)


def finite_difference(f, domain: Domain1D, half_width: int = FD_HALF_WIDTH,
                      lower_parity: int | None = None) -> np.ndarray:
    """Centered first derivative. Periodic wrap on circles; second-order edges on segments.

    lower_parity = -1 (odd) or +1 (even) reflects f across the lower end of a segment,
    which keeps the full stencil order up to a hard wall. Complex input is differentiated
    as is.
    """
    f = np.asarray(f)
    if not np.iscomplexobj(f):
        f = f.astype(float)
    h = domain.spacing
    weights = _central_weights(half_width)
    if domain.is_periodic:
        out = np.zeros_like(f)
        for j, w in enumerate(weights, start=1):
            out += w * (np.roll(f, -j) - np.roll(f, j))
        return out / h

    p = half_width
    pad = 0
    if lower_parity is not None:
        if lower_parity not in (-1, 1):
            raise ArgumentError(f"lower_parity must be -1 or +1, got {lower_parity}.")
        if f.size <= p:
            raise ArgumentError(f"Reflection needs more than {p} points, got {f.size}.")
        pad = p
        f = np.concatenate([lower_parity * f[p:0:-1], f])

    out = np.gradient(f, h, edge_order=2)
    if f.size > 2 * p:
        interior = np.zeros(f.size - 2 * p, dtype=f.dtype)
        for j, w in enumerate(weights, start=1):
            interior += w * (f[p + j:f.size - p + j] - f[p - j:f.size - p - j])
        out[p:f.size - p] = interior / h
    return out[pad:]


def with_finite_difference(psi: ComplexField, lower_parity: int | None = None) -> ComplexField:
    """The same field with its derivative channel replaced by finite differences of ψ."""
    return ComplexField(psi.domain, psi.values, finite_difference(psi.values, psi.domain, lower_parity=lower_parity))


# --- Spectral transform ---

def _padded_length(points: int) -> int:
    target = PADDING_FACTOR * points
    return 1 << (target - 1).bit_length()


def momentum_amplitude(psi: ComplexField) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """ψ̃(p) = (2π)^(-1/2) ∫ψ(z) e^{-ipz} dz on the zero-padded grid, with dψ̃/dp.

    Returns (p, amplitude, derivative) with p sorted ascending.
    """
    domain = psi.domain
    if domain.kind != DomainKind.HALF_LINE:
        raise ArgumentError("Momentum transform is defined for line domains only.")
    n_ext = _padded_length(domain.points)
    dz = domain.spacing
    p = 2.0 * math.pi * np.fft.fftfreq(n_ext, d=dz)
    phase = np.exp(-1j * p * domain.lower) * dz / math.sqrt(2.0 * math.pi)
    z = domain.nodes
    amplitude = phase * np.fft.fft(psi.values, n=n_ext)
    derivative = phase * np.fft.fft(-1j * z * psi.values, n=n_ext)
    order = np.argsort(p, kind='stable')
    return p[order], amplitude[order], derivative[order]


def position_amplitude(p: np.ndarray, amplitude: np.ndarray, domain: Domain1D) -> np.ndarray:
    """Inverse of momentum_amplitude: recovers ψ on the original grid."""
    n_ext = len(p)
    dz = domain.spacing
    unsorted = 2.0 * math.pi * np.fft.fftfreq(n_ext, d=dz)
    order = np.argsort(unsorted, kind='stable')
    spectrum = np.empty(n_ext, dtype=complex)
    spectrum[order] = amplitude
    spectrum /= np.exp(-1j * unsorted * domain.lower) * dz / math.sqrt(2.0 * math.pi)
    return np.fft.ifft(spectrum)[:domain.points]


def momentum_density(psi: ComplexField) -> DensityProfile:
    """|ψ̃(p)|² on the conjugate grid p_k = 2πk/L_ext, normalized, with analytic dρ/dp."""
    norm_in = norm(psi)
    if abs(norm_in - 1.0) > NORM_TOLERANCE:
        raise ContractError(f"Momentum transform needs a normalized field, got norm {norm_in:.6g}.")
    p, amplitude, derivative = momentum_amplitude(psi)
    rho = np.abs(amplitude) ** 2
    drho = 2.0 * np.real(np.conj(amplitude) * derivative)

    # Parseval on the rectangle rule, which the discrete transform preserves exactly.
    dp = p[1] - p[0]
    parseval = abs(np.sum(rho) * dp - np.sum(np.abs(psi.values) ** 2) * psi.domain.spacing)
    if parseval > 1e-8:
        logger.warning(f"Parseval residual {parseval:.3e} exceeds 1e-8 in momentum transform.")

    domain = Domain1D.half_line(lower=float(p[0]), upper=float(p[-1]), points=len(p))
    total = integrate(rho, domain)
    return DensityProfile(domain, rho / total, drho / total)
