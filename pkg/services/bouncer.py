# FILE: services/bouncer.py
# Quantum bouncer in scaled units (H = p² + z, ħ = 1, hard mirror at z = 0).
# Eigenfunctions are shifted Airy functions, energies are the Airy zero magnitudes.

import logging
import math

import numpy as np

from errors import ArgumentError, ContractError, TruncationError
from models import AiryZeroTable, BouncerPacket, ComplexField, Domain1D, EigenExpansion
from services import specfun
from services.grid import integrate

logger = logging.getLogger(__name__)

COEFF_CUTOFF = 1e-10
EDGE_RATIO = 1e-8
COMPLETENESS_DEFICIT = 1e-3
COMPLETENESS_EXCESS = 1e-4
DEFAULT_POINTS = 8192
# Dirichlet wall: ψ continues as an odd function below z = 0.
MIRROR_PARITY = -1


# --- Eigenbasis ---

def _check_index(n: int, table: AiryZeroTable):
    if not 1 <= n <= len(table):
        raise ArgumentError(f"Eigenfunction index {n} outside the zero table (1..{len(table)}).")


def eigenfunction(n: int, z, table: AiryZeroTable) -> np.ndarray:
    """φ_n(z) = Ai(z - z_n) / |Ai'(-z_n)|, unit norm on the half-line."""
    _check_index(n, table)
    z = np.asarray(z, dtype=float)
    return specfun.airy_ai(z - table.zeros[n - 1]) / table.derivatives_at_zero[n - 1]


def eigenfunction_derivative(n: int, z, table: AiryZeroTable) -> np.ndarray:
    _check_index(n, table)
    z = np.asarray(z, dtype=float)
    return specfun.airy_ai_prime(z - table.zeros[n - 1]) / table.derivatives_at_zero[n - 1]


def initial_gaussian(z, z0: float, sigma: float) -> np.ndarray:
    """Ψ(z, 0) = (2/(πσ²))^(1/4) exp(-(z - z0)²/σ²)."""
    z = np.asarray(z, dtype=float)
    return (2.0 / (math.pi * sigma ** 2)) ** 0.25 * np.exp(-((z - z0) ** 2) / sigma ** 2)


def default_domain(z0: float, points: int = DEFAULT_POINTS, z_max: float | None = None) -> Domain1D:
    """[0, z0 + 8√z0]: the turning point plus eight turning-point widths."""
    upper = z_max if z_max is not None else z0 + 8.0 * math.sqrt(z0)
    return Domain1D.half_line(upper=upper, points=points)


# --- Packet coefficients ---

def _closed_form(z0: float, sigma: float, table: AiryZeroTable) -> np.ndarray:
    # c_n = N_n (2πσ²)^(1/4) exp[(σ²/4)(z0 - z_n + σ⁴/24)] Ai(z0 - z_n + σ⁴/16), in log form so
    # the growing exponential never overflows against the decaying Airy tail.
    zn = table.zeros
    ai = specfun.airy_ai(z0 - zn + sigma ** 4 / 16.0)
    log_prefactor = (-np.log(table.derivatives_at_zero) + 0.25 * math.log(2.0 * math.pi * sigma ** 2)
                     + 0.25 * sigma ** 2 * (z0 - zn + sigma ** 4 / 24.0))
    with np.errstate(divide='ignore'):
        log_ai = np.log(np.abs(ai))
    return np.sign(ai) * np.exp(log_prefactor + log_ai)


def _zero_count_for(z: float) -> int:
    # Invert the leading asymptotic z_n ≈ (3π(4n - 1)/8)^(2/3).
    return int(math.ceil((8.0 * z ** 1.5 / (3.0 * math.pi) + 1.0) / 4.0)) + 1


def check_completeness(weight: float):
    """Σ|c_n|² must lie in [1 - COMPLETENESS_DEFICIT, 1 + COMPLETENESS_EXCESS]."""
    if weight < 1.0 - COMPLETENESS_DEFICIT:
        raise TruncationError(f"Truncated basis misses {1.0 - weight:.3e} of the probability; "
                              f"enlarge the window or lower the cutoff.")
    if weight > 1.0 + COMPLETENESS_EXCESS:
        raise ContractError(f"Coefficient weight {weight:.9f} exceeds 1 by more than {COMPLETENESS_EXCESS:g}; "
                            f"the closed-form coefficients are inconsistent with the zero table.")


def packet_coefficients(z0: float, sigma: float, table: AiryZeroTable | None = None,
                        cutoff: float = COEFF_CUTOFF) -> BouncerPacket:
    """Closed-form expansion of the zero-momentum Gaussian at height z0.

    The basis window is every n with |c_n| >= cutoff·max|c|, padded by one index on each
    side. Without a table one is grown until the window closes inside it.
    """
    if z0 <= 0 or sigma <= 0:
        raise ArgumentError(f"Packet needs z0 > 0 and sigma > 0, got z0={z0}, sigma={sigma}.")
    if z0 < 5.0 * sigma:
        raise ArgumentError(f"Packet at z0={z0} is not clear of the mirror (needs z0 >= 5·sigma = {5 * sigma}).")

    grow = table is None
    if grow:
        table = specfun.airy_zeros(_zero_count_for(z0 + 100.0 / sigma ** 2 + 10.0))
    while True:
        coeffs = _closed_form(z0, sigma, table)
        magnitude = np.abs(coeffs)
        significant = np.nonzero(magnitude >= cutoff * magnitude.max())[0]
        lo, hi = significant[0], significant[-1]
        if hi + 1 < len(table) or not grow:
            break
        table = specfun.airy_zeros(int(len(table) * 1.5))
        logger.debug(f"Bouncer zero table grown to {len(table)} entries.")

    lo = max(lo - 1, 0)
    hi = min(hi + 1, len(table) - 1)
    peak = magnitude.max()
    if magnitude[hi] >= EDGE_RATIO * peak or (lo > 0 and magnitude[lo] >= EDGE_RATIO * peak):
        raise TruncationError(f"Coefficient window [{lo + 1}, {hi + 1}] is cut short; supply a larger zero table.")

    window = slice(lo, hi + 1)
    numbers = np.arange(lo + 1, hi + 2)
    expansion = EigenExpansion(numbers=numbers, energies=table.zeros[window].copy(), coefficients=coeffs[window].copy())
    check_completeness(expansion.weight)

    logger.info(f"Bouncer basis window n={numbers[0]}..{numbers[-1]} ({len(numbers)} states), Σ|c|² = {expansion.weight:.9f}.")
    return BouncerPacket(z0=z0, sigma=sigma, p0=0.0, n_min=int(numbers[0]), n_max=int(numbers[-1]),
                         coeffs=expansion, norms=table.derivatives_at_zero[window].copy())


def overlap_coefficients(packet: BouncerPacket, domain: Domain1D) -> np.ndarray:
    """c_n = ∫φ_n Ψ(z,0) dz by quadrature, for checking the closed form."""
    z = domain.nodes
    psi0 = initial_gaussian(z, packet.z0, packet.sigma)
    out = np.empty(len(packet.coeffs))
    for i, (zn, norm) in enumerate(zip(packet.coeffs.energies, packet.norms)):
        out[i] = integrate(specfun.airy_ai(z - zn) / norm * psi0, domain)
    return out


# --- Time evolution ---

class BouncerPropagator:
    """Holds the basis sampled on a grid; each evolve() is one pair of matrix products."""

    def __init__(self, packet: BouncerPacket, domain: Domain1D):
        self.packet = packet
        self.domain = domain
        args = domain.nodes[np.newaxis, :] - packet.coeffs.energies[:, np.newaxis]
        ai, aip = specfun.airy_pair(args)
        scale = 1.0 / packet.norms[:, np.newaxis]
        self._basis = ai * scale
        self._basis_prime = aip * scale
        self._norm = math.sqrt(packet.coeffs.weight)
        logger.debug(f"Bouncer propagator built: {self._basis.shape[0]} states on {domain.points} points.")

    def amplitudes(self, t: float) -> np.ndarray:
        coeffs = self.packet.coeffs
        return coeffs.coefficients * np.exp(-1j * coeffs.energies * t) / self._norm

    def evolve(self, t: float) -> ComplexField:
        a = self.amplitudes(t)
        return ComplexField(self.domain, a @ self._basis, a @ self._basis_prime)


def evolve(packet: BouncerPacket, t: float, domain: Domain1D) -> ComplexField:
    if t < 0:
        raise ArgumentError(f"Evolution time must be non-negative, got {t}.")
    return BouncerPropagator(packet, domain).evolve(t)


def potential(domain: Domain1D) -> np.ndarray:
    return domain.nodes


def spectral_energy(packet: BouncerPacket) -> float:
    """⟨E⟩ = Σ|c_n|² z_n over the normalized window."""
    weights = np.abs(packet.coeffs.coefficients) ** 2
    return float(np.sum(weights * packet.coeffs.energies) / np.sum(weights))


# --- Time scales and revival diagnostics ---

def bouncer_time_scales(z0: float) -> tuple[float, float]:
    """(T_cl, T_r) = (2√z0, 4z0²/π)."""
    if z0 <= 0:
        raise ArgumentError(f"Time scales need z0 > 0, got {z0}.")
    return 2.0 * math.sqrt(z0), 4.0 * z0 ** 2 / math.pi


def dispersion_revival_time(packet: BouncerPacket, center: float | None = None) -> float:
    """2π/|E''(n0)| from centered differences of z_n at the level nearest center (default z0)."""
    energies = packet.coeffs.energies
    target = packet.z0 if center is None else center
    n0 = int(np.argmin(np.abs(energies - target)))
    n0 = min(max(n0, 1), len(energies) - 2)
    curvature = energies[n0 + 1] - 2.0 * energies[n0] + energies[n0 - 1]
    return 2.0 * math.pi / abs(curvature)


def autocorrelation(packet: BouncerPacket, t) -> np.ndarray:
    """A(t) = ⟨Ψ(0)|Ψ(t)⟩ = Σ|c_n|² e^{-i z_n t} / Σ|c_n|²."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    weights = np.abs(packet.coeffs.coefficients) ** 2
    phases = np.exp(-1j * np.outer(t, packet.coeffs.energies))
    return phases @ weights / weights.sum()


def revival_fidelity(packet: BouncerPacket, t_center: float, half_width: float, samples: int = 2001) -> tuple[float, float]:
    """Best |A(t)| within t_center ± half_width and the time where it occurs."""
    t = np.linspace(max(t_center - half_width, 0.0), t_center + half_width, samples)
    magnitude = np.abs(autocorrelation(packet, t))
    best = int(np.argmax(magnitude))
    return float(magnitude[best]), float(t[best])
