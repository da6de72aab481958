# FILE: services/ring.py
# Massive Dirac fermion on a zero-width graphene ring.
#
# Units: R in nm, energies in meV, time in ns. Each eigenstate is a two-component
# spinor (A, B) with angular factors e^{imφ} and e^{i(m+1)φ}; the mode sums are
# evaluated with one inverse FFT per component.

import logging
import math

import numpy as np

from errors import ArgumentError
from models import DensityProfile, Domain1D, EigenExpansion, RingPacket, RingParams

logger = logging.getLogger(__name__)

HBAR_MEV_NS = 6.582119569e-4
MIN_ANGULAR_POINTS = 512
WINDOW_SIGMAS = 6.0
WIDTH_CONVENTIONS = ('amplitude', 'probability')


# --- Spectrum ---

def reduced_energy(m, params: RingParams):
    """ε(m) = ±√(m(m+1) + ν² + 1/4) on the selected branch."""
    m = np.asarray(m, dtype=float)
    return params.branch * np.sqrt(m * (m + 1.0) + params.nu ** 2 + 0.25)


def dispersion(m, params: RingParams):
    """E_m = E0·ε(m) in meV. Scalars in, float out."""
    energy = params.E0 * reduced_energy(m, params)
    return float(energy) if np.ndim(energy) == 0 else energy


def dispersion_derivatives(m: float, params: RingParams) -> tuple[float, float]:
    """(ε', ε'') on the positive branch, using ε² = (m + 1/2)² + ν²."""
    eps = float(np.sqrt(m * (m + 1.0) + params.nu ** 2 + 0.25))
    return (m + 0.5) / eps, params.nu ** 2 / eps ** 3


def packet_center(target_energy: float, params: RingParams) -> int:
    """Smallest m >= 0 with E_m >= target_energy on the positive branch."""
    if params.branch != 1:
        raise ArgumentError("Packet centering by energy is defined on the positive branch only.")
    excess = (target_energy / params.E0) ** 2 - params.nu ** 2
    m = max(int(math.ceil(math.sqrt(excess) - 0.5)) if excess > 0 else 0, 0)
    # Guard the closed form against rounding on either side.
    while m > 0 and dispersion(m - 1, params) >= target_energy:
        m -= 1
    while dispersion(m, params) < target_energy:
        m += 1
    return m


# --- Packet ---

def ring_packet(m0: int, sigma_m: float, params: RingParams, width_convention: str = 'amplitude') -> RingPacket:
    """Gaussian superposition over m0 ± ceil(6σ_m).

    'amplitude' weights c_m ∝ exp(-(m - m0)²/(2σ²)); 'probability' makes |c_m|² that Gaussian.
    """
    if sigma_m <= 0:
        raise ArgumentError(f"Packet width sigma_m must be positive, got {sigma_m}.")
    if width_convention not in WIDTH_CONVENTIONS:
        raise ArgumentError(f"Unknown width convention '{width_convention}'.")

    half = int(math.ceil(WINDOW_SIGMAS * sigma_m))
    m = np.arange(m0 - half, m0 + half + 1)
    k = (m - m0).astype(float)
    denom = 2.0 if width_convention == 'amplitude' else 4.0
    coeffs = np.exp(-k ** 2 / (denom * sigma_m ** 2))
    coeffs /= math.sqrt(np.sum(coeffs ** 2))

    eps = reduced_energy(m, params)
    shifted = eps + params.tau * params.nu
    if np.any(np.abs(shifted) < 1e-12):
        raise ArgumentError(f"Spinor component diverges inside the window {m[0]}..{m[-1]} on this branch.")
    spinor_b = (m + 0.5) / shifted
    norms = 1.0 / np.sqrt(2.0 * math.pi * (1.0 + spinor_b ** 2))

    expansion = EigenExpansion(numbers=m, energies=params.E0 * eps, coefficients=coeffs)
    logger.debug(f"Ring packet m0={m0}, sigma_m={sigma_m}, window {m[0]}..{m[-1]}.")
    return RingPacket(m0=m0, sigma_m=sigma_m, params=params, coeffs=expansion, spinor_b=spinor_b, norms=norms)


# --- Evolution ---

class RingPropagator:
    """Angular density of a ring packet on an N-point circle via inverse FFT of the mode sums."""

    def __init__(self, packet: RingPacket, angular_points: int = 2048):
        modes = packet.modes
        if angular_points < MIN_ANGULAR_POINTS:
            raise ArgumentError(f"Ring evolution needs at least {MIN_ANGULAR_POINTS} angular points, got {angular_points}.")
        reach = int(max(np.abs(modes).max(), np.abs(modes + 1).max()))
        if angular_points <= 2 * reach:
            raise ArgumentError(f"{angular_points} angular points alias modes up to |m| = {reach}.")
        self.packet = packet
        self.domain = Domain1D.circle(angular_points)
        self._bins_a = np.mod(modes, angular_points)
        self._bins_b = np.mod(modes + 1, angular_points)
        self._weight_a = packet.coeffs.coefficients * packet.norms
        self._weight_b = self._weight_a * packet.spinor_b
        self._rate = packet.coeffs.energies / HBAR_MEV_NS

    def _synthesize(self, bins: np.ndarray, amplitudes: np.ndarray) -> np.ndarray:
        spectrum = np.zeros(self.domain.points, dtype=complex)
        np.add.at(spectrum, bins, amplitudes)
        return np.fft.ifft(spectrum) * self.domain.points

    def evolve(self, t: float) -> DensityProfile:
        phase = np.exp(-1j * self._rate * t)
        modes = self.packet.modes
        a = self._weight_a * phase
        b = self._weight_b * phase
        psi_a = self._synthesize(self._bins_a, a)
        psi_b = self._synthesize(self._bins_b, b)
        dpsi_a = self._synthesize(self._bins_a, 1j * modes * a)
        dpsi_b = self._synthesize(self._bins_b, 1j * (modes + 1) * b)

        rho = np.abs(psi_a) ** 2 + np.abs(psi_b) ** 2
        drho = 2.0 * np.real(np.conj(psi_a) * dpsi_a + np.conj(psi_b) * dpsi_b)
        total = float(np.sum(rho) * self.domain.spacing)
        return DensityProfile(self.domain, rho / total, drho / total)


def evolve_ring(packet: RingPacket, t: float, angular_points: int = 2048) -> DensityProfile:
    return RingPropagator(packet, angular_points).evolve(t)


# --- Time scales ---

def ring_time_scales(m0: int, params: RingParams) -> tuple[float, float]:
    """(T_cl, T_r) in ns: 2πħ/(E0|ε'|) and 4πħ/(E0|ε''|). T_r is inf when ν = 0."""
    if params.branch != 1:
        raise ArgumentError("Ring time scales are defined on the positive branch.")
    d1, d2 = dispersion_derivatives(m0, params)
    T_cl = 2.0 * math.pi * HBAR_MEV_NS / (params.E0 * abs(d1))
    T_r = math.inf if d2 == 0.0 else 4.0 * math.pi * HBAR_MEV_NS / (params.E0 * abs(d2))
    return T_cl, T_r
