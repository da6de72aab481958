# FILE: models.py
# Domain types shared by the services. Plain dataclasses over numpy arrays;
# constructors check the cheap structural invariants, services check the rest.

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from errors import ArgumentError, ContractError

TWO_PI = 2.0 * math.pi


class DomainKind(str, Enum):
    # HALF_LINE covers any bounded, non-periodic segment of the real line.
    HALF_LINE = 'half_line'
    CIRCLE = 'circle'


@dataclass(frozen=True)
class Domain1D:
    """Uniform 1-D grid: a line segment (Simpson quadrature) or the circle [0, 2π)."""
    kind: DomainKind
    lower: float
    upper: float
    points: int

    def __post_init__(self):
        if not self.upper > self.lower:
            raise ArgumentError(f"Domain upper bound {self.upper} must exceed lower bound {self.lower}.")
        if self.points < 16:
            raise ArgumentError(f"Domain needs at least 16 points, got {self.points}.")
        if self.kind == DomainKind.CIRCLE and (self.lower != 0.0 or self.upper != TWO_PI):
            raise ArgumentError("Circle domains must span exactly [0, 2π).")

    @classmethod
    def half_line(cls, upper: float, points: int, lower: float = 0.0) -> 'Domain1D':
        return cls(DomainKind.HALF_LINE, float(lower), float(upper), int(points))

    @classmethod
    def circle(cls, points: int) -> 'Domain1D':
        return cls(DomainKind.CIRCLE, 0.0, TWO_PI, int(points))

    @property
    def is_periodic(self) -> bool:
        return self.kind == DomainKind.CIRCLE

    @property
    def spacing(self) -> float:
        if self.is_periodic:
            return (self.upper - self.lower) / self.points
        return (self.upper - self.lower) / (self.points - 1)

    @property
    def nodes(self) -> np.ndarray:
        return self.lower + self.spacing * np.arange(self.points)


@dataclass
class ComplexField:
    """Sampled wavefunction with an optional analytic derivative channel."""
    domain: Domain1D
    values: np.ndarray
    derivative: np.ndarray | None = None

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.shape != (self.domain.points,):
            raise ArgumentError(f"Field has {self.values.size} values for a {self.domain.points}-point domain.")
        if self.derivative is not None:
            self.derivative = np.asarray(self.derivative, dtype=complex)
            if self.derivative.shape != self.values.shape:
                raise ArgumentError("Derivative channel must match the field shape.")

    def density(self) -> 'DensityProfile':
        rho = np.abs(self.values) ** 2
        drho = None
        if self.derivative is not None:
            drho = 2.0 * np.real(np.conj(self.values) * self.derivative)
        return DensityProfile(self.domain, rho, drho)


@dataclass
class DensityProfile:
    """Probability density on a domain, with dρ/dx when it is known analytically."""
    domain: Domain1D
    rho: np.ndarray
    drho: np.ndarray | None = None

    def __post_init__(self):
        self.rho = np.asarray(self.rho, dtype=float)
        if self.rho.shape != (self.domain.points,):
            raise ArgumentError(f"Density has {self.rho.size} values for a {self.domain.points}-point domain.")
        if self.drho is not None:
            self.drho = np.asarray(self.drho, dtype=float)
            if self.drho.shape != self.rho.shape:
                raise ArgumentError("Density derivative must match the density shape.")


@dataclass(frozen=True)
class InfoSample:
    """All information measures of one density at one time."""
    t: float
    S: float
    N: float
    I: float
    P: float
    var_x: float
    var_p: float | None = None

    def as_row(self) -> tuple:
        return (self.t, self.S, self.N, self.I, self.P, self.var_x, self.var_p)


@dataclass(frozen=True)
class UncertaintyReport:
    """Outcome of the isoperimetric / Stam / power-entropy / Heisenberg chain."""
    stam_holds: bool
    power_entropy_holds: bool
    heisenberg_holds: bool
    stam_margin: float
    power_entropy_margin: float
    heisenberg_margin: float

    @property
    def all_hold(self) -> bool:
        return self.stam_holds and self.power_entropy_holds and self.heisenberg_holds


@dataclass(frozen=True)
class EigenExpansion:
    """Truncated wavepacket: quantum numbers, energies and expansion coefficients."""
    numbers: np.ndarray
    energies: np.ndarray
    coefficients: np.ndarray

    def __post_init__(self):
        if not (len(self.numbers) == len(self.energies) == len(self.coefficients)):
            raise ArgumentError("Eigen expansion arrays must have equal length.")

    def __len__(self):
        return len(self.numbers)

    @property
    def weight(self) -> float:
        return float(np.sum(np.abs(self.coefficients) ** 2))


@dataclass(frozen=True)
class AiryZeroTable:
    """First zeros −z_n of Ai, stored as positive z_n, with |Ai′(−z_n)|."""
    zeros: np.ndarray
    derivatives_at_zero: np.ndarray

    def __post_init__(self):
        if len(self.zeros) != len(self.derivatives_at_zero):
            raise ArgumentError("Zero table arrays must have equal length.")
        if len(self.zeros) > 1 and not np.all(np.diff(self.zeros) > 0):
            raise ContractError("Airy zeros must be strictly increasing.")
        if not np.all(self.derivatives_at_zero > 0):
            raise ContractError("|Ai'(-z_n)| must be strictly positive.")

    def __len__(self):
        return len(self.zeros)


# --- Model packets ---

@dataclass(frozen=True)
class BouncerPacket:
    """Gaussian packet above the mirror expanded on the window n_min..n_max."""
    z0: float
    sigma: float
    p0: float
    n_min: int
    n_max: int
    coeffs: EigenExpansion
    norms: np.ndarray


@dataclass(frozen=True)
class RingParams:
    """Zero-width graphene ring. Lengths in nm, energies in meV."""
    R: float
    Delta: float
    tau: int = 1
    branch: int = 1
    E0: float = field(init=False)
    nu: float = field(init=False)

    # ħ·v_F with v_F = 1e6 m/s, in meV·nm
    HBAR_VF = 658.2119569

    def __post_init__(self):
        if self.R <= 0:
            raise ArgumentError(f"Ring radius must be positive, got {self.R}.")
        if self.Delta < 0:
            raise ArgumentError(f"Mass gap must be non-negative, got {self.Delta}.")
        if self.tau not in (1, -1):
            raise ArgumentError(f"Valley index must be +1 or -1, got {self.tau}.")
        if self.branch not in (1, -1):
            raise ArgumentError(f"Branch must be +1 or -1, got {self.branch}.")
        e0 = self.HBAR_VF / self.R
        object.__setattr__(self, 'E0', e0)
        object.__setattr__(self, 'nu', self.Delta / e0)


@dataclass(frozen=True)
class RingPacket:
    m0: int
    sigma_m: float
    params: RingParams
    coeffs: EigenExpansion
    spinor_b: np.ndarray
    norms: np.ndarray

    @property
    def modes(self) -> np.ndarray:
        return self.coeffs.numbers


# --- Revival bookkeeping ---

@dataclass(frozen=True)
class RevivalFraction:
    p: int
    q: int
    t: float

    @property
    def label(self) -> str:
        return f"{self.p}/{self.q}"


@dataclass(frozen=True)
class RevivalSchedule:
    T_cl: float
    T_r: float
    fractions: list[RevivalFraction]

    @property
    def times(self) -> np.ndarray:
        return np.array([f.t for f in self.fractions], dtype=float)


@dataclass
class InfoSeries:
    """Time-ordered information samples of one run."""
    samples: list[InfoSample]
    model_tag: str

    def __post_init__(self):
        t = self.times
        if len(t) > 1 and not np.all(np.diff(t) > 0):
            raise ContractError("Information series times must be strictly increasing.")
        if np.any(np.isnan(self.products)):
            raise ContractError("Information series contains NaN products.")

    def __len__(self):
        return len(self.samples)

    @property
    def times(self) -> np.ndarray:
        return np.array([s.t for s in self.samples], dtype=float)

    @property
    def products(self) -> np.ndarray:
        return np.array([s.P for s in self.samples], dtype=float)


@dataclass(frozen=True)
class MatchedMinimum:
    t: float
    P: float
    label: str


@dataclass(frozen=True)
class MatchReport:
    minima: list[MatchedMinimum]
    unmatched: list[RevivalFraction]

    @property
    def matched_labels(self) -> set[str]:
        return {m.label for m in self.minima if m.label != 'unassigned'}
