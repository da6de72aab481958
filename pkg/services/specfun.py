# FILE: services/specfun.py
# Real Airy function Ai, its derivative and the negative-axis zeros, from scratch.
#
# Evaluation branches:
#   |x| >= 9      standard asymptotic expansions (exponential / trigonometric form)
#   |x| <  9      Taylor continuation of y'' = x y from a node table with spacing 1/2.
# The node table is seeded by the Maclaurin series at the origin (stepping outward
# on the oscillatory side) and by the asymptotic value at x = 9 (stepping inward on
# the decaying side, where continuation toward the origin is stable).

import logging
import math
from functools import lru_cache

import numpy as np

from errors import ArgumentError, DomainError
from models import AiryZeroTable

logger = logging.getLogger(__name__)

AI0 = 0.355028053887817239260063186004   # Ai(0) = 3^(-2/3) / Γ(2/3)
AIP0 = -0.258819403792806798405183560189  # Ai'(0) = -3^(-1/3) / Γ(1/3)

ASYMPTOTIC_RADIUS = 9.0
NODE_STEP = 0.5
TAYLOR_TERMS = 40
ZERO_TOL = 1e-12

_SQRT_PI = math.sqrt(math.pi)


# --- Asymptotic coefficients u_k, v_k ---

def _asymptotic_coefficients(count: int) -> tuple[np.ndarray, np.ndarray]:
    u = np.empty(count)
    u[0] = 1.0
    for k in range(1, count):
        u[k] = u[k - 1] * (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / ((2 * k - 1) * 216.0 * k)
    k = np.arange(count)
    v = -(6 * k + 1) / (6 * k - 1) * u
    return u, v


_U, _V = _asymptotic_coefficients(60)


def _truncated_sum(coeffs: np.ndarray, inv_zeta: np.ndarray, start: int, stride: int) -> np.ndarray:
    """Alternating series Σ (-1)^j c[start + stride*j] ζ^-(start + stride*j), stopped at its smallest term."""
    total = np.zeros_like(inv_zeta)
    prev = np.full_like(inv_zeta, np.inf)
    active = np.ones(inv_zeta.shape, dtype=bool)
    sign = 1.0
    for k in range(start, len(coeffs), stride):
        term = coeffs[k] * inv_zeta ** k
        active &= np.abs(term) < np.abs(prev)
        if not active.any():
            break
        total = np.where(active, total + sign * term, total)
        if np.all(np.abs(term) <= 1e-17 * np.abs(total)):
            break
        prev = term
        sign = -sign
    return total


def _asymptotic_pair(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Ai, Ai' from the large-|x| expansions. Accurate to ~1e-15 relative for |x| >= 9."""
    x = np.asarray(x, dtype=float)
    ax = np.abs(x)
    zeta = (2.0 / 3.0) * ax ** 1.5
    inv_zeta = 1.0 / zeta
    quart = ax ** 0.25
    ai = np.empty_like(x)
    aip = np.empty_like(x)

    pos = x > 0
    if pos.any():
        z, iz, q = zeta[pos], inv_zeta[pos], quart[pos]
        decay = np.exp(-z) / (2.0 * _SQRT_PI)
        ai[pos] = decay / q * _truncated_sum(_U, iz, 0, 1)
        aip[pos] = -decay * q * _truncated_sum(_V, iz, 0, 1)

    neg = ~pos
    if neg.any():
        z, iz, q = zeta[neg], inv_zeta[neg], quart[neg]
        c, s = np.cos(z - math.pi / 4), np.sin(z - math.pi / 4)
        pu, qu = _truncated_sum(_U, iz, 0, 2), _truncated_sum(_U, iz, 1, 2)
        pv, qv = _truncated_sum(_V, iz, 0, 2), _truncated_sum(_V, iz, 1, 2)
        ai[neg] = (c * pu + s * qu) / (_SQRT_PI * q)
        aip[neg] = q * (s * pv - c * qv) / _SQRT_PI
    return ai, aip


# --- Taylor continuation of y'' = x y ---

def _taylor_step(x0, y0, dy0, h, terms: int = TAYLOR_TERMS):
    """(y, y') at x0 + h for the Airy equation, given (y, y') at x0. Vectorized over all inputs."""
    x0, y0, dy0, h = np.broadcast_arrays(*(np.asarray(a, dtype=float) for a in (x0, y0, dy0, h)))
    # Coefficients a_{k-3}, a_{k-2}, a_{k-1} of the expansion in powers of h.
    a3, a2, a1 = np.zeros_like(y0), y0, dy0
    y = y0 + dy0 * h
    dy = np.array(dy0, copy=True)
    h_km1 = np.array(h, copy=True)
    h_k = h * h
    for k in range(2, terms):
        # k (k-1) a_k = x0 a_{k-2} + a_{k-3}
        a_k = (x0 * a2 + a3) / (k * (k - 1))
        y = y + a_k * h_k
        dy = dy + k * a_k * h_km1
        h_km1 = h_k
        h_k = h_k * h
        a3, a2, a1 = a2, a1, a_k
    return y, dy


def maclaurin_pair(x) -> tuple[np.ndarray, np.ndarray]:
    """Ai, Ai' from the power series at the origin. Loses accuracy for |x| beyond ~7."""
    x = np.asarray(x, dtype=float)
    terms = max(TAYLOR_TERMS, int(8 * np.max(np.abs(x), initial=0.0) ** 1.5) + 30)
    return _taylor_step(np.zeros_like(x), np.full_like(x, AI0), np.full_like(x, AIP0), x, terms)


def asymptotic_pair(x) -> tuple[np.ndarray, np.ndarray]:
    return _asymptotic_pair(np.asarray(x, dtype=float))


@lru_cache(maxsize=1)
def _node_table() -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    count = int(round(ASYMPTOTIC_RADIUS / NODE_STEP))
    nodes = NODE_STEP * np.arange(-count, count + 1)
    ai = np.empty_like(nodes)
    aip = np.empty_like(nodes)
    centre = count
    ai[centre], aip[centre] = AI0, AIP0

    # Oscillatory side: march from the origin outward.
    for j in range(centre, 0, -1):
        y, dy = _taylor_step(nodes[j], ai[j], aip[j], -NODE_STEP)
        ai[j - 1], aip[j - 1] = float(y), float(dy)

    # Decaying side: march from the asymptotic value at +9 toward the origin.
    y9, dy9 = _asymptotic_pair(np.array([nodes[-1]]))
    ai[-1], aip[-1] = y9[0], dy9[0]
    for j in range(len(nodes) - 1, centre + 1, -1):
        y, dy = _taylor_step(nodes[j], ai[j], aip[j], -NODE_STEP)
        ai[j - 1], aip[j - 1] = float(y), float(dy)

    logger.debug(f"Airy node table built with {len(nodes)} nodes on [-{ASYMPTOTIC_RADIUS}, {ASYMPTOTIC_RADIUS}].")
    return nodes, ai, aip


def _airy_pair(x) -> tuple[np.ndarray, np.ndarray]:
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise DomainError("Airy functions require finite arguments.")
    ai = np.empty_like(x)
    aip = np.empty_like(x)

    far = np.abs(x) >= ASYMPTOTIC_RADIUS
    if far.any():
        ai[far], aip[far] = _asymptotic_pair(x[far])

    near = ~far
    if near.any():
        nodes, node_ai, node_aip = _node_table()
        xs = x[near]
        idx = np.clip(np.rint((xs - nodes[0]) / NODE_STEP).astype(int), 0, len(nodes) - 1)
        x0 = nodes[idx]
        ai[near], aip[near] = _taylor_step(x0, node_ai[idx], node_aip[idx], xs - x0, terms=30)
    return ai, aip


# --- Public API ---

def airy_pair(x):
    """(Ai(x), Ai'(x)) in one pass. Scalars in, floats out; arrays keep their shape."""
    arr = np.asarray(x, dtype=float)
    ai, aip = _airy_pair(arr.reshape(-1))
    if arr.ndim == 0:
        return float(ai[0]), float(aip[0])
    return ai.reshape(arr.shape), aip.reshape(arr.shape)


def airy_ai(x):
    """Ai(x) for a real scalar or array."""
    return airy_pair(x)[0]


def airy_ai_prime(x):
    """Ai'(x) for a real scalar or array."""
    return airy_pair(x)[1]


# --- Zeros ---

def zero_seed(n: int) -> float:
    """Leading asymptotic estimate t_n = (3π(4n-1)/8)^(2/3) of the n-th zero magnitude."""
    return (3.0 * math.pi * (4 * n - 1) / 8.0) ** (2.0 / 3.0)


def _safeguarded_newton(lo: float, hi: float, guess: float, tol: float = ZERO_TOL, maxit: int = 100) -> float:
    """Root of f(z) = Ai(-z) in [lo, hi]: Newton steps, bisection whenever Newton leaves the bracket or stalls."""
    def f(z):
        ai, aip = _airy_pair(np.array([-z]))
        return float(ai[0]), float(-aip[0])

    f_lo, _ = f(lo)
    f_hi, _ = f(hi)
    if f_lo * f_hi > 0:
        raise ArgumentError(f"Zero bracket [{lo}, {hi}] does not straddle a sign change of Ai(-z).")
    # Orient so that f(xlo) < 0.
    xlo, xhi = (lo, hi) if f_lo < 0 else (hi, lo)

    x = guess
    dxold = abs(hi - lo)
    dx = dxold
    fx, dfx = f(x)
    for _ in range(maxit):
        newton_leaves = ((x - xhi) * dfx - fx) * ((x - xlo) * dfx - fx) >= 0.0
        too_slow = abs(2.0 * fx) > abs(dxold * dfx)
        if newton_leaves or too_slow:
            dxold = dx
            dx = 0.5 * (xhi - xlo)
            x = xlo + dx
        else:
            dxold = dx
            dx = fx / dfx
            x -= dx
        if abs(dx) < tol:
            return x
        fx, dfx = f(x)
        if fx < 0.0:
            xlo = x
        else:
            xhi = x
    logger.warning(f"Airy zero search reached {maxit} iterations near z = {x}.")
    return x


@lru_cache(maxsize=None)
def _airy_zero(n: int) -> float:
    seed = zero_seed(n)
    lo = 0.5 * (zero_seed(n - 1) + seed) if n > 1 else 0.0
    hi = 0.5 * (seed + zero_seed(n + 1))
    return _safeguarded_newton(lo, hi, seed)


def airy_zeros(n_max: int) -> AiryZeroTable:
    """First n_max zeros z_n (Ai(-z_n) = 0) with |Ai'(-z_n)|."""
    if n_max < 1:
        raise ArgumentError(f"airy_zeros needs n_max >= 1, got {n_max}.")
    zeros = np.array([_airy_zero(n) for n in range(1, n_max + 1)])
    derivatives = np.abs(airy_ai_prime(-zeros))
    logger.debug(f"Computed {n_max} Airy zeros; largest z = {zeros[-1]:.6f}.")
    return AiryZeroTable(zeros=zeros, derivatives_at_zero=derivatives)
