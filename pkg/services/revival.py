# FILE: services/revival.py
# Fractional-revival schedule and detection of Fisher-Shannon product minima.

import logging
import math
from fractions import Fraction

import numpy as np
from scipy.ndimage import uniform_filter1d
from scipy.signal import argrelmin

from errors import ArgumentError
from models import InfoSeries, MatchedMinimum, MatchReport, RevivalFraction, RevivalSchedule

logger = logging.getLogger(__name__)

UNASSIGNED = 'unassigned'
PERIOD_TOLERANCE = 0.1


def schedule(T_cl: float, T_r: float, q_max: int) -> RevivalSchedule:
    """All coprime p/q in (0, 1] with q <= q_max, at t = p·T_r/q, sorted by time."""
    if q_max < 2:
        raise ArgumentError(f"Revival schedule needs q_max >= 2, got {q_max}.")
    if math.isinf(T_r):
        logger.warning("Revival time is unbounded; the fractional schedule is empty.")
        return RevivalSchedule(T_cl=T_cl, T_r=T_r, fractions=[])

    values = sorted({Fraction(p, q) for q in range(1, q_max + 1) for p in range(1, q + 1)})
    fractions = [RevivalFraction(p=f.numerator, q=f.denominator, t=f.numerator * T_r / f.denominator) for f in values]
    return RevivalSchedule(T_cl=T_cl, T_r=T_r, fractions=fractions)


def smoothing_width(period: float, dt: float) -> int:
    """Odd number of samples spanning one period, at least 1."""
    width = max(int(round(period / dt)), 1)
    return width if width % 2 else width + 1


def detect_minima(series: InfoSeries, window: int, smooth: int | None = None) -> list[tuple[float, float]]:
    """Strict minima of P over a centered window, away from the series edges.

    With smooth set, P is first averaged over that many samples; the reported
    values are always the unsmoothed P at the detected times.
    """
    if window < 3 or window % 2 == 0:
        raise ArgumentError(f"Detection window must be odd and >= 3, got {window}.")
    if len(series) <= 2 * window:
        raise ArgumentError(f"Series of {len(series)} samples is too short for a window of {window}.")

    t = series.times
    P = series.products
    signal = uniform_filter1d(P, size=smooth, mode='nearest') if smooth and smooth > 1 else P

    (candidates,) = argrelmin(signal, order=window // 2)
    keep = candidates[(candidates >= window) & (candidates < len(signal) - window)]
    logger.debug(f"Detected {len(keep)} minima in {len(series)} samples (window {window}, smoothing {smooth}).")
    return [(float(t[i]), float(P[i])) for i in keep]


def match_schedule(minima: list[tuple[float, float]], revivals: RevivalSchedule, tol: float) -> MatchReport:
    """Labels each minimum with the nearest fraction within tol·T_r."""
    if tol <= 0:
        raise ArgumentError(f"Matching tolerance must be positive, got {tol}.")
    fractions = revivals.fractions
    times = revivals.times
    reach = tol * revivals.T_r

    matched = []
    hit = set()
    for t, P in minima:
        label = UNASSIGNED
        if fractions:
            nearest = int(np.argmin(np.abs(times - t)))
            if abs(times[nearest] - t) <= reach:
                label = fractions[nearest].label
                hit.add(nearest)
        matched.append(MatchedMinimum(t=t, P=P, label=label))

    unmatched = [f for i, f in enumerate(fractions) if i not in hit]
    return MatchReport(minima=matched, unmatched=unmatched)


def dominant_spacing(minima: list[tuple[float, float]]) -> float | None:
    """Median gap between consecutive minima; None with fewer than two."""
    if len(minima) < 2:
        return None
    return float(np.median(np.diff([t for t, _ in minima])))


def period_verdict(spacing: float | None, T_r: float, tol: float = PERIOD_TOLERANCE) -> str | None:
    """'T_r' or 'T_r/2' when the spacing lies within tol (relative) of it, else 'neither'."""
    if spacing is None:
        return None
    if not math.isfinite(T_r):
        return 'neither'
    for label, period in (('T_r', T_r), ('T_r/2', 0.5 * T_r)):
        if abs(spacing - period) <= tol * period:
            return label
    return 'neither'
