# FILE: systems/ring_system.py
# Graphene quantum ring as a runnable system.

import logging
import math
from dataclasses import replace

from config import Diagnostic
from models import InfoSample, InfoSeries, RingParams
from services import infomeasures, ring
from services.revival import PERIOD_TOLERANCE, dominant_spacing, period_verdict
from systems.base import build_schema, check_common

logger = logging.getLogger(__name__)


def _params(values: dict) -> RingParams:
    branch = 1 if values['branch'] == '+' else -1
    return RingParams(R=values['R'], Delta=values['Delta'], tau=values['tau'], branch=branch)


def _center(values: dict, params: RingParams) -> int:
    if values.get('m0') is not None:
        return values['m0']
    return ring.packet_center(values['target_energy'], replace(params, branch=1))


class RingRun:
    model_tag = 'ring'
    smooth_by_default = False
    time_label = 't (ns)'
    units = "t [ns]; S [nats]; N, var_x [rad^2]; I [1/rad^2]; P [dimensionless]; var_p not computed"

    def __init__(self, values: dict):
        self.values = values
        self.params = _params(values)
        self.m0 = _center(values, self.params)
        self.packet = ring.ring_packet(self.m0, values['sigma_m'], self.params, values['width_convention'])
        self.propagator = ring.RingPropagator(self.packet, values['angular_points'])
        # |E'| and |E''| do not depend on the branch sign.
        self.T_cl, self.T_r = ring.ring_time_scales(self.m0, replace(self.params, branch=1))
        self.tol_iso = values['tol_iso']
        logger.info(f"Ring run prepared: m0={self.m0}, E_m0={ring.dispersion(self.m0, self.params):.6g} meV, "
                    f"nu={self.params.nu:.6g}, T_cl={self.T_cl:.6g} ns, T_r={self.T_r:.6g} ns.")

    def sample(self, t: float) -> InfoSample:
        return infomeasures.fisher_shannon_product(self.propagator.evolve(t), t=t, tol_iso=self.tol_iso)

    def diagnostics(self, series: InfoSeries, minima: list[tuple[float, float]]) -> dict:
        spacing = dominant_spacing(minima)
        half = 0.5 * self.T_r
        comparison = None
        if spacing is not None and math.isfinite(self.T_r):
            comparison = {
                'spacing_over_T_r': spacing / self.T_r,
                'spacing_over_T_r_half': spacing / half,
                'tolerance': PERIOD_TOLERANCE,
                'verdict': period_verdict(spacing, self.T_r),
            }
            if comparison['verdict'] == 'neither':
                logger.warning(f"Median spacing of minima {spacing:.6g} ns matches neither T_r = {self.T_r:.6g} ns "
                               f"nor T_r/2 within {PERIOD_TOLERANCE:.0%}.")
        return {
            'm0': self.m0,
            'E_m0': ring.dispersion(self.m0, self.params),
            'E0': self.params.E0,
            'nu': self.params.nu,
            'T_r_half': half,
            'dominant_spacing': spacing,
            'spacing_comparison': comparison,
        }


class RingSystem:
    """Massive Dirac packet on a zero-width ring of radius R."""
    name = 'ring'

    def get_schema(self) -> dict:
        return build_schema(self.name, "Graphene ring with mass gap, angular density evolution.", {
            'm0': {'type': 'integer', 'description': "Packet center; derived from target_energy when absent."},
            'target_energy': {'type': 'number', 'exclusiveMinimum': 0, 'description': "Energy (meV) the packet center first reaches."},
            'sigma_m': {'type': 'number', 'exclusiveMinimum': 0, 'description': "Gaussian width in angular momentum."},
            'R': {'type': 'number', 'exclusiveMinimum': 0, 'description': "Ring radius (nm)."},
            'Delta': {'type': 'number', 'minimum': 0, 'description': "Mass gap (meV)."},
            'tau': {'type': 'integer', 'enum': [1, -1], 'description': "Valley index."},
            'branch': {'type': 'string', 'enum': ['+', '-'], 'description': "Energy branch."},
            'width_convention': {'type': 'string', 'enum': list(ring.WIDTH_CONVENTIONS), 'description': "Whether sigma_m is the amplitude or probability width."},
            'angular_points': {'type': 'integer', 'minimum': ring.MIN_ANGULAR_POINTS, 'description': "Points on the circle."},
        })

    def check(self, values: dict) -> list[Diagnostic]:
        diagnostics = check_common(values)
        if values['Delta'] == 0:
            diagnostics.append(Diagnostic('Delta', "nu = 0 makes the revival time unbounded; t_end counts classical periods "
                                                   "and revival detection is skipped", severity='warning'))
        params = _params(values)
        m0 = _center(values, params)
        reach = abs(m0) + math.ceil(ring.WINDOW_SIGMAS * values['sigma_m']) + 1
        if values['angular_points'] <= 2 * reach:
            diagnostics.append(Diagnostic('angular_points', f"must exceed {2 * reach} to resolve modes up to |m| = {reach}"))
        return diagnostics

    def time_scales(self, values: dict) -> tuple[float, float]:
        params = replace(_params(values), branch=1)
        return ring.ring_time_scales(_center(values, params), params)

    def prepare(self, values: dict) -> RingRun:
        return RingRun(values)
