# FILE: systems/bouncer_system.py
# Quantum bouncer as a runnable system: config schema, packet setup and per-time sampling.

import logging

import numpy as np

from config import Diagnostic
from models import InfoSample, InfoSeries
from services import bouncer, grid, infomeasures
from services.revival import dominant_spacing
from systems.base import build_schema, check_common

logger = logging.getLogger(__name__)

CHAIN_PROBES = 20
FULL_REVIVAL_FIDELITY = 0.9
FULL_REVIVAL_RECOVERY = 0.15


class BouncerRun:
    """One prepared bouncer run. sample() is safe to call from several threads."""
    model_tag = 'bouncer'
    smooth_by_default = True
    time_label = 't (scaled units)'
    units = ("t [hbar/(m g l_g)]; S [nats]; N, var_x [l_g^2]; I [1/l_g^2]; P [dimensionless]; "
             "var_p [(hbar/l_g)^2]")

    def __init__(self, values: dict):
        self.values = values
        self.packet = bouncer.packet_coefficients(values['z0'], values['sigma'], cutoff=values['coeff_cutoff'])
        self.domain = bouncer.default_domain(values['z0'], values['points'], values.get('z_max'))
        self.propagator = bouncer.BouncerPropagator(self.packet, self.domain)
        self.T_cl, self.T_r = bouncer.bouncer_time_scales(values['z0'])
        self.tol_iso = values['tol_iso']
        logger.info(f"Bouncer run prepared: z0={values['z0']}, sigma={values['sigma']}, "
                    f"T_cl={self.T_cl:.6g}, T_r={self.T_r:.6g}, grid [0, {self.domain.upper:.6g}] x {self.domain.points}.")

    def sample(self, t: float) -> InfoSample:
        psi = self.propagator.evolve(t)
        var_p = grid.momentum_variance(psi)
        return infomeasures.fisher_shannon_product(psi.density(), t=t, var_p=var_p, tol_iso=self.tol_iso)

    def _chain_summary(self, series: InfoSeries) -> dict:
        # Probe evenly spaced samples of the series.
        picks = np.unique(np.linspace(0, len(series) - 1, CHAIN_PROBES).round().astype(int))
        reports = [infomeasures.check_uncertainty_chain(series.samples[i]) for i in picks]
        return {
            'probes': len(reports),
            'all_hold': all(r.all_hold for r in reports),
            'min_stam_margin': min(r.stam_margin for r in reports),
            'min_power_entropy_margin': min(r.power_entropy_margin for r in reports),
            'min_heisenberg_margin': min(r.heisenberg_margin for r in reports),
        }

    def _entropic_summary(self) -> list[dict]:
        out = []
        for t in (0.0, 0.5 * self.T_r):
            psi = self.propagator.evolve(t)
            total, margin = infomeasures.entropic_uncertainty(psi.density(), grid.momentum_density(psi))
            out.append({'t': t, 'S_x_plus_S_p': total, 'margin': margin})
        return out

    def _full_revival_summary(self, series: InfoSeries, minima: list[tuple[float, float]], fidelity: float) -> dict:
        P0 = series.samples[0].P
        summary = {'fidelity': fidelity, 'fidelity_holds': fidelity > FULL_REVIVAL_FIDELITY,
                   't_nearest_minimum': None, 'P_nearest_minimum': None,
                   'P_near_revival_over_P0': None, 'product_recovered': False}
        if minima:
            t, P = min(minima, key=lambda m: abs(m[0] - self.T_r))
            ratio = P / P0
            summary.update(t_nearest_minimum=t, P_nearest_minimum=P, P_near_revival_over_P0=ratio,
                           product_recovered=abs(ratio - 1.0) <= FULL_REVIVAL_RECOVERY)
        if not (summary['fidelity_holds'] and summary['product_recovered']):
            logger.warning(f"Full revival only partly recovered: |A| = {fidelity:.4f}, "
                           f"P near T_r / P(0) = {summary['P_near_revival_over_P0']}.")
        return summary

    def diagnostics(self, series: InfoSeries, minima: list[tuple[float, float]]) -> dict:
        revival, t_revival = bouncer.revival_fidelity(self.packet, self.T_r, 0.5 * self.T_cl)
        classical, t_classical = bouncer.revival_fidelity(self.packet, self.T_cl, 0.5 * self.T_cl)
        psi0 = self.propagator.evolve(0.0)
        return {
            'full_revival': self._full_revival_summary(series, minima, revival),
            'basis': {
                'n_min': self.packet.n_min,
                'n_max': self.packet.n_max,
                'weight': self.packet.coeffs.weight,
            },
            'fidelity': {
                'full_revival': revival, 't_full_revival': t_revival,
                'classical_period': classical, 't_classical_period': t_classical,
            },
            'dispersion_revival_time': bouncer.dispersion_revival_time(self.packet),
            'energy': {
                'spectral': bouncer.spectral_energy(self.packet),
                'quadrature_t0': grid.expectation_energy(psi0, bouncer.potential(self.domain)),
            },
            'uncertainty_chain': self._chain_summary(series),
            'entropic_uncertainty': self._entropic_summary(),
            'dominant_spacing': dominant_spacing(minima),
        }


class BouncerSystem:
    """Gaussian packet dropped onto a hard mirror in uniform gravity."""
    name = 'bouncer'

    def get_schema(self) -> dict:
        return build_schema(self.name, "Quantum bouncer in scaled units (H = p^2 + z).", {
            'z0': {'type': 'number', 'exclusiveMinimum': 0, 'description': "Initial packet height."},
            'sigma': {'type': 'number', 'exclusiveMinimum': 0, 'description': "Packet width."},
            'p0': {'type': 'number', 'description': "Initial momentum; only 0 is supported."},
            'points': {'type': 'integer', 'minimum': 16, 'description': "Spatial grid points."},
            'z_max': {'type': 'number', 'exclusiveMinimum': 0, 'description': "Upper end of the spatial window."},
            'coeff_cutoff': {'type': 'number', 'exclusiveMinimum': 0, 'description': "Relative coefficient cutoff of the basis window."},
        })

    def check(self, values: dict) -> list[Diagnostic]:
        diagnostics = check_common(values)
        if values['p0'] != 0:
            diagnostics.append(Diagnostic('p0', "only zero initial momentum is supported"))
        if values['z0'] < 5 * values['sigma']:
            diagnostics.append(Diagnostic('z0', f"must be at least 5·sigma = {5 * values['sigma']:g} to keep the packet off the mirror"))
        z_max = values.get('z_max')
        if z_max is not None and z_max <= values['z0'] + values['sigma']:
            diagnostics.append(Diagnostic('z_max', f"must lie above the packet (z0 + sigma = {values['z0'] + values['sigma']:g})"))
        return diagnostics

    def time_scales(self, values: dict) -> tuple[float, float]:
        return bouncer.bouncer_time_scales(values['z0'])

    def prepare(self, values: dict) -> BouncerRun:
        return BouncerRun(values)
