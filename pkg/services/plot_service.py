# FILE: services/plot_service.py
# P(t) figure with the predicted revival times as dotted markers.

import logging
from pathlib import Path

import matplotlib

matplotlib.use('Agg')
import matplotlib.pyplot as plt  # noqa: E402

from models import InfoSeries, RevivalSchedule  # noqa: E402

logger = logging.getLogger(__name__)


def plot_product(path: Path, series: InfoSeries, revivals: RevivalSchedule, minima=(), time_label: str = 't') -> Path | None:
    """Saves the figure as SVG. Any failure is logged and returns None; it never aborts a run."""
    path = Path(path)
    try:
        fig, ax = plt.subplots(figsize=(8, 4.5))
        ax.plot(series.times, series.products, linewidth=1.0, color='#1f77b4', label='P(t)')
        for fraction in revivals.fractions:
            ax.axvline(fraction.t, linestyle=':', color='0.4', linewidth=0.9)
            ax.annotate(fraction.label, (fraction.t, 1.0), xycoords=('data', 'axes fraction'),
                        xytext=(2, -10), textcoords='offset points', fontsize=7, color='0.3')
        if minima:
            ax.plot([t for t, _ in minima], [P for _, P in minima], 'v', markersize=4, color='#d62728', label='minima')
        ax.set_xlabel(time_label)
        ax.set_ylabel('Fisher-Shannon product P')
        ax.set_title(f"Fisher-Shannon product ({series.model_tag})")
        ax.grid(True, alpha=0.25)
        ax.legend(fontsize=8)
        fig.tight_layout()
        path.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(path, format='svg')
        plt.close(fig)
    except Exception as e:
        plt.close('all')
        logger.warning(f"Plot skipped for {path}: {e}")
        return None
    logger.info(f"Wrote figure to {path}")
    return path
