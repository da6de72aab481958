# FILE: services/simulation_service.py
# Evaluates a prepared model at many times over a thread pool.

import logging
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import psutil

from models import InfoSample, InfoSeries

logger = logging.getLogger(__name__)


def sample_times(t_end: float, samples: int) -> np.ndarray:
    """samples equally spaced times on [0, t_end], both ends included."""
    return np.linspace(0.0, t_end, samples)


def sample_series(model_run, times, threads: int = 1) -> InfoSeries:
    """Maps model_run.sample over times and returns the series in time order.

    numpy releases the GIL inside the matrix products and FFTs, so threads give
    real parallelism here. The output order never depends on the thread count.
    """
    times = [float(t) for t in times]
    started = time.perf_counter()
    if threads <= 1:
        samples: list[InfoSample] = [model_run.sample(t) for t in times]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            samples = list(pool.map(model_run.sample, times))
    elapsed = time.perf_counter() - started

    rss_mb = psutil.Process().memory_info().rss / 2 ** 20
    logger.info(f"Evaluated {len(samples)} samples of '{model_run.model_tag}' on {threads} thread(s) "
                f"in {elapsed:.2f}s (rss {rss_mb:.0f} MiB).")
    return InfoSeries(samples=samples, model_tag=model_run.model_tag)
