# FILE: services/output_service.py
# Writes the per-run CSV time series and the JSON revival report.

import csv
import json
import logging
import math
from pathlib import Path
from typing import Any

import numpy as np

from models import InfoSeries

logger = logging.getLogger(__name__)

CSV_HEADER = ['t', 'S', 'N', 'I', 'P', 'var_x', 'var_p']


def _format(value) -> str:
    # 17 significant digits round-trip every double exactly.
    return '' if value is None else format(float(value), '.17g')


def write_series_csv(path: Path, series: InfoSeries, units: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open('w', encoding='utf-8', newline='') as f:
        f.write(f"# units: {units}\n")
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(CSV_HEADER)
        for sample in series.samples:
            writer.writerow([_format(v) for v in sample.as_row()])
    logger.info(f"Wrote {len(series)} rows to {path}")
    return path


def read_series_csv(path: Path) -> list[dict[str, float | None]]:
    """Parses a series CSV back into rows; empty cells come back as None."""
    with Path(path).open('r', encoding='utf-8', newline='') as f:
        lines = [line for line in f if not line.startswith('#')]
    reader = csv.DictReader(lines)
    return [{k: (float(v) if v != '' else None) for k, v in row.items()} for row in reader]


def _json_safe(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating, float)):
        value = float(value)
        return value if math.isfinite(value) else None
    if isinstance(value, np.bool_):
        return bool(value)
    return value


def write_report(path: Path, report: dict[str, Any]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open('w', encoding='utf-8') as f:
        json.dump(_json_safe(report), f, indent=2, ensure_ascii=False)
        f.write('\n')
    logger.info(f"Wrote revival report to {path}")
    return path
