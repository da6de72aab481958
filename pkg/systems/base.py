# FILE: systems/base.py
# Run-file keys shared by every model system and the checks that go with them.

from config import Diagnostic

COMMON_PROPERTIES = {
    'model': {'type': 'string', 'description': "Model system to run."},
    'name': {'type': 'string', 'description': "Run label; defaults to the config file stem."},
    'output_dir': {'type': 'string', 'description': "Directory receiving <name>/ with the run outputs."},
    't_end': {'type': 'number', 'exclusiveMinimum': 0, 'description': "End of the time window as a multiple of T_r."},
    'samples': {'type': 'integer', 'minimum': 100, 'description': "Number of equally spaced time samples."},
    'window': {'type': 'integer', 'minimum': 3, 'description': "Odd minimum-detection window, in samples."},
    'q_max': {'type': 'integer', 'minimum': 2, 'description': "Largest denominator of the revival schedule."},
    'tol': {'type': 'number', 'exclusiveMinimum': 0, 'description': "Matching tolerance as a fraction of T_r."},
    'smoothing': {'type': 'string', 'enum': ['auto', 'on', 'off'], 'description': "Moving average over one classical period before detection."},
    'tol_iso': {'type': 'number', 'minimum': 0, 'description': "Allowed undershoot of P below 1 on line domains."},
    'plot': {'type': 'boolean', 'description': "Write the SVG figure."},
}


def build_schema(name: str, description: str, properties: dict) -> dict:
    return {
        "name": name,
        "description": description,
        "parameters": {
            "type": "object",
            "properties": {**COMMON_PROPERTIES, **properties},
            "required": ["model"],
        },
    }


def check_common(values: dict) -> list[Diagnostic]:
    diagnostics = []
    if values['window'] % 2 == 0:
        diagnostics.append(Diagnostic('window', f"must be odd, got {values['window']}"))
    if values['samples'] <= 2 * values['window']:
        diagnostics.append(Diagnostic('samples', f"must exceed twice the window ({2 * values['window']})"))
    return diagnostics
