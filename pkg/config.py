# FILE: config.py
# Process settings from the environment, per-model defaults, and run files.

import json
import logging
import os
from dataclasses import dataclass, field
from pathlib import Path

import psutil
from dotenv import dotenv_values, load_dotenv

from errors import ConfigError

logger = logging.getLogger(__name__)

# Load environment variables from a .env file at the project root.
load_dotenv()

PROJECT_ROOT = Path(__file__).resolve().parent
BUNDLED_CONFIG_DIR = PROJECT_ROOT / 'configs'
MANIFEST_PATH = PROJECT_ROOT / 'manifest.json'


def _default_threads() -> int:
    return max(psutil.cpu_count(logical=False) or 1, 1)


class Config:
    """
    Central configuration for the revival simulations.
    Process-wide settings come from environment variables; run parameters
    come from the run files, with the defaults below filling the gaps.
    """

    # --- Process Settings ---

    LOG_LEVEL = os.getenv('LOG_LEVEL', 'INFO')

    # Worker threads for time sampling. Defaults to the physical core count.
    THREADS = os.getenv('REVIVAL_THREADS') or str(_default_threads())

    OUTPUT_DIR = os.getenv('REVIVAL_OUTPUT_DIR', 'output')
    CONFIG_DIR = os.getenv('REVIVAL_CONFIG_DIR', str(BUNDLED_CONFIG_DIR))

    # --- Run Defaults ---

    # Keys shared by every model. t_end is a multiple of the revival time and
    # tol a fraction of it.
    COMMON_DEFAULTS = {
        't_end': 1.05,
        'samples': 2000,
        'window': 11,
        'q_max': 4,
        'tol': 0.02,
        'smoothing': 'auto',
        'tol_iso': 1e-3,
        'plot': True,
    }

    SYSTEM_CONFIG = {
        'bouncer': {
            'defaults': {'p0': 0.0, 'points': 8192, 'coeff_cutoff': 1e-10},
            'required_fields': ['z0', 'sigma'],
        },
        'ring': {
            'defaults': {
                'target_energy': 200.0, 'tau': 1, 'branch': '+',
                'width_convention': 'amplitude', 'angular_points': 2048,
            },
            'required_fields': ['R', 'Delta', 'sigma_m'],
        },
    }


# Create a single configuration object to be imported across the package.
AppConfig = Config()


@dataclass(frozen=True)
class Diagnostic:
    key: str
    message: str
    # 'error' stops a run; 'warning' only narrows what it can report.
    severity: str = 'error'

    @property
    def is_error(self) -> bool:
        return self.severity == 'error'

    def __str__(self):
        if self.is_error:
            return f"{self.key}: {self.message}"
        return f"{self.key}: warning: {self.message}"


def errors_in(diagnostics: list[Diagnostic]) -> list[Diagnostic]:
    return [d for d in diagnostics if d.is_error]


@dataclass
class ModelConfig:
    """A run file: its raw text values and, once validated, the typed values."""
    raw: dict[str, str]
    source: Path | None = None
    values: dict = field(default_factory=dict)

    @classmethod
    def from_file(cls, path) -> 'ModelConfig':
        path = Path(path)
        if not path.is_file():
            raise ConfigError(f"Config file not found: {path}", key='config')
        raw = dotenv_values(path, interpolate=False)
        blanks = [k for k, v in raw.items() if v is None]
        if blanks:
            raise ConfigError(f"Config line '{blanks[0]}' has no value.", key=blanks[0])
        return cls(raw={k.strip(): v.strip() for k, v in raw.items()}, source=path)

    @property
    def model(self) -> str:
        return self.raw.get('model', '').strip()

    @property
    def name(self) -> str:
        if self.raw.get('name'):
            return self.raw['name']
        if self.source is not None:
            return self.source.stem
        return self.model or 'run'

    def __getitem__(self, key):
        return self.values[key]

    def get(self, key, default=None):
        return self.values.get(key, default)


# --- Resolution of bundled names ---

def _manifest_configs() -> dict[str, str]:
    if not MANIFEST_PATH.is_file():
        return {}
    with MANIFEST_PATH.open('r', encoding='utf-8') as f:
        manifest = json.load(f)
    return {entry['name']: entry['file'] for entry in manifest.get('configs', [])}


def resolve_config_path(name_or_path: str) -> Path:
    """A path to an existing file, or the name of a bundled config."""
    candidate = Path(name_or_path)
    if candidate.is_file():
        return candidate
    config_dir = Path(AppConfig.CONFIG_DIR)
    for option in (config_dir / name_or_path, config_dir / f"{name_or_path}.conf"):
        if option.is_file():
            return option
    bundled = _manifest_configs().get(name_or_path)
    if bundled and (PROJECT_ROOT / bundled).is_file():
        return PROJECT_ROOT / bundled
    raise ConfigError(f"No config file or bundled config named '{name_or_path}'.", key='config')


# --- Coercion and validation ---

_TRUE = {'1', 'true', 'yes', 'on'}
_FALSE = {'0', 'false', 'no', 'off'}


def _coerce(key: str, text, spec: dict):
    kind = spec.get('type', 'string')
    if not isinstance(text, str):
        return text
    if kind == 'integer':
        number = float(text)
        if not number.is_integer():
            raise ValueError(f"expected an integer, got '{text}'")
        return int(number)
    if kind == 'number':
        return float(text)
    if kind == 'boolean':
        lowered = text.lower()
        if lowered in _TRUE:
            return True
        if lowered in _FALSE:
            return False
        raise ValueError(f"expected a boolean, got '{text}'")
    return text


def _check_bounds(key: str, value, spec: dict) -> str | None:
    if 'enum' in spec and value not in spec['enum']:
        return f"must be one of {spec['enum']}, got '{value}'"
    if 'exclusiveMinimum' in spec and not value > spec['exclusiveMinimum']:
        return f"must be greater than {spec['exclusiveMinimum']}, got {value}"
    if 'minimum' in spec and value < spec['minimum']:
        return f"must be at least {spec['minimum']}, got {value}"
    return None


def validate(config: ModelConfig) -> list[Diagnostic]:
    """Checks a run file against its model's schema. Free of errors iff a run would start.

    Fills config.values with typed values merged over the defaults.
    """
    from system_manager import system_manager

    model = config.model
    if not model:
        return [Diagnostic('model', "missing; expected one of " + ", ".join(system_manager.systems))]
    if model not in system_manager.systems:
        return [Diagnostic('model', f"unknown model '{model}'; expected one of " + ", ".join(system_manager.systems))]

    system = system_manager.systems[model]
    properties = system.get_schema()['parameters']['properties']
    system_config = AppConfig.SYSTEM_CONFIG[model]
    diagnostics = []

    for key in config.raw:
        if key not in properties:
            diagnostics.append(Diagnostic(key, f"unknown key for model '{model}'"))
    for key in system_config['required_fields']:
        if key not in config.raw:
            diagnostics.append(Diagnostic(key, "required"))

    values = {**AppConfig.COMMON_DEFAULTS, **system_config['defaults']}
    for key, text in config.raw.items():
        if key not in properties:
            continue
        try:
            value = _coerce(key, text, properties[key])
        except ValueError as e:
            diagnostics.append(Diagnostic(key, str(e)))
            continue
        problem = _check_bounds(key, value, properties[key])
        if problem:
            diagnostics.append(Diagnostic(key, problem))
            continue
        values[key] = value

    values.setdefault('name', config.name)
    values.setdefault('output_dir', AppConfig.OUTPUT_DIR)
    if not diagnostics:
        diagnostics.extend(system.check(values))
    config.values = values
    return diagnostics


def load_config(name_or_path: str) -> ModelConfig:
    """Resolves, parses and validates a run file; raises ConfigError listing every problem."""
    config = ModelConfig.from_file(resolve_config_path(name_or_path))
    diagnostics = validate(config)
    problems = errors_in(diagnostics)
    if problems:
        raise ConfigError("; ".join(str(d) for d in problems), key=problems[0].key)
    for warning in diagnostics:
        logger.warning(f"Config '{config.name}': {warning}")
    return config
