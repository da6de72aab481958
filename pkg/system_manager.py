# FILE: system_manager.py

import logging

from errors import ConfigError
from systems.bouncer_system import BouncerSystem
from systems.ring_system import RingSystem

logger = logging.getLogger(__name__)


class SystemManager:
    """
    Registers the model systems and dispatches runs to them by model name.
    Each system describes its own run-file keys through get_schema().
    """
    def __init__(self):
        self.systems = {}
        self._register_systems()

    def _register_systems(self):
        # The key must match the name in the system's schema.
        for system in (BouncerSystem(), RingSystem()):
            self.systems[system.get_schema()['name']] = system
        logger.debug(f"System Manager initialized. Registered systems: {list(self.systems.keys())}")

    def get(self, model: str):
        if model not in self.systems:
            logger.error(f"Attempted to use non-existent model system: {model}")
            raise ConfigError(f"Model '{model}' not found.", key='model')
        return self.systems[model]

    def prepare(self, config):
        """Builds the run object (packet, grid, propagator) for a validated config."""
        system = self.get(config.model)
        logger.info(f"Preparing '{config.model}' run '{config.name}'.")
        return system.prepare(config.values)

    def time_scales(self, config) -> tuple[float, float]:
        return self.get(config.model).time_scales(config.values)

    def get_schemas(self) -> list[dict]:
        return [system.get_schema() for system in self.systems.values()]


# Create a singleton instance to be used across the entire application.
system_manager = SystemManager()
