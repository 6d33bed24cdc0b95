"""
Configuration management for isoReduce.
"""
import os
import json
import copy
import logging
from pathlib import Path
from typing import Dict, Any

from dotenv import load_dotenv

logger = logging.getLogger(__name__)

# .env may set ISOREDUCE_HOME, ISOREDUCE_LOG_DIR and LOG_LEVEL
load_dotenv()


class Config:
    """Central configuration manager."""

    def __init__(self, config_dir: Path = None):
        """
        Initialize the configuration.

        Args:
            config_dir: Directory holding config.json. Defaults to
                $ISOREDUCE_HOME or ~/.isoreduce
        """
        if config_dir is None:
            config_dir = Path(os.environ.get("ISOREDUCE_HOME", Path.home() / ".isoreduce"))
        self.config_dir = Path(config_dir)
        self.config_file = self.config_dir / "config.json"
        self.writable = True

        try:
            self.config_dir.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            logger.warning(f"Config directory unavailable ({e}); using defaults")
            self.writable = False

        self.settings = self._load_config()

    def _load_config(self) -> Dict[str, Any]:
        """Load configuration from file or create default."""
        if self.writable and self.config_file.exists():
            try:
                with open(self.config_file, 'r', encoding='utf-8') as f:
                    return self._merge(self._default_config(), json.load(f))
            except Exception:
                logger.warning(f"Corrupt config file {self.config_file}; restoring defaults")

        defaults = self._default_config()
        self.settings = defaults
        self.save()
        return defaults

    def _merge(self, defaults: Dict[str, Any], stored: Dict[str, Any]) -> Dict[str, Any]:
        """Overlay stored values on top of the defaults, keeping new default keys."""
        merged = copy.deepcopy(defaults)
        for key, value in stored.items():
            if isinstance(value, dict) and isinstance(merged.get(key), dict):
                merged[key] = self._merge(merged[key], value)
            else:
                merged[key] = value
        return merged

    def _default_config(self) -> Dict[str, Any]:
        """Return default configuration."""
        return {
            "tolerances": {
                "sigma": 1e-9,  # relative to max(1, ||A||_inf)
                "cluster": 1e-7,
                "pole": 1e-12,
                "representable": 1e-10
            },
            "spectrum": {
                "grid_size": 16,
                "newton_max_iter": 100
            },
            "series": {
                "tol": 1e-12,
                "n_max": 200,
                "window": 40
            },
            "fixed_point": {
                "budget_factor": 10
            },
            "taboo": {
                "node_budget": 2_000_000
            },
            "markov": {
                "window": 40,
                "tol": 1e-12,
                "max_terms": 10_000,
                "max_iter": 200_000,
                "seed": 7,
                "steps": 1_000_000,
                "n_list": [3, 5, 8, 12]
            },
            "logging": {
                "level": "INFO",
                "log_file": ""
            },
            "plugins": {
                "families_dir": "./families"
            }
        }

    def save(self):
        """Save current configuration to file."""
        if not self.writable:
            return
        try:
            with open(self.config_file, 'w', encoding='utf-8') as f:
                json.dump(self.settings, f, indent=2)
        except OSError as e:
            logger.warning(f"Could not save config to {self.config_file}: {e}")
            self.writable = False

    def get(self, key: str, default: Any = None) -> Any:
        """Get a configuration value using dot notation."""
        keys = key.split('.')
        value = self.settings

        for k in keys:
            if isinstance(value, dict) and k in value:
                value = value[k]
            else:
                return default

        return value

    def set(self, key: str, value: Any):
        """Set a configuration value using dot notation."""
        keys = key.split('.')
        config = self.settings

        for k in keys[:-1]:
            if k not in config:
                config[k] = {}
            config = config[k]

        config[keys[-1]] = value
        self.save()


# Global configuration instance
config = Config()
