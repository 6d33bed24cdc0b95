"""
Base class for parameter-family plugins.
"""
from abc import ABC, abstractmethod
from typing import Any, Dict, Optional
import logging

from src.core.errors import ParamsFormatError

logger = logging.getLogger(__name__)


class FamilyPlugin(ABC):
    """
    A named family of Markov parameters built from `key = value` settings.

    Subclasses declare the settings they accept in get_config_schema() as
    {key: {"type": float, "default": value-or-None, "description": str}};
    keys without a default are required.
    """

    def __init__(self, config: Optional[Dict[str, Any]] = None):
        self.config = config or {}
        self.enabled = True

    @property
    @abstractmethod
    def name(self) -> str:
        """Family name used in params files."""
        pass

    @property
    @abstractmethod
    def description(self) -> str:
        pass

    @property
    def version(self) -> str:
        return "1.0.0"

    @property
    def author(self) -> str:
        return "Unknown"

    def get_config_schema(self) -> Dict[str, Any]:
        return {}

    def coerce(self, settings: Dict[str, str]) -> Dict[str, Any]:
        """
        Check raw settings against the schema and convert their types.

        Raises:
            ParamsFormatError: unknown key, missing required key, or a value
                that does not convert
        """
        schema = self.get_config_schema()
        unknown = sorted(set(settings) - set(schema))
        if unknown:
            raise ParamsFormatError(f"family {self.name!r} does not accept {', '.join(unknown)}")

        values: Dict[str, Any] = {}
        for key, spec in schema.items():
            if key in settings:
                try:
                    values[key] = spec.get("type", float)(settings[key])
                except ValueError:
                    raise ParamsFormatError(f"{key} = {settings[key]!r} is not a valid {spec.get('type', float).__name__}")
            elif spec.get("default") is not None:
                values[key] = spec["default"]
            else:
                raise ParamsFormatError(f"family {self.name!r} requires {key}")
        return values

    @abstractmethod
    def build(self, settings: Dict[str, Any]):
        """
        Build FamilyParams from coerced settings.

        Returns:
            FamilyParams
        """
        pass

    def on_load(self):
        """Called when the plugin is registered."""
        pass

    def on_unload(self):
        pass
