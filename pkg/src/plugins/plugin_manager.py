"""
Registry of Markov parameter families: the built-in geometric family plus
plugins loaded from the families directory.
"""
import sys
import importlib.util
import logging
from typing import Dict, List, Any, Optional
from pathlib import Path

from src.core.config import config
from src.core.errors import InvalidParamsError, ParamsFormatError
from .family_base import FamilyPlugin

logger = logging.getLogger(__name__)


class GeometricFamily(FamilyPlugin):
    """a_i = (1 - alpha) alpha^(i-1), b_i = beta rho^i."""

    @property
    def name(self) -> str:
        return "geometric"

    @property
    def description(self) -> str:
        return "Geometric jump law and geometrically decaying step-down probabilities"

    @property
    def author(self) -> str:
        return "isoReduce"

    def get_config_schema(self) -> Dict[str, Any]:
        return {
            "alpha": {"type": float, "default": 0.5, "description": "ratio of the jump law"},
            "beta": {"type": float, "default": 0.5, "description": "scale of b_i"},
            "rho": {"type": float, "default": 0.6, "description": "decay rate of b_i"},
            "C": {"type": float, "default": 1.01, "description": "constant of the bound b_i < C rho^i"},
        }

    def build(self, settings: Dict[str, Any]):
        from src.markov.family import geometric_params

        alpha = settings["alpha"]
        if not 0 < alpha < 1:
            raise InvalidParamsError("B1", f"alpha must lie in (0, 1), got {alpha}")
        return geometric_params(alpha, settings["beta"], settings["rho"], settings["C"])


class PluginManager:
    """
    Loads family plugins and builds parameters by family name.
    """

    def __init__(self, families_dir: str = None):
        """
        Args:
            families_dir: Directory with plugin modules (config plugins.families_dir)
        """
        families_dir = families_dir or config.get("plugins.families_dir", "./families")
        self.families_dir = Path(families_dir)
        self.families: Dict[str, FamilyPlugin] = {}
        self.register(GeometricFamily())
        logger.debug(f"Plugin manager initialized with families dir: {self.families_dir}")

    @classmethod
    def default(cls) -> "PluginManager":
        manager = cls()
        manager.load_all_families()
        return manager

    def register(self, family: FamilyPlugin):
        family.on_load()
        self.families[family.name] = family
        logger.debug(f"Registered family: {family.name} v{family.version} by {family.author}")

    def load_all_families(self):
        """Load every plugin file in the families directory."""
        if not self.families_dir.exists():
            logger.debug(f"Families directory does not exist: {self.families_dir}")
            return

        for family_file in sorted(self.families_dir.glob("*.py")):
            if family_file.name.startswith("_"):
                continue
            try:
                self._load_family_from_file(family_file)
            except Exception as e:
                logger.error(f"Failed to load family plugin from {family_file}: {e}")

    def _load_family_from_file(self, file_path: Path):
        module_name = f"isoreduce_families.{file_path.stem}"
        spec = importlib.util.spec_from_file_location(module_name, file_path)
        if spec is None or spec.loader is None:
            logger.error(f"Could not load spec for {file_path}")
            return

        module = importlib.util.module_from_spec(spec)
        sys.modules[module_name] = module
        spec.loader.exec_module(module)

        classes = [
            attr for attr in vars(module).values()
            if isinstance(attr, type) and issubclass(attr, FamilyPlugin) and attr is not FamilyPlugin
            and attr.__module__ == module_name
        ]
        if not classes:
            logger.warning(f"No FamilyPlugin subclasses found in {file_path}")
            return
        for family_class in classes:
            try:
                self.register(family_class())
            except Exception as e:
                logger.error(f"Failed to instantiate family {family_class.__name__}: {e}")

    def unload_family(self, name: str):
        if name in self.families:
            self.families.pop(name).on_unload()
            logger.info(f"Unloaded family: {name}")
        else:
            logger.warning(f"Family not found: {name}")

    def get(self, name: str) -> Optional[FamilyPlugin]:
        family = self.families.get(name)
        return family if family is not None and family.enabled else None

    def build(self, name: str, settings: Dict[str, str]):
        """
        Build FamilyParams for a family from raw string settings.

        Raises:
            ParamsFormatError: unknown family or malformed settings
        """
        family = self.get(name)
        if family is None:
            known = ", ".join(sorted(self.families))
            raise ParamsFormatError(f"unknown family {name!r} (known: {known})")
        return family.build(family.coerce(settings))

    def list_families(self) -> List[Dict[str, Any]]:
        return [
            {
                "name": f.name,
                "description": f.description,
                "version": f.version,
                "author": f.author,
                "enabled": f.enabled,
                "settings": sorted(f.get_config_schema()),
            }
            for f in self.families.values()
        ]
