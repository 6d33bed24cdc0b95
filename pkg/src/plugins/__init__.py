"""
Plugin system for Markov parameter families.
"""
from .family_base import FamilyPlugin
from .plugin_manager import GeometricFamily, PluginManager

__all__ = ["FamilyPlugin", "GeometricFamily", "PluginManager"]
