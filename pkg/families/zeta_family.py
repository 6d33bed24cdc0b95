"""
Example family plugin: inverse-square jump law.

a_i = 6 / (pi^2 i^2) and b_i = beta rho^i.
"""
import math
from dataclasses import dataclass
from typing import Any, Dict

from src.markov.family import FamilyParams, GeometricB
from src.plugins.family_base import FamilyPlugin

ZETA_2 = math.pi ** 2 / 6


@dataclass(frozen=True)
class InverseSquareA:
    def __call__(self, i: int) -> float:
        return 1.0 / (ZETA_2 * i * i)

    def tail(self, N: int) -> float:
        """Upper bound on sum_{i >= N} a_i."""
        if N <= 1:
            return 1.0
        return (1.0 / N + 1.0 / (2 * N * N) + 1.0 / (6 * N ** 3)) / ZETA_2


class ZetaFamily(FamilyPlugin):

    @property
    def name(self) -> str:
        return "zeta"

    @property
    def description(self) -> str:
        return "Jump law proportional to 1/i^2 with geometric step-down probabilities"

    @property
    def author(self) -> str:
        return "isoReduce"

    def get_config_schema(self) -> Dict[str, Any]:
        return {
            "beta": {"type": float, "default": 0.5, "description": "scale of b_i"},
            "rho": {"type": float, "default": 0.6, "description": "decay rate of b_i"},
            "C": {"type": float, "default": 1.01, "description": "constant of the bound b_i < C rho^i"},
        }

    def build(self, settings: Dict[str, Any]) -> FamilyParams:
        a = InverseSquareA()
        b = GeometricB(settings["beta"], settings["rho"])
        return FamilyParams(a, b, settings["C"], settings["rho"], a.tail, "zeta", dict(settings))
