"""Persistence modules over finite posets: interval covers, resolutions and global dimension."""

from .errors import PosetLabError
from .interior import InteriorSystem, interior_system, tbar
from .intres import (
    gamma,
    gldim_report,
    interval_cover,
    interval_resolution,
    intresdim,
    intresgldim,
    irreducible_arrows,
    tree_gldim,
)
from .linalg import GF, GF2
from .pmod import ModuleMorphism, PersistenceModule, interval_module
from .poset import Poset, poset_from_covers

__version__ = "0.1.0"

__all__ = [
    "GF",
    "GF2",
    "InteriorSystem",
    "ModuleMorphism",
    "PersistenceModule",
    "Poset",
    "PosetLabError",
    "gamma",
    "gldim_report",
    "interior_system",
    "interval_cover",
    "interval_module",
    "interval_resolution",
    "intresdim",
    "intresgldim",
    "irreducible_arrows",
    "poset_from_covers",
    "tbar",
    "tree_gldim",
]
