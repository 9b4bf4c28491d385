"""Exact Weyl-group leading terms for invariable generation in groups of Lie type."""
from .errors import ContractError, RangeError
from .weyl_stats import GroupFamily, Kind, TorusClass, torus_classes

__all__ = ["ContractError", "RangeError", "GroupFamily", "Kind", "TorusClass", "torus_classes"]
__version__ = "0.1.0"
