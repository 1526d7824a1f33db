"""Exact tropical degeneration fans and signed ledgers of bounded strata."""

from .cone import Cone, NotStronglyConvex, cone_from_generators
from .exactlat import DimensionMismatch, Lattice, LatticeMap
from .fan import Fan
from .normalfan import PointConfiguration

__all__ = ["Cone", "Fan", "Lattice", "LatticeMap", "PointConfiguration", "DimensionMismatch", "NotStronglyConvex", "cone_from_generators"]
