"""Reduce translational tiling problems on quotients of Z^d to tiling problems on Z^d."""
from .lattice import (GroupElement, Lattice, QuotientGroup, free_generators, hermite_basis,
                      index, lift_to_D, rep, sum_lattice)
from .periodic import PeriodicSetTuple
from .reduce import (CotileError, ReductionError, ReductionInstance, lift_cotiles,
                     normalize_tiles, project_cotiles, reduce_tiles)
from .rigid import (RigidTileSet, UnsupportedDimensionError, box, build_rigid, frame,
                    verify_rigid_fundamental, verify_shift_equality)
from .solver import (FiniteInstance, SolutionSet, build_instance, is_tiling, solve,
                     verify_reduction)
from .tile import Tile

__version__ = "0.1.0"

__all__ = [
    "CotileError", "FiniteInstance", "GroupElement", "Lattice", "PeriodicSetTuple",
    "QuotientGroup", "ReductionError", "ReductionInstance", "RigidTileSet", "SolutionSet",
    "Tile", "UnsupportedDimensionError", "box", "build_instance", "build_rigid", "frame",
    "free_generators", "hermite_basis", "index", "is_tiling", "lift_cotiles", "lift_to_D",
    "normalize_tiles", "project_cotiles", "reduce_tiles", "rep", "solve", "sum_lattice",
    "verify_reduction", "verify_rigid_fundamental", "verify_shift_equality",
]
