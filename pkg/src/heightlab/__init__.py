"""Homotopy height, grid-major height and the parameters around them."""

from .planar import Triangulation, build_triangulation, k3, k4
from .gridrep import GridRep, validate_gridrep
from .homotopy import Homotopy, validate_homotopy
from .solvers import hh_exact, shh_exact, verify_chain

__version__ = "0.1.0"

__all__ = [
    "GridRep",
    "Homotopy",
    "Triangulation",
    "build_triangulation",
    "hh_exact",
    "k3",
    "k4",
    "shh_exact",
    "validate_gridrep",
    "validate_homotopy",
    "verify_chain",
]
