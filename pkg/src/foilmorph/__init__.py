"""Design-by-morphing airfoil toolkit: a canonical shape vector, a
similarity metric, baseline blending with feasibility repair, competing
parameterizations, evolutionary reconstruction and bi-objective shape
optimization, plus an episodic environment and HTTP service around it.
"""

from ._kernels import IMPLEMENTATION as KERNEL_IMPLEMENTATION
from .dataset import AirfoilCatalog, build_catalog, parse_coordinate_file
from .errors import FoilmorphError
from .geometry import (
    DEFAULT_F,
    detect_self_intersection,
    repair_self_intersection,
    similarity,
)
from .morphing import AIRDBM_BASELINE_NAMES, BaselineSet, blend, morph

__version__ = "0.1.0"

__all__ = [
    "AIRDBM_BASELINE_NAMES",
    "AirfoilCatalog",
    "BaselineSet",
    "DEFAULT_F",
    "FoilmorphError",
    "KERNEL_IMPLEMENTATION",
    "__version__",
    "blend",
    "build_catalog",
    "detect_self_intersection",
    "morph",
    "parse_coordinate_file",
    "repair_self_intersection",
    "similarity",
]
