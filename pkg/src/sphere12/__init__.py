"""Configuration spaces of twelve touching spheres around a central one.

Angles are radians throughout; radii are sphere radii relative to the
central unit sphere.
"""

from .config import Configuration, contact_graph, dod, fcc, hcp, min_separation, named
from .criticality import BalanceCertificate, is_balanced
from .geometry import angle_from_radius, radius_from_angle
from .kernels import BACKEND
from .moves import DeformationPath, m5_path, m6_path, modified_m5_path, verify_path
from .perm import Permutation, generated_group_order, induced_permutation, parity
from .tammes import solve

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BalanceCertificate",
    "Configuration",
    "DeformationPath",
    "Permutation",
    "angle_from_radius",
    "contact_graph",
    "dod",
    "fcc",
    "generated_group_order",
    "hcp",
    "induced_permutation",
    "is_balanced",
    "m5_path",
    "m6_path",
    "min_separation",
    "modified_m5_path",
    "named",
    "parity",
    "radius_from_angle",
    "solve",
    "verify_path",
]
