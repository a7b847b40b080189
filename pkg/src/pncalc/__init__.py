"""Exact computer algebra for Poisson-Nijenhuis structures in a chart."""

from .errors import *  # noqa: F401,F403
from .expr import Chart, RatFunc, parse_expr
from .tensor import DiffForm, EndoField, Multivector, ContraTensor2, wedge, pairing
from .pn import (
    concomitant_abstract,
    concomitant_coord,
    full_compat_report,
    is_admissible,
    is_compatible,
    is_nijenhuis,
    is_poisson,
)
from .modular import VolumeDensity, build_hierarchy, modular_vf, pn_modular_vf
from .fixtures import load_fixture, random_admissible_incompatible, random_compatible
from .structure import StructureDef, load_structure

__version__ = "0.1.0"
