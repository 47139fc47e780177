"""Knot Floer torsion orders of grid diagrams and the lower bounds they give.

Typical use::

    from gridfloer import torus_grid, ord_pair, bounds_report
    ord_pair(torus_grid(3, 4))          # (2, 1)
"""
from .algebra import HomologyModule, cancel_reduce, homology_module, smith_normal_form, torsion_order
from .bounds import bounds_report, cable_bound, known_values, ord_pair, pair_bounds
from .complex import Specialization, build_complex, verify_d_squared
from .grid import (GridDiagram, GridError, SizeLimit, components, parse, read_grid, serialize,
                   torus_grid, unknot_grid, validate)

__version__ = "0.1.0"

__all__ = [
    "GridDiagram", "GridError", "HomologyModule", "SizeLimit", "Specialization",
    "bounds_report", "build_complex", "cable_bound", "cancel_reduce", "components",
    "homology_module", "known_values", "ord_pair", "pair_bounds", "parse", "read_grid",
    "serialize", "smith_normal_form", "torsion_order", "torus_grid", "unknot_grid",
    "validate", "verify_d_squared",
]
