"""Outer billiards (tangent map) on regular polygons: webs, resonant tile
families, periods, symbolic dynamics, the digital filter map and
quasi-regular polygons."""
from .family import first_family, scale_table, virtual_chain
from .geometry import ConvexPolygon, Point, make_regular_ngon
from .precision import digits_context, set_digits
from .tangent import iterate_orbit, tau, tau_inverse

__version__ = "0.1.0"

__all__ = [
    "ConvexPolygon",
    "Point",
    "digits_context",
    "first_family",
    "iterate_orbit",
    "make_regular_ngon",
    "scale_table",
    "set_digits",
    "tau",
    "tau_inverse",
    "virtual_chain",
]
