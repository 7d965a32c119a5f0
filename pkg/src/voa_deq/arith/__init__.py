"""Exact arithmetic kernel: rationals, Laurent polynomials, the ring R,
its fraction field, region expansions and exact linear algebra."""

from .laurent import LaurentPoly, as_rational
from .ring import INHOMOGENEOUS, RingElem, ring_degree, ring_eval, ring_mul, z, zdiff
from .series import ITERATE, PRODUCT, REGIONS, REVERSED, RegionSeries, Series1, ring_expand
from .ratfunc import RatFunc

__all__ = [
    "INHOMOGENEOUS", "ITERATE", "LaurentPoly", "PRODUCT", "REGIONS", "REVERSED", "RatFunc",
    "RegionSeries", "RingElem", "Series1", "as_rational", "ring_degree", "ring_eval",
    "ring_expand", "ring_mul", "z", "zdiff",
]
