"""Fraction field of R and the bridge between R and sympy's sparse polynomials.

Linear algebra over the fraction field is done fraction-free on polynomial
vectors (see :mod:`.linalg`); this module converts between the dict-based
ring elements used everywhere else and ``sympy.polys.rings`` elements.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Sequence, Tuple

from sympy import QQ
from sympy.polys.rings import PolyRing

from .laurent import LaurentPoly, as_rational
from .ring import RingElem, pair_list


@lru_cache(maxsize=None)
def poly_ring(nvars: int) -> PolyRing:
    return PolyRing([f"z{i + 1}" for i in range(nvars)], QQ)


def _to_qq(c: Fraction):
    return QQ(c.numerator, c.denominator)


def _from_qq(c) -> Fraction:
    return Fraction(int(QQ.numer(c)), int(QQ.denom(c)))


to_qq = _to_qq
from_qq = _from_qq


def laurent_to_poly(p: LaurentPoly, shift: Sequence[int]):
    """``p * z^shift`` as a sympy polynomial; ``shift`` must clear negative exponents."""
    ring = poly_ring(p.nvars)
    terms = {}
    for e, c in p.terms.items():
        f = tuple(a + b for a, b in zip(e, shift))
        if min(f) < 0:
            raise ValueError("shift does not clear negative exponents")
        terms[f] = _to_qq(c)
    return ring.from_dict(terms) if terms else ring.zero


def poly_to_laurent(p, nvars: int, shift: Sequence[int] | None = None) -> LaurentPoly:
    """Inverse of :func:`laurent_to_poly` (divides by ``z^shift``)."""
    shift = shift or (0,) * nvars
    return LaurentPoly(
        {tuple(a - b for a, b in zip(e, shift)): _from_qq(c) for e, c in p.terms()}, nvars
    )


def _diff_poly(nvars: int, i: int, j: int):
    ring = poly_ring(nvars)
    return ring.gens[i] - ring.gens[j]


def common_denominator(elems: Sequence[RingElem], nvars: int) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """Monomial shift and difference powers clearing every element to a polynomial."""
    shift = [0] * nvars
    den = [0] * len(pair_list(nvars))
    for a in elems:
        if a.is_zero():
            continue
        lo = a.num.min_exponents()
        for i in range(nvars):
            shift[i] = max(shift[i], -lo[i])
        for k in range(len(den)):
            den[k] = max(den[k], a.den[k])
    return tuple(shift), tuple(den)


def ring_to_poly(a: RingElem, shift: Sequence[int], den: Sequence[int]):
    """``a * z^shift * prod (z_i - z_j)^den`` as a polynomial."""
    nvars = a.nvars
    ring = poly_ring(nvars)
    if a.is_zero():
        return ring.zero
    p = laurent_to_poly(a.num, shift)
    for idx, (i, j) in enumerate(pair_list(nvars)):
        k = den[idx] - a.den[idx]
        if k < 0:
            raise ValueError("denominator does not clear the element")
        if k:
            p = p * _diff_poly(nvars, i, j) ** k
    return p


def clearing_unit(nvars: int, shift: Sequence[int], den: Sequence[int]) -> RingElem:
    """The unit ``z^shift * prod (z_i - z_j)^den`` of R."""
    u = RingElem(LaurentPoly.monomial(shift, 1, nvars))
    for idx, (i, j) in enumerate(pair_list(nvars)):
        if den[idx]:
            u = u * RingElem.diff_power(i, j, den[idx], nvars)
    return u


class RatFunc:
    """Element of the fraction field of R as a reduced quotient of polynomials."""

    __slots__ = ("num", "den", "nvars")

    def __init__(self, num, den=None, nvars: int = 2):
        ring = poly_ring(nvars)
        self.nvars = nvars
        if den is None:
            den = ring.one
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            self.num, self.den = ring.zero, ring.one
            return
        g = num.gcd(den)
        num, den = num.exquo(g), den.exquo(g)
        lc = den.LC
        self.num, self.den = num.quo_ground(lc), den.quo_ground(lc)

    @classmethod
    def from_ring(cls, a: RingElem) -> "RatFunc":
        shift, _ = common_denominator([a], a.nvars)
        monomial = laurent_to_poly(LaurentPoly.monomial(shift, 1, a.nvars), (0,) * a.nvars)
        return cls(ring_to_poly(a, shift, a.den), monomial * _diff_product(a.nvars, a.den), a.nvars)

    def is_zero(self) -> bool:
        return not self.num

    def __add__(self, other: "RatFunc") -> "RatFunc":
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den, self.nvars)

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.num, self.den, self.nvars)

    def __sub__(self, other: "RatFunc") -> "RatFunc":
        return self + (-other)

    def __mul__(self, other: "RatFunc") -> "RatFunc":
        return RatFunc(self.num * other.num, self.den * other.den, self.nvars)

    def __truediv__(self, other: "RatFunc") -> "RatFunc":
        return RatFunc(self.num * other.den, self.den * other.num, self.nvars)

    def __eq__(self, other) -> bool:
        return isinstance(other, RatFunc) and self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def evaluate(self, point) -> Fraction:
        pts = [_to_qq(as_rational(p)) for p in point]
        d = self.den(*pts) if self.nvars > 1 else self.den(pts[0])
        if d == 0:
            raise ZeroDivisionError("denominator vanishes at the point")
        n = self.num(*pts) if self.nvars > 1 else self.num(pts[0])
        return _from_qq(n) / _from_qq(d)

    def to_ring(self) -> RingElem | None:
        """The element as a member of R, or ``None`` if the denominator is not a unit."""
        den = self.den
        nv = self.nvars
        dpows = [0] * len(pair_list(nv))
        for idx, (i, j) in enumerate(pair_list(nv)):
            d = _diff_poly(nv, i, j)
            while True:
                q, r = divmod(den, d)
                if r:
                    break
                den = q
                dpows[idx] += 1
        if len(den.terms()) != 1:
            return None
        (e, c), = den.terms()
        num = poly_to_laurent(self.num, nv, e)
        return RingElem(num.scale(1 / _from_qq(c)), tuple(dpows))

    def __repr__(self) -> str:
        return f"RatFunc(({self.num})/({self.den}))"


def _diff_product(nvars: int, den: Sequence[int]):
    p = poly_ring(nvars).one
    for idx, (i, j) in enumerate(pair_list(nvars)):
        if den[idx]:
            p = p * _diff_poly(nvars, i, j) ** den[idx]
    return p
