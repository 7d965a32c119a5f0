"""Truncated series: region expansions of ring elements and univariate
power series with a rational leading exponent."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .laurent import as_rational
from .ring import RingElem

PRODUCT = "|z1|>|z2|"
ITERATE = "|z2|>|z1-z2|"
REVERSED = "|z2|>|z1|"
REGIONS = (PRODUCT, ITERATE, REVERSED)

_ALIASES = {
    "product": PRODUCT, "z1>z2": PRODUCT, "|z1|>|z2|": PRODUCT, "|z₁|>|z₂|": PRODUCT,
    "iterate": ITERATE, "z2>z1-z2": ITERATE, "|z2|>|z1-z2|": ITERATE, "|z₂|>|z₁−z₂|": ITERATE,
    "reversed": REVERSED, "z2>z1": REVERSED, "|z2|>|z1|": REVERSED, "|z₂|>|z₁|": REVERSED,
}

# names of the (large, small) expansion variables per region
REGION_VARIABLES = {
    PRODUCT: ("z1", "z2"),
    ITERATE: ("z2", "(z1-z2)"),
    REVERSED: ("z2", "z1"),
}


def region_tag(tag: str) -> str:
    try:
        return _ALIASES[tag.replace(" ", "")]
    except KeyError:
        raise ValueError(f"unknown region tag {tag!r}") from None


def binomial(p, k: int) -> Fraction:
    """Generalised binomial coefficient ``C(p, k)`` for rational ``p``."""
    p = as_rational(p)
    if k < 0:
        return Fraction(0)
    out = Fraction(1)
    for i in range(k):
        out = out * (p - i) / (i + 1)
    return out


class RegionSeries:
    """Truncated expansion ``sum c * big^a * small^b`` in a named region.

    ``order`` is the largest exponent of the small variable through which the
    series is exact; ``None`` means the series is exact (finite).
    """

    __slots__ = ("region", "terms", "order")

    def __init__(self, region: str, terms: Dict[Tuple[Fraction, Fraction], Fraction], order):
        self.region = region_tag(region)
        self.order = None if order is None else as_rational(order)
        self.terms = {
            (as_rational(a), as_rational(b)): as_rational(c)
            for (a, b), c in terms.items()
            if c and (self.order is None or as_rational(b) <= self.order)
        }

    def valuation(self):
        if not self.terms:
            return None
        return min(b for _, b in self.terms)

    def _check(self, other: "RegionSeries"):
        if other.region != self.region:
            raise ValueError("series live in different regions")

    def __add__(self, other: "RegionSeries") -> "RegionSeries":
        self._check(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return RegionSeries(self.region, out, _min_order(self.order, other.order))

    def __neg__(self) -> "RegionSeries":
        return RegionSeries(self.region, {k: -c for k, c in self.terms.items()}, self.order)

    def __sub__(self, other: "RegionSeries") -> "RegionSeries":
        return self + (-other)

    def scale(self, c) -> "RegionSeries":
        c = as_rational(c)
        return RegionSeries(self.region, {k: v * c for k, v in self.terms.items()}, self.order)

    def __mul__(self, other: "RegionSeries") -> "RegionSeries":
        self._check(other)
        va, vb = self.valuation(), other.valuation()
        orders = []
        if self.order is not None and vb is not None:
            orders.append(self.order + vb)
        if other.order is not None and va is not None:
            orders.append(other.order + va)
        if self.order is not None and vb is None and other.order is not None:
            orders.append(other.order)
        order = min(orders) if orders else (None if self.order is None and other.order is None
                                             else _min_order(self.order, other.order))
        out: Dict[Tuple[Fraction, Fraction], Fraction] = {}
        for (a1, b1), c1 in self.terms.items():
            for (a2, b2), c2 in other.terms.items():
                b = b1 + b2
                if order is not None and b > order:
                    continue
                k = (a1 + a2, b)
                out[k] = out.get(k, 0) + c1 * c2
        return RegionSeries(self.region, out, order)

    def truncate(self, order) -> "RegionSeries":
        order = as_rational(order)
        if self.order is not None and order > self.order:
            raise ValueError("cannot truncate beyond the known order")
        return RegionSeries(self.region, self.terms, order)

    def is_zero_through(self, order) -> bool:
        order = as_rational(order)
        if self.order is not None and self.order < order:
            raise ValueError(f"series only known through order {self.order}")
        return all(b > order for (_, b) in self.terms)

    def equals_through(self, other: "RegionSeries", order) -> bool:
        return (self - other).is_zero_through(order)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: (t[0][1], -t[0][0]))

    def __repr__(self) -> str:
        big, small = REGION_VARIABLES[self.region]
        parts = [f"{c}*{big}^{a}*{small}^{b}" for (a, b), c in self.sorted_terms()]
        tail = "" if self.order is None else f" + O({small}^{self.order + 1})"
        return f"RegionSeries[{self.region}](" + (" + ".join(parts) or "0") + tail + ")"


def _min_order(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def monomial_series(region: str, big_exp, small_exp, c=1, order=None) -> RegionSeries:
    return RegionSeries(region, {(as_rational(big_exp), as_rational(small_exp)): as_rational(c)}, order)


def ring_expand(a: RingElem, region: str, order: int) -> RegionSeries:
    """Expand an element of R in one of the three regions.

    The result is exact for every term whose small-variable exponent is at
    most ``order``; finite expansions are flagged exact.
    """
    region = region_tag(region)
    if order < 0:
        raise ValueError("order must be non-negative")
    if a.nvars != 2:
        raise ValueError("region expansions are defined for two variables")
    n = a.dpow
    out: Dict[Tuple[Fraction, Fraction], Fraction] = {}
    finite = True
    if region == PRODUCT:
        for (e1, e2), c in a.num.terms.items():
            if n == 0:
                out[(Fraction(e1), Fraction(e2))] = out.get((Fraction(e1), Fraction(e2)), 0) + c
                continue
            finite = False
            for k in range(0, max(order - e2, -1) + 1):
                key = (Fraction(e1 - n - k), Fraction(e2 + k))
                out[key] = out.get(key, 0) + c * math.comb(n + k - 1, k)
    elif region == REVERSED:
        sign = -1 if n % 2 else 1
        for (e1, e2), c in a.num.terms.items():
            if n == 0:
                key = (Fraction(e2), Fraction(e1))
                out[key] = out.get(key, 0) + c
                continue
            finite = False
            for k in range(0, max(order - e1, -1) + 1):
                key = (Fraction(e2 - n - k), Fraction(e1 + k))
                out[key] = out.get(key, 0) + sign * c * math.comb(n + k - 1, k)
    else:
        # variables (z2, w = z1 - z2); z1 = z2 + w
        for (e1, e2), c in a.num.terms.items():
            if e1 >= 0:
                for k in range(0, e1 + 1):
                    key = (Fraction(e2 + e1 - k), Fraction(k - n))
                    out[key] = out.get(key, 0) + c * math.comb(e1, k)
            else:
                finite = False
                for k in range(0, max(order + n, -1) + 1):
                    key = (Fraction(e2 + e1 - k), Fraction(k - n))
                    out[key] = out.get(key, 0) + c * binomial(e1, k)
    return RegionSeries(region, out, None if finite else order)


def power_prefactor(region: str, p1, p2, p12, order: int) -> RegionSeries:
    """Expansion of ``z1^p1 z2^p2 (z1-z2)^p12`` (rational exponents) in a region.

    In the reversed region ``(z1 - z2)^p12`` is continued as ``e^{i pi p12} (z2 - z1)^p12``;
    the phase is dropped, so the result is the expansion of ``(z2 - z1)^p12``.
    """
    region = region_tag(region)
    p1, p2, p12 = as_rational(p1), as_rational(p2), as_rational(p12)
    out = {}
    if region == PRODUCT:
        for k in range(order + 1):
            out[(p1 + p12 - k, p2 + k)] = binomial(p12, k) * (-1) ** k
        finite = p12.denominator == 1 and p12 >= 0
        return RegionSeries(region, out, None if finite and order >= p12 else order)
    if region == REVERSED:
        for k in range(order + 1):
            out[(p2 + p12 - k, p1 + k)] = binomial(p12, k) * (-1) ** k
        finite = p12.denominator == 1 and p12 >= 0
        return RegionSeries(region, out, None if finite and order >= p12 else order)
    # z1^p1 = z2^p1 (1 + w/z2)^p1
    for k in range(order + 1):
        out[(p2 + p1 - k, p12 + k)] = binomial(p1, k)
    finite = p1.denominator == 1 and p1 >= 0
    return RegionSeries(region, out, None if finite and order >= p1 else p12 + order)


class Series1:
    """Univariate truncated series ``x^offset * sum_{n < len} c_n x^n``."""

    __slots__ = ("offset", "coeffs")

    def __init__(self, coeffs: Sequence, offset=0):
        self.offset = as_rational(offset)
        self.coeffs: List[Fraction] = [as_rational(c) for c in coeffs]

    @property
    def length(self) -> int:
        return len(self.coeffs)

    @property
    def order(self) -> Fraction:
        """Largest exponent through which the series is known."""
        return self.offset + len(self.coeffs) - 1

    @classmethod
    def one(cls, length: int) -> "Series1":
        return cls([1] + [0] * (length - 1))

    @classmethod
    def from_poly(cls, coeffs: Sequence, length: int) -> "Series1":
        c = list(coeffs)[:length]
        return cls(c + [0] * (length - len(c)))

    def __getitem__(self, n: int) -> Fraction:
        return self.coeffs[n] if 0 <= n < len(self.coeffs) else Fraction(0)

    def coefficient(self, exponent) -> Fraction:
        k = as_rational(exponent) - self.offset
        if k.denominator != 1 or k < 0:
            return Fraction(0)
        if k >= len(self.coeffs):
            raise ValueError("exponent beyond the truncation order")
        return self.coeffs[int(k)]

    def __add__(self, other: "Series1") -> "Series1":
        d = other.offset - self.offset
        if d.denominator != 1:
            raise ValueError("offsets differ by a non-integer")
        lo = min(self.offset, other.offset)
        hi = min(self.order, other.order)
        n = int(hi - lo) + 1
        out = [Fraction(0)] * max(n, 0)
        for s in (self, other):
            shift = int(s.offset - lo)
            for i, c in enumerate(s.coeffs):
                if i + shift < n:
                    out[i + shift] += c
        return Series1(out, lo)

    def __neg__(self) -> "Series1":
        return Series1([-c for c in self.coeffs], self.offset)

    def __sub__(self, other: "Series1") -> "Series1":
        return self + (-other)

    def scale(self, c) -> "Series1":
        c = as_rational(c)
        return Series1([v * c for v in self.coeffs], self.offset)

    def shift(self, k) -> "Series1":
        return Series1(self.coeffs, self.offset + as_rational(k))

    def __mul__(self, other) -> "Series1":
        if not isinstance(other, Series1):
            return self.scale(other)
        n = min(len(self.coeffs), len(other.coeffs))
        a, b = self.coeffs, other.coeffs
        out = [sum((a[i] * b[k - i] for i in range(k + 1)), Fraction(0)) for k in range(n)]
        return Series1(out, self.offset + other.offset)

    __rmul__ = __mul__

    def power(self, p) -> "Series1":
        """``self^p`` for rational ``p``; the leading coefficient must be 1."""
        p = as_rational(p)
        if not self.coeffs or self.coeffs[0] != 1:
            raise ValueError("power needs a series with leading coefficient 1")
        f = self.coeffs
        n = len(f)
        g = [Fraction(0)] * n
        g[0] = Fraction(1)
        for m in range(1, n):
            acc = Fraction(0)
            for k in range(1, m + 1):
                if f[k]:
                    acc += (p * k - (m - k)) * f[k] * g[m - k]
            g[m] = acc / m
        return Series1(g, self.offset * p)

    def substitute_power(self, k: int) -> "Series1":
        """Replace ``x`` by ``x^k``; exponents scale by ``k``."""
        out = [Fraction(0)] * ((len(self.coeffs) - 1) * k + 1)
        for i, c in enumerate(self.coeffs):
            out[i * k] = c
        return Series1(out, self.offset * k)

    def truncate(self, length: int) -> "Series1":
        if length > len(self.coeffs):
            raise ValueError("cannot extend a truncated series")
        return Series1(self.coeffs[:length], self.offset)

    def evaluate(self, x) -> Fraction:
        """Partial sum of the power-series part (``offset`` ignored)."""
        x = as_rational(x)
        total = Fraction(0)
        for c in reversed(self.coeffs):
            total = total * x + c
        return total

    def __eq__(self, other) -> bool:
        if not isinstance(other, Series1):
            return NotImplemented
        return self.offset == other.offset and self.coeffs == other.coeffs

    def __repr__(self) -> str:
        return f"Series1(offset={self.offset}, coeffs={[str(c) for c in self.coeffs]})"


def geometric_series(ratio, length: int) -> Series1:
    """Series of ``1 / (1 - ratio * x)``."""
    r = as_rational(ratio)
    return Series1([r ** k for k in range(length)])


def binomial_series(p, length: int, scale=1) -> Series1:
    """Series of ``(1 + scale * x)^p``."""
    s = as_rational(scale)
    return Series1([binomial(p, k) * s ** k for k in range(length)])


def local_series(a: RingElem, locus: str, length: int) -> Series1:
    """``a(z1, 1)`` expanded in the local coordinate ``t`` of the locus."""
    if a.nvars != 2:
        raise ValueError("local expansions are implemented for two variables")
    if a.is_zero():
        return Series1([0] * length)
    total: Optional[Series1] = None
    if locus in ("z3=0", "z1=z2"):
        # z1 = 1 + t, z2 = 1, (z1 - z2) = t
        for (e1, _e2), c in a.num.terms.items():
            s = binomial_series(e1, length).scale(c)
            total = s if total is None else total + s
        return total.shift(-a.dpow)
    if locus == "z1=0":
        # z1 = t, z2 = 1, (z1 - z2)^{-d} = (-1)^d (1 - t)^{-d}
        lo = min(e[0] for e in a.num.terms)
        coeffs = [Fraction(0)] * length
        for (e1, _e2), c in a.num.terms.items():
            if e1 - lo < length:
                coeffs[e1 - lo] += c
        s = Series1(coeffs, lo)
        if a.dpow:
            s = s * binomial_series(-a.dpow, length, -1).scale((-1) ** a.dpow)
        return s
    raise ValueError(f"no local coordinate for locus {locus!r}; supported: z3=0, z1=z2, z1=0")
