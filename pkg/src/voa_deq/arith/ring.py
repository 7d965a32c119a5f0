"""The coefficient ring R = Q[z_i^{+-1}, (z_i - z_j)^{-1}] in canonical form.

An element is stored as ``num / prod_{i<j} (z_i - z_j)^{d_ij}`` where ``num`` is a
Laurent polynomial that is not divisible by ``(z_i - z_j)`` whenever
``d_ij > 0``.  Because R is a localisation of a UFD, this representative is
unique, so equality of elements is equality of representations.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Tuple

from .laurent import Exponent, LaurentPoly, as_rational

INHOMOGENEOUS = "inhomogeneous"


@lru_cache(maxsize=None)
def pair_list(nvars: int) -> Tuple[Tuple[int, int], ...]:
    return tuple(itertools.combinations(range(nvars), 2))


@lru_cache(maxsize=None)
def _difference(nvars: int, i: int, j: int) -> LaurentPoly:
    return LaurentPoly.var(i, nvars) - LaurentPoly.var(j, nvars)


@lru_cache(maxsize=4096)
def _difference_power(nvars: int, i: int, j: int, k: int) -> LaurentPoly:
    return _difference(nvars, i, j) ** k


class RingElem:
    """Canonical element of R.  For two variables ``dpow`` is the power of
    ``(z1 - z2)`` in the denominator."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: LaurentPoly, den: Iterable[int] | int | None = None, *, _canonical=False):
        pairs = pair_list(num.nvars)
        if den is None:
            den = (0,) * len(pairs)
        elif isinstance(den, int):
            den = (den,) + (0,) * (len(pairs) - 1)
        else:
            den = tuple(den)
        if len(den) != len(pairs):
            raise ValueError("denominator exponent vector has the wrong length")
        if any(d < 0 for d in den):
            # negative denominator powers are numerator factors
            for idx, d in enumerate(den):
                if d < 0:
                    num = num * _difference_power(num.nvars, *pairs[idx], -d)
            den = tuple(max(d, 0) for d in den)
        if not _canonical:
            num, den = _canonicalise(num, den)
        self.num = num
        self.den = den
        self._hash = None

    # -- constructors ---------------------------------------------------
    @classmethod
    def const(cls, c, nvars: int = 2) -> "RingElem":
        return cls(LaurentPoly.const(c, nvars), _canonical=True)

    @classmethod
    def zero(cls, nvars: int = 2) -> "RingElem":
        return cls(LaurentPoly.zero(nvars), _canonical=True)

    @classmethod
    def one(cls, nvars: int = 2) -> "RingElem":
        return cls.const(1, nvars)

    @classmethod
    def monomial(cls, exponent: Exponent, c=1) -> "RingElem":
        return cls(LaurentPoly.monomial(exponent, c), _canonical=True)

    @classmethod
    def var(cls, i: int, nvars: int = 2, power: int = 1) -> "RingElem":
        return cls(LaurentPoly.var(i, nvars, power), _canonical=True)

    @classmethod
    def diff_power(cls, i: int, j: int, k: int, nvars: int = 2, c=1) -> "RingElem":
        """``c * (z_i - z_j)^k`` for any integer ``k``; ``i < j`` or ``i > j``."""
        sign = 1
        if i > j:
            i, j = j, i
            sign = -1 if k % 2 else 1
        pairs = pair_list(nvars)
        idx = pairs.index((i, j))
        c = as_rational(c) * sign
        if k >= 0:
            return cls(_difference_power(nvars, i, j, k).scale(c), _canonical=True)
        den = [0] * len(pairs)
        den[idx] = -k
        return cls(LaurentPoly.const(c, nvars), den, _canonical=True)

    @property
    def nvars(self) -> int:
        return self.num.nvars

    @property
    def dpow(self) -> int:
        """Power of ``(z1 - z2)`` in the denominator."""
        return self.den[0]

    # -- predicates ------------------------------------------------------
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_laurent(self) -> bool:
        return not any(self.den)

    def to_laurent(self) -> LaurentPoly:
        if not self.is_laurent():
            raise ValueError("element has a (z_i - z_j) denominator")
        return self.num

    def constant_value(self) -> Fraction | None:
        if any(self.den):
            return None
        return self.num.constant_value()

    # -- arithmetic -----------------------------------------------------
    def _coerce(self, other) -> "RingElem":
        if isinstance(other, RingElem):
            return other
        if isinstance(other, LaurentPoly):
            return RingElem(other, _canonical=True)
        return RingElem.const(other, self.nvars)

    def __add__(self, other) -> "RingElem":
        other = self._coerce(other)
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if self.den == other.den:
            return RingElem(self.num + other.num, self.den)
        pairs = pair_list(self.nvars)
        den = tuple(max(a, b) for a, b in zip(self.den, other.den))
        a = self.num
        b = other.num
        for idx, (i, j) in enumerate(pairs):
            if den[idx] > self.den[idx]:
                a = a * _difference_power(self.nvars, i, j, den[idx] - self.den[idx])
            if den[idx] > other.den[idx]:
                b = b * _difference_power(self.nvars, i, j, den[idx] - other.den[idx])
        return RingElem(a + b, den)

    __radd__ = __add__

    def __neg__(self) -> "RingElem":
        return RingElem(-self.num, self.den, _canonical=True)

    def __sub__(self, other) -> "RingElem":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "RingElem":
        return self._coerce(other) - self

    def __mul__(self, other) -> "RingElem":
        if not isinstance(other, (RingElem, LaurentPoly)):
            c = as_rational(other)
            if not c:
                return RingElem.zero(self.nvars)
            return RingElem(self.num.scale(c), self.den, _canonical=True)
        other = self._coerce(other)
        if self.is_zero() or other.is_zero():
            return RingElem.zero(self.nvars)
        num = self.num * other.num
        den = tuple(a + b for a, b in zip(self.den, other.den))
        return RingElem(num, den)

    def __rmul__(self, other) -> "RingElem":
        return self * other

    def __pow__(self, k: int) -> "RingElem":
        if k < 0:
            inv = self.unit_inverse()
            return inv ** (-k)
        result = RingElem.one(self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def unit_inverse(self) -> "RingElem":
        """Inverse of a unit of R (monomial times powers of differences)."""
        # strip difference factors from the numerator; what is left must be a monomial
        num = self.num
        extra = [0] * len(self.den)
        for idx, (i, j) in enumerate(pair_list(self.nvars)):
            while not num.is_monomial():
                q = num.divide_by_difference(i, j)
                if q is None:
                    break
                num = q
                extra[idx] += 1
        if not num.is_monomial():
            raise ZeroDivisionError("element is not a unit of R")
        (e, c), = num.terms.items()
        inv = LaurentPoly.monomial(tuple(-k for k in e), 1 / c, self.nvars)
        for idx, (i, j) in enumerate(pair_list(self.nvars)):
            if self.den[idx]:
                inv = inv * _difference_power(self.nvars, i, j, self.den[idx])
        return RingElem(inv, tuple(extra))

    def __eq__(self, other) -> bool:
        if not isinstance(other, RingElem):
            try:
                other = self._coerce(other)
            except TypeError:
                return NotImplemented
        return self.den == other.den and self.num == other.num

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    # -- analysis -------------------------------------------------------
    def evaluate(self, point) -> Fraction:
        pts = [as_rational(p) for p in point]
        if any(p == 0 for p in pts):
            raise ZeroDivisionError("point lies on z_i = 0")
        value = self.num.evaluate(pts)
        for idx, (i, j) in enumerate(pair_list(self.nvars)):
            if self.den[idx]:
                d = pts[i] - pts[j]
                if d == 0:
                    raise ZeroDivisionError(f"point lies on z{i + 1} = z{j + 1}")
                value /= d ** self.den[idx]
        return value

    def degree(self):
        """Degree with deg z_i = -1, so each denominator difference adds +1."""
        if self.is_zero():
            return 0
        degs = self.num.total_degrees()
        if len(degs) != 1:
            return INHOMOGENEOUS
        return -degs.pop() + sum(self.den)

    def derivative(self, i: int) -> "RingElem":
        """Partial derivative with respect to ``z_{i+1}``."""
        pairs = pair_list(self.nvars)
        result = RingElem(self.num.derivative(i), self.den)
        for idx, (a, b) in enumerate(pairs):
            d = self.den[idx]
            if not d or i not in (a, b):
                continue
            sign = -1 if i == a else 1
            den = list(self.den)
            den[idx] += 1
            result = result + RingElem(self.num.scale(sign * d), den)
        return result

    def substitute_scale(self, factor) -> "RingElem":
        """Substitute ``z_i -> factor * z_i`` for all variables simultaneously."""
        factor = as_rational(factor)
        terms = {e: c * factor ** sum(e) for e, c in self.num.terms.items()}
        num = LaurentPoly(terms, self.nvars)
        total = sum(self.den)
        return RingElem(num.scale(Fraction(1) / factor ** total), self.den, _canonical=True)

    def __repr__(self) -> str:
        return f"RingElem({self})"

    def __str__(self) -> str:
        text = str(self.num)
        if not any(self.den):
            return text
        if len(self.num.terms) > 1:
            text = f"({text})"
        dens = []
        for (i, j), d in zip(pair_list(self.nvars), self.den):
            if d:
                dens.append(f"(z{i + 1} - z{j + 1})" + (f"^{d}" if d != 1 else ""))
        den = "*".join(dens)
        return text + " / " + (f"({den})" if len(dens) > 1 else den)


def _canonicalise(num: LaurentPoly, den: Tuple[int, ...]):
    if num.is_zero():
        return num, (0,) * len(den)
    if not any(den):
        return num, den
    den = list(den)
    for idx, (i, j) in enumerate(pair_list(num.nvars)):
        while den[idx] > 0:
            q = num.divide_by_difference(i, j)
            if q is None:
                break
            num = q
            den[idx] -= 1
    return num, tuple(den)


def ring_mul(a: RingElem, b: RingElem) -> RingElem:
    return a * b


def ring_eval(a: RingElem, point) -> Fraction:
    return a.evaluate(point)


def ring_degree(a: RingElem):
    return a.degree()


def z(i: int, nvars: int = 2) -> RingElem:
    """The variable ``z_i`` (1-based) as a ring element."""
    return RingElem.var(i - 1, nvars)


def zdiff(i: int, j: int, k: int = 1, nvars: int = 2) -> RingElem:
    """``(z_i - z_j)^k`` with 1-based indices."""
    return RingElem.diff_power(i - 1, j - 1, k, nvars)


def ring_sum(items, nvars: int = 2) -> RingElem:
    """Sum ring elements, grouping by denominator before canonicalising."""
    groups: Dict[Tuple[int, ...], Dict[Exponent, Fraction]] = {}
    for r in items:
        if r.is_zero():
            continue
        acc = groups.setdefault(r.den, {})
        for e, c in r.num.terms.items():
            acc[e] = acc.get(e, 0) + c
    total = RingElem.zero(nvars)
    for den, terms in groups.items():
        total = total + RingElem(LaurentPoly(terms, nvars), den)
    return total
