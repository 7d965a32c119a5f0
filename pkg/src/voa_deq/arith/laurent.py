"""Sparse Laurent polynomials with exact rational coefficients."""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Mapping, Tuple

Exponent = Tuple[int, ...]


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to :class:`Fraction`."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


class LaurentPoly:
    """Element of Q[z_1^{+-1}, ..., z_n^{+-1}] stored as ``{exponent: coeff}``.

    Instances are treated as immutable; every operation returns a new object.
    Zero coefficients are never stored.
    """

    __slots__ = ("terms", "nvars", "_hash")

    def __init__(self, terms: Mapping[Exponent, Fraction] | None = None, nvars: int = 2):
        self.nvars = nvars
        clean: Dict[Exponent, Fraction] = {}
        if terms:
            for e, c in terms.items():
                if len(e) != nvars:
                    raise ValueError(f"exponent {e} does not have {nvars} entries")
                if c:
                    clean[tuple(e)] = c if isinstance(c, Fraction) else as_rational(c)
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: Dict[Exponent, Fraction], nvars: int) -> "LaurentPoly":
        # trusted constructor: terms already clean
        obj = cls.__new__(cls)
        obj.terms = terms
        obj.nvars = nvars
        obj._hash = None
        return obj

    # -- constructors ---------------------------------------------------
    @classmethod
    def zero(cls, nvars: int = 2) -> "LaurentPoly":
        return cls._raw({}, nvars)

    @classmethod
    def const(cls, c, nvars: int = 2) -> "LaurentPoly":
        c = as_rational(c)
        return cls._raw({(0,) * nvars: c} if c else {}, nvars)

    @classmethod
    def monomial(cls, exponent: Iterable[int], c=1, nvars: int | None = None) -> "LaurentPoly":
        e = tuple(int(k) for k in exponent)
        n = len(e) if nvars is None else nvars
        c = as_rational(c)
        return cls._raw({e: c} if c else {}, n)

    @classmethod
    def var(cls, i: int, nvars: int = 2, power: int = 1) -> "LaurentPoly":
        e = [0] * nvars
        e[i] = power
        return cls._raw({tuple(e): Fraction(1)}, nvars)

    # -- predicates ------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def constant_value(self) -> Fraction | None:
        """The value if this is a constant polynomial, else ``None``."""
        if not self.terms:
            return Fraction(0)
        if len(self.terms) == 1:
            (e, c), = self.terms.items()
            if not any(e):
                return c
        return None

    # -- arithmetic -----------------------------------------------------
    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            if other.nvars != self.nvars:
                raise ValueError("variable count mismatch")
            return other
        return LaurentPoly.const(other, self.nvars)

    def __add__(self, other) -> "LaurentPoly":
        other = self._coerce(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                v += c
                if v:
                    out[e] = v
                else:
                    del out[e]
        return LaurentPoly._raw(out, self.nvars)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly._raw({e: -c for e, c in self.terms.items()}, self.nvars)

    def __sub__(self, other) -> "LaurentPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "LaurentPoly":
        return self._coerce(other) - self

    def scale(self, c) -> "LaurentPoly":
        c = as_rational(c)
        if not c:
            return LaurentPoly.zero(self.nvars)
        if c == 1:
            return self
        return LaurentPoly._raw({e: v * c for e, v in self.terms.items()}, self.nvars)

    def shift(self, exponent: Exponent) -> "LaurentPoly":
        """Multiply by the monomial ``z^exponent``."""
        if not any(exponent):
            return self
        return LaurentPoly._raw(
            {tuple(a + b for a, b in zip(e, exponent)): c for e, c in self.terms.items()},
            self.nvars,
        )

    def __mul__(self, other) -> "LaurentPoly":
        if not isinstance(other, LaurentPoly):
            return self.scale(other)
        if other.nvars != self.nvars:
            raise ValueError("variable count mismatch")
        if not self.terms or not other.terms:
            return LaurentPoly.zero(self.nvars)
        if len(other.terms) == 1:
            (e2, c2), = other.terms.items()
            return LaurentPoly._raw(
                {tuple(a + b for a, b in zip(e, e2)): c * c2 for e, c in self.terms.items()},
                self.nvars,
            )
        out: Dict[Exponent, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e)
                out[e] = c1 * c2 if v is None else v + c1 * c2
        return LaurentPoly._raw({e: c for e, c in out.items() if c}, self.nvars)

    def __rmul__(self, other) -> "LaurentPoly":
        return self.scale(other)

    def __pow__(self, k: int) -> "LaurentPoly":
        if k < 0:
            if len(self.terms) != 1:
                raise ValueError("only monomials can be inverted in a Laurent ring")
            (e, c), = self.terms.items()
            return LaurentPoly.monomial(tuple(-a * -k for a in e), Fraction(1) / c ** (-k), self.nvars)
        result = LaurentPoly.const(1, self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, LaurentPoly):
            return self.nvars == other.nvars and self.terms == other.terms
        try:
            return self == LaurentPoly.const(other, self.nvars)
        except TypeError:
            return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    # -- structure ------------------------------------------------------
    def min_exponents(self) -> Exponent:
        if not self.terms:
            return (0,) * self.nvars
        return tuple(min(e[i] for e in self.terms) for i in range(self.nvars))

    def max_exponents(self) -> Exponent:
        if not self.terms:
            return (0,) * self.nvars
        return tuple(max(e[i] for e in self.terms) for i in range(self.nvars))

    def total_degrees(self) -> set:
        return {sum(e) for e in self.terms}

    def substitute_equal(self, i: int, j: int) -> "LaurentPoly":
        """Set ``z_i = z_j``."""
        out: Dict[Exponent, Fraction] = {}
        for e, c in self.terms.items():
            f = list(e)
            f[j] += f[i]
            f[i] = 0
            f = tuple(f)
            out[f] = out.get(f, 0) + c
        return LaurentPoly._raw({e: c for e, c in out.items() if c}, self.nvars)

    def divide_by_difference(self, i: int, j: int) -> "LaurentPoly | None":
        """Exact quotient by ``(z_i - z_j)`` or ``None`` if it does not divide."""
        if not self.terms:
            return self
        # group by power of z_i; synthetic division from the top power down
        by_power: Dict[int, Dict[Exponent, Fraction]] = {}
        for e, c in self.terms.items():
            rest = e[:i] + (0,) + e[i + 1:]
            by_power.setdefault(e[i], {})[rest] = c
        lo, hi = min(by_power), max(by_power)
        quotient: Dict[Exponent, Fraction] = {}
        carry: Dict[Exponent, Fraction] = {}
        for k in range(hi, lo - 1, -1):
            coeff = dict(by_power.get(k, {}))
            for r, c in carry.items():
                coeff[r] = coeff.get(r, 0) + c
            coeff = {r: c for r, c in coeff.items() if c}
            if k == lo:
                if coeff:
                    return None
                break
            # q_{k-1} = coeff ; next carry = z_j * q_{k-1}
            carry = {}
            for r, c in coeff.items():
                e = list(r)
                e[i] = k - 1
                quotient[tuple(e)] = c
                s = list(r)
                s[j] += 1
                carry[tuple(s)] = c
        return LaurentPoly._raw(quotient, self.nvars)

    def evaluate(self, point) -> Fraction:
        total = Fraction(0)
        pts = [as_rational(p) for p in point]
        for e, c in self.terms.items():
            term = c
            for p, k in zip(pts, e):
                if k:
                    term *= p ** k
            total += term
        return total

    def derivative(self, i: int) -> "LaurentPoly":
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                f = list(e)
                f[i] -= 1
                out[tuple(f)] = c * e[i]
        return LaurentPoly._raw(out, self.nvars)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: tuple(-k for k in t[0]))

    def __repr__(self) -> str:
        return f"LaurentPoly({self})"

    def __str__(self) -> str:
        return format_terms(self.sorted_terms(), [f"z{i + 1}" for i in range(self.nvars)])


def format_monomial(e: Exponent, names) -> str:
    parts = []
    for name, k in zip(names, e):
        if k == 1:
            parts.append(name)
        elif k:
            parts.append(f"{name}^{k}" if k > 0 else f"{name}^({k})")
    return "*".join(parts)


def format_terms(items, names) -> str:
    if not items:
        return "0"
    out = []
    for e, c in items:
        mono = format_monomial(e, names)
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if mono:
            body = mono if a == 1 else f"{a}*{mono}"
        else:
            body = str(a)
        out.append((sign, body))
    text = ("-" if out[0][0] == "-" else "") + out[0][1]
    for sign, body in out[1:]:
        text += f" {sign} {body}"
    return text
