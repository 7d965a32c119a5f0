"""Virasoro Verma modules, their simple quotients, and the Virasoro VOA.

Verma vectors are PBW monomials ``L(-n_1)...L(-n_k) v`` with
``n_1 >= ... >= n_k >= 1``, stored as the tuple ``(n_1, ..., n_k)``.  The
simple quotient is taken weight by weight modulo the radical of the
Shapovalov form, whose adjoint is ``L(n) -> L(-n)``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Tuple

from ..arith.laurent import as_rational
from ..arith.linalg import nullspace, rref
from ..voa.module import ModuleData, VOAData
from ..voa.space import GradedSpace, Vector, vec_add
from .heisenberg import partitions

Mono = Tuple[int, ...]

SUPPORTED_SIMPLE = {(Fraction(1, 2), Fraction(0)), (Fraction(1, 2), Fraction(1, 2)),
                    (Fraction(1, 2), Fraction(1, 16))}


class VermaAlgebra:
    """PBW action of ``L(m)`` on the Verma module ``M(c, h)``.

    With ``vacuum=True`` the module is ``M(c, 0) / <L(-1) v>`` and monomials
    have all parts at least 2.
    """

    def __init__(self, c, h, vacuum: bool = False):
        self.c = as_rational(c)
        self.h = as_rational(h)
        self.vacuum = vacuum
        if vacuum and self.h != 0:
            raise ValueError("the vacuum quotient needs h = 0")
        self.act = lru_cache(maxsize=None)(self._act)

    def monomials(self, level: int) -> List[Mono]:
        parts = partitions(level)
        if self.vacuum:
            parts = [p for p in parts if not p or p[-1] >= 2]
        return parts

    def _act(self, m: int, mono: Mono) -> Dict[Mono, Fraction]:
        if not mono:
            if m > 0:
                return {}
            if m == 0:
                return {(): self.h} if self.h else {}
            if m == -1 and self.vacuum:
                return {}
            return {(-m,): Fraction(1)}
        n1, rest = mono[0], mono[1:]
        if m < 0 and -m >= n1:
            return {(-m,) + mono: Fraction(1)}
        out: Dict[Mono, Fraction] = {}
        # L(m) L(-n1) = L(-n1) L(m) + (m + n1) L(m - n1) + c/12 (m^3 - m) delta_{m, n1}
        for mono2, c in self.act(m, rest).items():
            for mono3, c3 in self.act(-n1, mono2).items():
                _acc(out, mono3, c * c3)
        if m + n1:
            for mono2, c in self.act(m - n1, rest).items():
                _acc(out, mono2, c * (m + n1))
        if m == n1:
            _acc(out, rest, self.c * (m ** 3 - m) / 12)
        return out

    def act_vec(self, m: int, vec: Dict[Mono, Fraction]) -> Dict[Mono, Fraction]:
        out: Dict[Mono, Fraction] = {}
        for mono, c in vec.items():
            for mono2, c2 in self.act(m, mono).items():
                _acc(out, mono2, c * c2)
        return out

    def shapovalov(self, a: Mono, b: Mono) -> Fraction:
        """``<L(-a) v, L(-b) v>`` with ``<v, v> = 1``."""
        vec = {b: Fraction(1)}
        for n in a:
            vec = self.act_vec(n, vec)
            if not vec:
                return Fraction(0)
        return vec.get((), Fraction(0))

    def gram(self, level: int) -> List[List[Fraction]]:
        monos = self.monomials(level)
        return [[self.shapovalov(a, b) for b in monos] for a in monos]


def _acc(d: Dict, k, c):
    if not c:
        return
    v = d.get(k, 0) + c
    if v:
        d[k] = v
    else:
        d.pop(k, None)


class _Quotient:
    """Per-level quotient of the Verma module by the Shapovalov radical."""

    def __init__(self, alg: VermaAlgebra, max_level: int, simple: bool):
        self.alg = alg
        self.basis: Dict[int, List[Mono]] = {}
        self.projection: Dict[Mono, Dict[Mono, Fraction]] = {}
        self.radical: Dict[int, List[List[Fraction]]] = {}
        for level in range(max_level + 1):
            monos = alg.monomials(level)
            rad = nullspace(alg.gram(level), len(monos)) if simple else []
            self.radical[level] = rad
            if not rad:
                self.basis[level] = list(monos)
                for mono in monos:
                    self.projection[mono] = {mono: Fraction(1)}
                continue
            # pivots on the highest indices so that the kept basis is lowest-index-first
            rev = [list(reversed(r)) for r in rad]
            red, piv = rref(rev, len(monos))
            pivots = {len(monos) - 1 - p for p in piv}
            kept = [mono for i, mono in enumerate(monos) if i not in pivots]
            self.basis[level] = kept
            for mono in kept:
                self.projection[mono] = {mono: Fraction(1)}
            for row, p in zip(red, piv):
                col = len(monos) - 1 - p
                target: Dict[Mono, Fraction] = {}
                for j, x in enumerate(reversed(row)):
                    if x and j != col:
                        target[monos[j]] = -x
                self.projection[monos[col]] = target

    def project(self, vec: Dict[Mono, Fraction]) -> Dict[Mono, Fraction]:
        out: Dict[Mono, Fraction] = {}
        for mono, c in vec.items():
            for m2, c2 in self.projection[mono].items():
                _acc(out, m2, c * c2)
        return out


def _module_parts(c, h, cutoff, simple: bool, vacuum: bool):
    alg = VermaAlgebra(c, h, vacuum=vacuum)
    cutoff = as_rational(cutoff)
    max_level = int((cutoff - alg.h) // 1) if cutoff >= alg.h else -1
    quot = _Quotient(alg, max(max_level, 0), simple)
    labels, weights = [], []
    for level in range(max_level + 1):
        for mono in quot.basis[level]:
            labels.append(mono)
            weights.append(alg.h + level)
    space = GradedSpace(labels, weights, cutoff)

    def action(g: str, n: int, i: int) -> Vector:
        if g != "omega":
            raise KeyError(f"unknown generator {g!r}")
        res = quot.project(alg.act(n - 1, space.labels[i]))
        return {space.index[m]: x for m, x in res.items()}

    return alg, quot, space, action


def build_virasoro(c, h, cutoff, simple: bool = False, voa: VOAData | None = None) -> ModuleData:
    """Verma module ``M(c, h)`` or, with ``simple``, its irreducible quotient."""
    c, h = as_rational(c), as_rational(h)
    if simple and (c, h) not in SUPPORTED_SIMPLE:
        raise ValueError(f"simple quotient supported only for c=1/2, h in {{0, 1/2, 1/16}}; got c={c}, h={h}")
    if voa is None:
        voa = build_virasoro_voa(c, max(as_rational(cutoff) - h, Fraction(2)), simple=simple)
    alg, quot, space, action = _module_parts(c, h, cutoff, simple, vacuum=False)
    family = "virasoro-minimal" if simple else "virasoro-verma"
    m = ModuleData(f"L({c},{h})" if simple else f"M({c},{h})", space, action, voa,
                   family=family, params={"c": str(c), "h": str(h), "cutoff": str(space.cutoff)})
    m.verma = alg
    m.quotient = quot
    return m


def build_virasoro_voa(c, cutoff, simple: bool = False) -> VOAData:
    """The Virasoro VOA ``M(c, 0) / <L(-1) v>``, or its simple quotient."""
    c = as_rational(c)
    cutoff = max(as_rational(cutoff), Fraction(2))
    if simple and (c, Fraction(0)) not in SUPPORTED_SIMPLE:
        raise ValueError(f"simple Virasoro VOA supported only for c=1/2; got c={c}")
    alg, quot, space, action = _module_parts(c, 0, cutoff, simple, vacuum=True)
    creation = []
    for mono in space.labels:
        if not mono:
            creation.append(None)
            continue
        rest = quot.project({mono[1:]: Fraction(1)})
        creation.append(("omega", 1 - mono[0], {space.index[m]: x for m, x in rest.items()}))
    omega_idx = space.index[(2,)]
    voa = VOAData(f"V({c})" if not simple else f"L({c},0)", space, action, {"omega": omega_idx},
                  creation, space.index[()], {omega_idx: Fraction(1)}, c,
                  family="virasoro-minimal" if simple else "virasoro-verma",
                  params={"c": str(c), "h": "0", "cutoff": str(cutoff), "vacuum": True})
    voa.verma = alg
    voa.quotient = quot
    return voa


def singular_vector_level2(c, h) -> Dict[Mono, Fraction]:
    """``(L(-2) - kappa L(-1)^2) v`` with ``kappa = 3 / (2 (2h + 1))``."""
    h = as_rational(h)
    kappa = Fraction(3) / (2 * (2 * h + 1))
    return {(2,): Fraction(1), (1, 1): -kappa}
