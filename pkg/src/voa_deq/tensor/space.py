"""The R-module T = R (x) W_0 (x) W_1 (x) ... (x) W_{p+1} and its setup data."""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from ..arith.laurent import as_rational
from ..arith.ring import RingElem
from ..voa.cofinite import C1Quotient, c1_quotient
from ..voa.module import ModuleData
from .. import errors

Quad = Tuple[int, ...]


class TensorElem:
    """Sparse R-linear combination of basis tuples ``(w_0, ..., w_{p+1})``."""

    __slots__ = ("terms", "nvars")

    def __init__(self, terms: Dict[Quad, RingElem] | None = None, nvars: int = 2):
        self.nvars = nvars
        self.terms: Dict[Quad, RingElem] = {}
        if terms:
            for q, c in terms.items():
                if not c.is_zero():
                    self.terms[tuple(q)] = c

    @classmethod
    def basis(cls, quad: Quad, nvars: int = 2, coeff: RingElem | None = None) -> "TensorElem":
        return cls({quad: coeff if coeff is not None else RingElem.one(nvars)}, nvars)

    def copy(self) -> "TensorElem":
        out = TensorElem(nvars=self.nvars)
        out.terms = dict(self.terms)
        return out

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[Tuple[Quad, RingElem]]:
        return iter(sorted(self.terms.items()))

    def add_term(self, quad: Quad, c: RingElem) -> None:
        """In-place ``self += c * quad``."""
        if c.is_zero():
            return
        old = self.terms.get(quad)
        new = c if old is None else old + c
        if new.is_zero():
            self.terms.pop(quad, None)
        else:
            self.terms[quad] = new

    def iadd(self, other: "TensorElem", c: RingElem | None = None) -> "TensorElem":
        for q, x in other.terms.items():
            self.add_term(q, x if c is None else x * c)
        return self

    def __add__(self, other: "TensorElem") -> "TensorElem":
        return self.copy().iadd(other)

    def __sub__(self, other: "TensorElem") -> "TensorElem":
        return self.copy().iadd(other, RingElem.const(-1, self.nvars))

    def scale(self, c: RingElem) -> "TensorElem":
        if c.is_zero():
            return TensorElem(nvars=self.nvars)
        out = TensorElem(nvars=self.nvars)
        out.terms = {q: x * c for q, x in self.terms.items()}
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, TensorElem) and self.terms == other.terms

    def evaluate(self, point) -> Dict[Quad, Fraction]:
        out = {}
        for q, c in self.terms.items():
            v = c.evaluate(point)
            if v:
                out[q] = v
        return out

    def __repr__(self) -> str:
        parts = [f"({c})*{q}" for q, c in sorted(self.terms.items())]
        return "TensorElem(" + (" + ".join(parts) or "0") + ")"


class TensorSetup:
    """Modules for the slots of T together with their C1 data.

    ``modules[0]`` is the contragredient of the target module, ``modules[1..p]``
    carry the insertion points ``z_1..z_p`` and ``modules[p+1]`` sits at 0.
    ``level_cutoff`` bounds the total weight of the tuples that may occur,
    measured from the lowest possible total weight.
    """

    def __init__(self, modules: Sequence[ModuleData], level_cutoff, *, u_max_weight=None,
                 max_quads: int = 200000):
        if len(modules) < 4:
            raise ValueError("need at least four slots")
        self.modules = list(modules)
        self.p = len(modules) - 2
        self.nvars = self.p
        self.voa = modules[0].voa
        for m in modules:
            if m.voa is not self.voa:
                raise ValueError("all modules must share one VOA object")
        self.level_cutoff = as_rational(level_cutoff)
        self.max_quads = max_quads
        self.empty = any(m.dim == 0 for m in modules)
        self.min_total = None if self.empty else sum(m.min_weight for m in modules)
        self.cutoff = None if self.empty else self.min_total + self.level_cutoff
        for k, m in enumerate(modules):
            if self.empty:
                break
            need = self.cutoff - (self.min_total - m.min_weight)
            if m.cutoff < need:
                raise errors.CutoffError(
                    f"slot {k} module {m.name} stored to weight {m.cutoff}, needs {need}")
        bound = self.level_cutoff if u_max_weight is None else min(self.level_cutoff, as_rational(u_max_weight))
        self.u_basis: List[int] = self.voa.positive_basis(bound)
        self.quotients: List[C1Quotient] = [c1_quotient(m) for m in modules]
        for k, (m, q) in enumerate(zip(modules, self.quotients)):
            if self.empty:
                break
            need = self.cutoff - (self.min_total - m.min_weight)
            if q.reliable_weight is None or q.reliable_weight < min(need, m.space.weight_list()[-1]):
                raise errors.CutoffError(
                    f"slot {k} module {m.name}: C1 data is exact only up to weight "
                    f"{q.reliable_weight}, tuples need {need}; store the module to a higher weight")
        self.slot_priority: List[int] = list(range(1, self.p + 2)) + [0]

    def weight(self, quad: Quad) -> Fraction:
        return sum(m.weight(i) for m, i in zip(self.modules, quad))

    def level(self, quad: Quad) -> Fraction:
        return self.weight(quad) - self.min_total

    def max_weight(self, t: TensorElem) -> Optional[Fraction]:
        if t.is_zero():
            return None
        return max(self.weight(q) for q in t.terms)

    def is_complement_quad(self, quad: Quad) -> bool:
        return all(qt.is_complement(i) for qt, i in zip(self.quotients, quad))

    def complement_quads(self) -> List[Quad]:
        if self.empty:
            return []
        lists = [q.complement for q in self.quotients]
        return sorted(itertools.product(*lists), key=lambda q: (self.weight(q), q))

    def quads_up_to(self, level) -> List[Quad]:
        """All basis tuples of level at most ``level`` (sorted by weight)."""
        if self.empty:
            return []
        level = as_rational(level)
        per_slot = []
        for m in self.modules:
            per_slot.append([i for i in range(m.dim) if m.weight(i) - m.min_weight <= level])
        out: List[Quad] = []

        def rec(k: int, acc: List[int], used: Fraction):
            if k == len(self.modules):
                out.append(tuple(acc))
                if len(out) > self.max_quads:
                    raise errors.ResourceCapError(f"more than {self.max_quads} basis tuples requested")
                return
            m = self.modules[k]
            for i in per_slot[k]:
                lv = m.weight(i) - m.min_weight
                if used + lv <= level:
                    acc.append(i)
                    rec(k + 1, acc, used + lv)
                    acc.pop()

        rec(0, [], Fraction(0))
        return sorted(out, key=lambda q: (self.weight(q), q))

    def label(self, quad: Quad) -> Tuple:
        return tuple(m.space.labels[i] for m, i in zip(self.modules, quad))


def compute_M(setup_or_quotients) -> Optional[Fraction]:
    """Sum over slots of the largest complement weight; ``None`` for an empty T."""
    quotients = setup_or_quotients.quotients if isinstance(setup_or_quotients, TensorSetup) \
        else list(setup_or_quotients)
    total = Fraction(0)
    for q in quotients:
        if q.module.dim == 0:
            return None
        top = q.top_weight
        if top is None:
            return None
        total += top
    return total


def filtration_index(t: TensorElem, setup: TensorSetup) -> Optional[Fraction]:
    """``max (dpow + weight)`` over the terms, for the ``z_1 = z_2`` filtration."""
    if t.is_zero():
        return None
    return max(c.dpow + setup.weight(q) for q, c in t.terms.items())


def iter_terms(t: TensorElem) -> Iterable[Tuple[Quad, RingElem]]:
    return sorted(t.terms.items())
