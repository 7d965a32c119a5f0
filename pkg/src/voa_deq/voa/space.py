"""Weight-graded bases and sparse vectors."""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Hashable, Iterable, List, Sequence

from ..arith.laurent import as_rational

Vector = Dict[int, Fraction]


class TruncationError(Exception):
    """Raised when a computation needs data above a module's weight cutoff."""


class _Truncated:
    __slots__ = ()

    def __repr__(self) -> str:
        return "TRUNCATED"

    def __bool__(self) -> bool:
        return False


TRUNCATED = _Truncated()


def vec_add(acc: Vector, v: Vector, c=1) -> Vector:
    """``acc += c * v`` in place; returns ``acc``."""
    if not c:
        return acc
    for k, x in v.items():
        y = acc.get(k, 0) + c * x
        if y:
            acc[k] = y
        else:
            acc.pop(k, None)
    return acc


def vec_scale(v: Vector, c) -> Vector:
    if not c:
        return {}
    return {k: x * c for k, x in v.items()}


def vec_clean(v: Vector) -> Vector:
    return {k: Fraction(x) for k, x in v.items() if x}


class GradedSpace:
    """A basis of labelled vectors with rational weights, truncated at ``cutoff``.

    Basis order is the construction order; the builders list vectors by
    increasing weight so lower indices are never heavier.
    """

    def __init__(self, labels: Sequence[Hashable], weights: Sequence, cutoff):
        if len(labels) != len(weights):
            raise ValueError("labels and weights differ in length")
        self.labels: List[Hashable] = list(labels)
        self.weights: List[Fraction] = [as_rational(w) for w in weights]
        self.cutoff = as_rational(cutoff)
        if any(w > self.cutoff for w in self.weights):
            raise ValueError("basis vector above the weight cutoff")
        self.index = {lab: i for i, lab in enumerate(self.labels)}
        if len(self.index) != len(self.labels):
            raise ValueError("duplicate basis labels")
        self.by_weight: Dict[Fraction, List[int]] = {}
        for i, w in enumerate(self.weights):
            self.by_weight.setdefault(w, []).append(i)

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def dim(self) -> int:
        return len(self.labels)

    @property
    def min_weight(self):
        return min(self.weights) if self.weights else None

    def weight_list(self) -> List[Fraction]:
        return sorted(self.by_weight)

    def basis_of_weight(self, w) -> List[int]:
        return self.by_weight.get(as_rational(w), [])

    def graded_dims(self) -> Dict[Fraction, int]:
        return {w: len(self.by_weight[w]) for w in self.weight_list()}

    def weight_of(self, v: Vector):
        """Weight of a homogeneous vector; ``None`` for zero."""
        ws = {self.weights[i] for i in v}
        if not ws:
            return None
        if len(ws) > 1:
            raise ValueError("vector is not homogeneous")
        return ws.pop()

    def basis_vector(self, i: int) -> Vector:
        return {i: Fraction(1)}

    def format_vector(self, v: Vector) -> str:
        if not v:
            return "0"
        parts = []
        for i in sorted(v):
            c = v[i]
            lab = self.labels[i]
            parts.append(f"{c}*{lab}" if c != 1 else str(lab))
        return " + ".join(parts)


def lowest_first(indices: Iterable[int], space: GradedSpace) -> List[int]:
    return sorted(indices, key=lambda i: (space.weights[i], i))
