"""The rank-one Heisenberg VOA M(1) and its Fock modules M(1, lambda)."""

from __future__ import annotations

from fractions import Fraction
from typing import List, Tuple

from ..arith.laurent import as_rational
from ..voa.module import ModuleData, VOAData
from ..voa.space import GradedSpace, Vector

Partition = Tuple[int, ...]


def partitions(n: int, largest: int | None = None) -> List[Partition]:
    """Partitions of ``n`` as non-increasing tuples, in reverse lexicographic order."""
    if n == 0:
        return [()]
    largest = n if largest is None else min(largest, n)
    out = []
    for first in range(largest, 0, -1):
        for rest in partitions(n - first, first):
            out.append((first,) + rest)
    return out


def partition_count(n: int) -> int:
    return len(partitions(n))


def _insert(part: Partition, m: int) -> Partition:
    return tuple(sorted(part + (m,), reverse=True))


def _remove(part: Partition, m: int) -> Partition:
    lst = list(part)
    lst.remove(m)
    return tuple(lst)


def _fock_space(lam: Fraction, cutoff) -> GradedSpace:
    h = lam * lam / 2
    cutoff = as_rational(cutoff)
    labels, weights = [], []
    level = 0
    while h + level <= cutoff:
        for p in partitions(level):
            labels.append(p)
            weights.append(h + level)
        level += 1
    return GradedSpace(labels, weights, cutoff)


def _fock_action(space: GradedSpace, lam: Fraction):
    def action(g: str, n: int, i: int) -> Vector:
        if g != "a":
            raise KeyError(f"unknown generator {g!r}")
        part = space.labels[i]
        if n < 0:
            return {space.index[_insert(part, -n)]: Fraction(1)}
        if n == 0:
            return {i: lam} if lam else {}
        r = part.count(n)
        if not r:
            return {}
        return {space.index[_remove(part, n)]: Fraction(n * r)}

    return action


def build_heisenberg(cutoff) -> VOAData:
    """M(1) with generator ``a = a_{-1} 1`` and ``omega = a_{-1}^2 1 / 2``."""
    if as_rational(cutoff) < 0:
        raise ValueError("cutoff must be non-negative")
    # omega lives in weight 2, so the algebra is always stored through weight 2
    space = _fock_space(Fraction(0), max(as_rational(cutoff), Fraction(2)))
    creation = []
    for part in space.labels:
        if not part:
            creation.append(None)
        else:
            creation.append(("a", -part[0], {space.index[part[1:]]: Fraction(1)}))
    omega = {space.index[(1, 1)]: Fraction(1, 2)}
    gens = {"a": space.index[(1,)]}
    voa = VOAData("M(1)", space, _fock_action(space, Fraction(0)), gens, creation,
                  space.index[()], omega, 1, family="heisenberg",
                  params={"cutoff": str(space.cutoff)})
    return voa


def build_fock(lam, cutoff, voa: VOAData | None = None) -> ModuleData:
    """The Fock module M(1, lambda): lowest weight lambda^2/2, ``a_0 = lambda``."""
    lam = as_rational(lam)
    if voa is None:
        voa = build_heisenberg(max(as_rational(cutoff) - lam * lam / 2, Fraction(2)))
    space = _fock_space(lam, cutoff)
    return ModuleData(f"M(1,{lam})", space, _fock_action(space, lam), voa, family="fock",
                      params={"lambda": str(lam), "cutoff": str(space.cutoff)})
