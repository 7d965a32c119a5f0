"""Spot checks of module data against the axioms of a VOA module."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List

from ..arith.series import binomial
from .module import ModuleData
from .space import TruncationError, Vector, vec_add


@dataclass
class AxiomReport:
    checks: int = 0
    skipped: int = 0
    violations: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {"checks": self.checks, "skipped": self.skipped, "violations": list(self.violations)}


def _diff(a: Vector, b: Vector) -> Vector:
    out = dict(a)
    vec_add(out, b, -1)
    return out


def _grading(m: ModuleData, u: int, n: int, i: int, rep: AxiomReport):
    try:
        res = m.mode(u, n, i)
    except TruncationError:
        rep.skipped += 1
        return
    rep.checks += 1
    expected = m.voa.weight(u) - n - 1 + m.weight(i)
    bad = [j for j in res if m.weight(j) != expected]
    if bad:
        rep.violations.append(
            f"grading: ({m.voa.space.labels[u]})_{n} on {m.space.labels[i]} hits weight "
            f"{m.weight(bad[0])}, expected {expected}")


def _commutator(m: ModuleData, u: int, a: int, v: int, b: int, i: int, rep: AxiomReport):
    V = m.voa
    try:
        lhs = _diff(m.mode(u, a, m.mode(v, b, i)), m.mode(v, b, m.mode(u, a, i)))
        rhs: Vector = {}
        top = int(V.weight(u) + V.weight(v)) - 1
        for k in range(0, max(top, -1) + 1):
            c = binomial(a, k)
            if not c:
                continue
            uv = V.mode(u, k, v)
            if uv:
                vec_add(rhs, m.mode(uv, a + b - k, i), c)
    except TruncationError:
        rep.skipped += 1
        return
    rep.checks += 1
    if _diff(lhs, rhs):
        rep.violations.append(
            f"commutator: [({V.space.labels[u]})_{a}, ({V.space.labels[v]})_{b}] on {m.space.labels[i]}")


def _translation(m: ModuleData, u: int, n: int, i: int, rep: AxiomReport):
    try:
        lhs = _diff(m.virasoro(-1, m.mode(u, n, i)), m.mode(u, n, m.virasoro(-1, i)))
        rhs = {k: -n * c for k, c in m.mode(u, n - 1, i).items()}
    except TruncationError:
        rep.skipped += 1
        return
    rep.checks += 1
    if _diff(lhs, rhs):
        rep.violations.append(f"L(-1) bracket: ({m.voa.space.labels[u]})_{n} on {m.space.labels[i]}")


def _adjoint_involution(m: ModuleData, u: int, n: int, i: int, rep: AxiomReport):
    """The adjoint formula applied twice returns the original mode."""
    V = m.voa
    wt = V.weight(u)
    if wt.denominator != 1:
        return
    wt = int(wt)
    try:
        direct = m.mode(u, n, i)
        twice: Vector = {}
        sign = -1 if wt % 2 else 1
        for j, lu in enumerate(V.l1_powers(u)):
            idx = 2 * wt - j - n - 2
            for a, ca in lu.items():
                vec_add(twice, m.adjoint(a, idx, i), ca * Fraction(sign, math.factorial(j)))
    except TruncationError:
        rep.skipped += 1
        return
    rep.checks += 1
    if _diff(direct, twice):
        rep.violations.append(f"adjoint involution: ({V.space.labels[u]})_{n} on {m.space.labels[i]}")


def check_axioms(m: ModuleData, samples: int, seed: int = 0) -> AxiomReport:
    """Randomised spot checks of grading, commutator, L(-1) and adjoint identities."""
    rep = AxiomReport()
    if samples <= 0 or m.dim == 0:
        return rep
    rng = random.Random(seed)
    V = m.voa
    span = int(m.cutoff - m.min_weight) + 2
    for _ in range(samples):
        u = rng.randrange(V.dim)
        v = rng.randrange(V.dim)
        i = rng.randrange(m.dim)
        a = rng.randint(-span, span)
        b = rng.randint(-span, span)
        _grading(m, u, a, i, rep)
        _commutator(m, u, a, v, b, i, rep)
        _translation(m, u, a, i, rep)
        _adjoint_involution(m, u, a, i, rep)
    return rep
