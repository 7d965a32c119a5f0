"""Upper bounds on fusion rules from the evaluation of T / J at one point.

The tensor space is ``W3' (x) V (x) W1 (x) W2`` with ``V`` at ``z1``, ``W1``
at ``z2`` and ``W2`` at the origin.  An intertwining operator of type
``(W3; W1 W2)`` gives a functional on ``T / J`` that is determined by its
values at one point, so the codimension of the evaluated relations inside
the evaluated complement span bounds the fusion rule.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .arith.laurent import as_rational
from .arith.linalg import RationalSpan
from .deq.derive import Deriver
from .io import q_to_json
from .tensor.relations import relations_up_to
from .tensor.space import TensorSetup
from .voa.module import ModuleData, contragredient
from . import errors

DEFAULT_POINT = (Fraction(2), Fraction(1))


@dataclass
class FusionBoundResult:
    modules: Tuple[str, str, str]
    point: Tuple[Fraction, Fraction]
    cutoff: Fraction
    bound: int
    complement_dim: int
    relation_rank: int
    relations_used: int
    rank_by_level: List[Tuple[Fraction, int]] = field(default_factory=list)
    other_points: Dict[str, int] = field(default_factory=dict)
    stable: bool = True

    @property
    def minimum(self) -> int:
        return min([self.bound] + list(self.other_points.values()))

    def to_json(self) -> dict:
        return {
            "schema": "voa-deq/fusion-bound/1",
            "modules": list(self.modules),
            "point": [q_to_json(x) for x in self.point],
            "cutoff": q_to_json(self.cutoff),
            "bound": self.bound,
            "minimum_over_points": self.minimum,
            "stable_across_points": self.stable,
            "diagnostics": {
                "complement_dim": self.complement_dim,
                "relation_rank": self.relation_rank,
                "relations_used": self.relations_used,
                "rank_by_level": [[q_to_json(l), r] for l, r in self.rank_by_level],
                "other_points": dict(sorted(self.other_points.items())),
            },
        }

    def text(self) -> str:
        lines = [f"fusion bound for ({self.modules[2]}; {self.modules[0]} {self.modules[1]}) "
                 f"at cutoff {self.cutoff}: {self.bound}",
                 f"  point {self.point[0]}, {self.point[1]}: complement dim {self.complement_dim}, "
                 f"relation rank {self.relation_rank} ({self.relations_used} relations)"]
        if self.other_points:
            lines.append("  other points: " + ", ".join(f"{k} -> {v}" for k, v in sorted(self.other_points.items())))
            lines.append(f"  stable: {self.stable}" + ("" if self.stable else f"; minimum {self.minimum}"))
        return "\n".join(lines) + "\n"


def admissible(point) -> bool:
    z1, z2 = point
    return z1 != 0 and z2 != 0 and z1 != z2


def random_points(n: int, seed: int = 0, height: int = 9) -> List[Tuple[Fraction, Fraction]]:
    rng = random.Random(seed)
    out: List[Tuple[Fraction, Fraction]] = []
    while len(out) < n:
        pt = tuple(Fraction(rng.randint(-height, height), rng.randint(1, height)) for _ in range(2))
        if admissible(pt) and pt not in out and pt != DEFAULT_POINT:
            out.append(pt)
    return out


def fusion_setup(w1: ModuleData, w2: ModuleData, w3: ModuleData, cutoff) -> TensorSetup:
    return TensorSetup([contragredient(w3), w1.voa, w1, w2], cutoff)


def _rank_at(kernel, point, ncols: int) -> Tuple[int, List[Tuple[Fraction, int]]]:
    span = RationalSpan(ncols)
    by_level: List[Tuple[Fraction, int]] = []
    for level, vec in kernel:
        try:
            row = [x.evaluate(point) for x in vec]
        except ZeroDivisionError as exc:
            raise errors.InputError(f"point {point} is on the singular locus") from exc
        span.add(row)
        if by_level and by_level[-1][0] == level:
            by_level[-1] = (level, span.rank)
        else:
            by_level.append((level, span.rank))
    return span.rank, by_level


def fusion_bound(w1: ModuleData, w2: ModuleData, w3: ModuleData, point=DEFAULT_POINT, cutoff=4,
                 extra_points: int = 5, seed: int = 0, setup: Optional[TensorSetup] = None
                 ) -> FusionBoundResult:
    """Upper bound on the dimension of intertwining operators of type ``(W3; W1 W2)``."""
    point = tuple(as_rational(x) for x in point)
    if len(point) != 2 or not admissible(point):
        raise errors.InputError(f"evaluation point {point} must avoid z1 z2 (z1 - z2) = 0")
    setup = setup or fusion_setup(w1, w2, w3, cutoff)
    cutoff = setup.level_cutoff
    names = (w1.name, w2.name, w3.name)
    coords = setup.complement_quads()
    if not coords:
        return FusionBoundResult(names, point, cutoff, 0, 0, 0, 0)
    deriver = Deriver(setup)
    level_of = {}
    for key in relations_up_to(setup, cutoff):
        level_of[key] = setup.level(key[2]) + setup.voa.weight(key[1])
    kern = sorted(((level_of[key], vec) for key, vec in deriver.kernel()), key=lambda kv: kv[0])
    rank, by_level = _rank_at(kern, point, len(coords))
    bound = len(coords) - rank
    others: Dict[str, int] = {}
    for pt in random_points(extra_points, seed):
        r, _ = _rank_at(kern, pt, len(coords))
        others[f"{pt[0]},{pt[1]}"] = len(coords) - r
    stable = all(v == bound for v in others.values())
    return FusionBoundResult(names, point, cutoff, bound, len(coords), rank, len(kern), by_level,
                             others, stable)
