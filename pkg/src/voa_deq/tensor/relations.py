"""Generators of the relation submodule J.

For a tuple ``(w_0, w_1, ..., w_p, w_{p+1})`` with insertion points
``z_1..z_p`` (and ``z_{p+1} = 0``) and ``u`` in V of positive weight:

* slot ``l`` in ``1..p`` (kinds A, B for four points)::

      sum_k z_l^k  u*_{-1-k} w_0 (x) ...  -  ... (x) u_{-1} w_l (x) ...
      - sum_{j != l} sum_k (-1)^k (z_j - z_l)^{-1-k}  ... (x) u_k w_j (x) ...

* slot ``p+1`` (kind C)::

      u*_{-1} w_0 (x) ... - sum_j sum_k (-1)^k z_j^{-1-k} ... u_k w_j ... - ... (x) u_{-1} w_{p+1}

* slot ``0`` (kind D)::

      u_{-1} w_0 (x) ... + sum_j sum_k (-1)^k z_j^{1+k} ... C_{z_j}(u_k) w_j ... - ... (x) u*_{-1} w_{p+1}

  where ``C_z(u_k)`` is the conjugated mode of :func:`conjugated_mode`.  The
  sum equals the commutator of ``u*_{-1}`` with the vertex operators at ``z_j``.

The head term (the ``u_{-1}`` slot) has coefficient ``-1`` except for D (``+1``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Tuple

from ..arith.ring import RingElem
from ..voa.module import conjugated_mode
from ..voa.space import TruncationError, Vector
from .. import errors
from .space import Quad, TensorElem, TensorSetup

RelKey = Tuple[int, int, Quad]


def kind_name(slot: int, p: int) -> str:
    if slot == 0:
        return "D"
    if slot == p + 1:
        return "C"
    if p == 2:
        return "AB"[slot - 1]
    return f"A{slot}"


def slot_of_kind(kind: str, p: int) -> int:
    if kind == "D":
        return 0
    if kind == "C":
        return p + 1
    if p == 2 and kind in ("A", "B"):
        return "AB".index(kind) + 1
    if kind.startswith("A") and kind[1:].isdigit():
        return int(kind[1:])
    raise ValueError(f"unknown relation kind {kind!r}")


def head_sign(slot: int) -> int:
    return 1 if slot == 0 else -1


@dataclass
class Relation:
    kind: str
    slot: int
    u: int
    quad: Quad
    expansion: TensorElem

    @property
    def key(self) -> RelKey:
        return (self.slot, self.u, self.quad)


def _put(t: TensorElem, quad: Quad, slot: int, vec: Vector, coeff: RingElem) -> None:
    for i, c in vec.items():
        q = list(quad)
        q[slot] = i
        t.add_term(tuple(q), coeff * c)


def _max_k(bound: Fraction) -> int:
    return math.floor(bound)


def gen_relation(setup: TensorSetup, slot: int, u: int, quad: Quad) -> Relation:
    """The relation of the given kind for ``u`` and the tuple ``quad``."""
    V = setup.voa
    wt_u = V.weight(u)
    if wt_u <= 0:
        raise ValueError("relations need u of positive weight")
    p = setup.p
    nv = setup.nvars
    mods = setup.modules
    t = TensorElem(nvars=nv)
    one = RingElem.one(nv)
    try:
        if 1 <= slot <= p:
            l = slot
            m0 = mods[0]
            top = _max_k(m0.weight(quad[0]) - wt_u - m0.min_weight)
            for k in range(0, top + 1):
                vec = m0.adjoint(u, -1 - k, quad[0])
                if vec:
                    _put(t, quad, 0, vec, RingElem.var(l - 1, nv, k))
            _put(t, quad, l, mods[l].mode(u, -1, quad[l]), -one)
            for j in range(1, p + 2):
                if j == l:
                    continue
                mj = mods[j]
                top = _max_k(wt_u - 1 + mj.weight(quad[j]) - mj.min_weight)
                for k in range(0, top + 1):
                    vec = mj.mode(u, k, quad[j])
                    if not vec:
                        continue
                    sign = -1 if k % 2 else 1
                    if j == p + 1:
                        # (z_{p+1} - z_l)^{-1-k} with z_{p+1} = 0
                        s2 = -1 if (1 + k) % 2 else 1
                        coeff = RingElem.var(l - 1, nv, -1 - k) * (-sign * s2)
                    else:
                        coeff = RingElem.diff_power(j - 1, l - 1, -1 - k, nv, -sign)
                    _put(t, quad, j, vec, coeff)
        elif slot == p + 1:
            _put(t, quad, 0, mods[0].adjoint(u, -1, quad[0]), one)
            for j in range(1, p + 1):
                mj = mods[j]
                top = _max_k(wt_u - 1 + mj.weight(quad[j]) - mj.min_weight)
                for k in range(0, top + 1):
                    vec = mj.mode(u, k, quad[j])
                    if vec:
                        sign = -1 if k % 2 else 1
                        _put(t, quad, j, vec, RingElem.var(j - 1, nv, -1 - k) * (-sign))
            _put(t, quad, p + 1, mods[p + 1].mode(u, -1, quad[p + 1]), -one)
        elif slot == 0:
            _put(t, quad, 0, mods[0].mode(u, -1, quad[0]), one)
            for j in range(1, p + 1):
                mj = mods[j]
                top = _max_k(wt_u - 1 + mj.weight(quad[j]) - mj.min_weight)
                for k in range(0, top + 1):
                    sign = -1 if k % 2 else 1
                    for vec, power in conjugated_mode(mj, u, k, quad[j]):
                        _put(t, quad, j, vec, RingElem.var(j - 1, nv, 1 + k + power) * sign)
            _put(t, quad, p + 1, mods[p + 1].adjoint(u, -1, quad[p + 1]), -one)
        else:
            raise ValueError(f"slot {slot} out of range")
    except TruncationError as exc:
        raise errors.CutoffError(f"relation {kind_name(slot, p)} for u={u}, tuple {quad}: {exc}") from exc
    return Relation(kind_name(slot, p), slot, u, tuple(quad), t)


def head_term(setup: TensorSetup, rel: Relation) -> TensorElem:
    """The distinguished ``u_{-1}`` term of a relation, with its sign."""
    m = setup.modules[rel.slot]
    t = TensorElem(nvars=setup.nvars)
    _put(t, rel.quad, rel.slot, m.mode(rel.u, -1, rel.quad[rel.slot]),
         RingElem.const(head_sign(rel.slot), setup.nvars))
    return t


def relation_index(setup: TensorSetup, rel: Relation) -> Fraction | None:
    from .space import filtration_index
    return filtration_index(rel.expansion, setup)


def relations_up_to(setup: TensorSetup, level) -> Dict[RelKey, None]:
    """Keys of all relations whose head tuple has level at most ``level``."""
    keys: Dict[RelKey, None] = {}
    quads = setup.quads_up_to(level)
    for u in setup.u_basis:
        wu = setup.voa.weight(u)
        for q in quads:
            if setup.level(q) + wu > level:
                continue
            for slot in setup.slot_priority:
                keys[(slot, u, q)] = None
    return keys
