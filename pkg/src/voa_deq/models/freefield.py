"""Mode-level free-boson vertex operators acting on truncated Fock spaces.

``Y(a_{-P} v_l, z) = : prod_i (d^{n_i - 1} a(z) / (n_i - 1)!) E^-(z) e^{l q} z^{l a_0} E^+(z) :``
with ``E^{-+}(z) = exp(+-l sum_{n>0} a_{-+n} z^{+-n} / n)``.  Products are
expanded in ``|z_1| > |z_2|`` and truncated in the power of ``z_2``; this is
an oracle independent of the Wick-contraction formulas.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import product as iproduct
from typing import Dict, List, Sequence, Tuple

from ..arith.laurent import as_rational
from ..arith.series import binomial
from .heisenberg import _insert, _remove

Part = Tuple[int, ...]
State = Dict[Part, Fraction]


def _acc(d: Dict, k, c):
    if c:
        v = d.get(k, 0) + c
        if v:
            d[k] = v
        else:
            d.pop(k, None)


def _mode(n: int, state: State, charge: Fraction, cap: int) -> State:
    out: State = {}
    for pt, c in state.items():
        if n < 0:
            if sum(pt) - n <= cap:
                _acc(out, _insert(pt, -n), c)
        elif n == 0:
            _acc(out, pt, c * charge)
        else:
            r = pt.count(n)
            if r:
                _acc(out, _remove(pt, n), c * n * r)
    return out


def _exp_modes(state: State, lam: Fraction, sign: int, cap: int) -> List[Tuple[int, State]]:
    """``exp(lam sum_{n>0} a_{sign n} z^{-sign n} / (-sign n))`` terms as ``(power of z, state)``.

    ``sign = -1`` gives ``E^-`` (creation, powers ``z^{+n}``); ``sign = +1``
    gives ``E^+`` (annihilation, powers ``z^{-n}``).
    """
    total: Dict[int, State] = {}
    current: Dict[int, State] = {0: dict(state)}
    j = 0
    while current:
        for k, v in current.items():
            acc = total.setdefault(k, {})
            for pt, c in v.items():
                _acc(acc, pt, c / math.factorial(j))
        nxt: Dict[int, State] = {}
        for k, v in current.items():
            if sign < 0:
                for n in range(1, cap + 1):
                    res = _mode(-n, v, Fraction(0), cap)
                    d = nxt.setdefault(k + n, {})
                    for pt, c in res.items():
                        _acc(d, pt, c * lam / n)
            else:
                ns = {n for pt in v for n in pt}
                for n in ns:
                    res = _mode(n, v, Fraction(0), cap)
                    d = nxt.setdefault(k - n, {})
                    for pt, c in res.items():
                        _acc(d, pt, c * (-lam) / n)
        current = {k: v for k, v in nxt.items() if v}
        j += 1
    return [(k, v) for k, v in sorted(total.items()) if v]


def _current_modes(order: int, creation: bool, state: State, charge: Fraction, cap: int
                   ) -> List[Tuple[int, State]]:
    """``d^{order-1} a^{-+}(z) / (order-1)!`` applied to a state; terms ``(power, state)``."""
    out: List[Tuple[int, State]] = []
    if creation:
        for k in range(1, cap + 1):
            res = _mode(-k, state, charge, cap)
            if res:
                c = binomial(k - 1, order - 1)
                if c:
                    out.append((k - order, {pt: x * c for pt, x in res.items()}))
    else:
        top = max((sum(pt) for pt in state), default=0)
        for k in range(0, top + 1):
            res = _mode(k, state, charge, cap)
            if res:
                c = binomial(-k - 1, order - 1)
                if c:
                    out.append((-k - order, {pt: x * c for pt, x in res.items()}))
    return out


def apply_vertex(family: Dict[Fraction, State], lam, part: Sequence[int], charge_in, cap: int
                 ) -> Dict[Fraction, State]:
    """Apply ``Y(a_{-part} v_lam, z)`` to ``{power of z: state}`` (states of charge ``charge_in``)."""
    lam = as_rational(lam)
    charge_in = as_rational(charge_in)
    charge_out = charge_in + lam
    part = list(part)
    result: Dict[Fraction, State] = {}
    for choice in iproduct((False, True), repeat=len(part)):
        ann = [n for n, cr in zip(part, choice) if not cr]
        cre = [n for n, cr in zip(part, choice) if cr]
        for power, state in family.items():
            # rightmost: annihilating current parts (a_0 sees charge_in)
            layer: List[Tuple[Fraction, State]] = [(power, state)]
            for n in ann:
                nxt = []
                for pw, st in layer:
                    for dp, st2 in _current_modes(n, False, st, charge_in, cap):
                        nxt.append((pw + dp, st2))
                layer = nxt
            # E^+ then z^{lam a_0} and e^{lam q}
            nxt = []
            for pw, st in layer:
                for dp, st2 in _exp_modes(st, lam, +1, cap):
                    nxt.append((pw + dp + lam * charge_in, st2))
            layer = nxt
            # E^-
            nxt = []
            for pw, st in layer:
                for dp, st2 in _exp_modes(st, lam, -1, cap):
                    nxt.append((pw + dp, st2))
            layer = nxt
            # creating current parts
            for n in cre:
                nxt = []
                for pw, st in layer:
                    for dp, st2 in _current_modes(n, True, st, charge_out, cap):
                        nxt.append((pw + dp, st2))
                layer = nxt
            for pw, st in layer:
                acc = result.setdefault(Fraction(pw), {})
                for pt, c in st.items():
                    _acc(acc, pt, c)
    return {k: v for k, v in result.items() if v}


def fock_series_region1(lams: Sequence, parts: Sequence[Sequence[int]], order: int
                        ) -> Dict[Tuple[Fraction, Fraction], Fraction]:
    """``<w_0, Y(w_1, z_1) Y(w_2, z_2) w_3>`` expanded in ``|z_1| > |z_2|``.

    ``w_0`` is the dual basis vector of the partition ``parts[0]``.  Returns
    ``{(e1, e2): c}`` for all terms ``c z_1^{e1} z_2^{e2}`` with ``e2`` at most
    ``order`` plus the ``z_2``-exponent of the lowest-weight prefactor.
    """
    l0, l1, l2, l3 = (as_rational(x) for x in lams)
    if l0 != l1 + l2 + l3:
        return {}
    p0 = tuple(sorted(parts[0], reverse=True))
    p1, p2 = list(parts[1]), list(parts[2])
    p3 = tuple(sorted(parts[3], reverse=True))
    bound = order + math.ceil(abs(l2 * l3))
    cap2 = bound + sum(p3) + sum(p2) + 2
    fam2 = apply_vertex({Fraction(0): {p3: Fraction(1)}}, l2, p2, l3, cap2)
    out: Dict[Tuple[Fraction, Fraction], Fraction] = {}
    for e2, st in fam2.items():
        if e2 > order + l2 * l3:
            continue
        fam1 = apply_vertex({Fraction(0): st}, l1, p1, l2 + l3, sum(p0))
        for e1, st1 in fam1.items():
            c = st1.get(p0)
            if c:
                _acc(out, (e1, e2), c)
    return out
