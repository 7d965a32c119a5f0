"""C1 and C2 quotients of truncated modules."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Tuple

from ..arith.linalg import RationalSpan, rref
from .module import ModuleData, VOAData
from .space import TruncationError, Vector, vec_add


class CofinitenessError(Exception):
    """Raised when module data is inconsistent with a C1 decomposition."""


@dataclass
class C1Decomposition:
    """``b = sum alpha * u_{-1} w' + sum beta * c`` for a basis vector ``b``.

    ``terms`` lists ``(u, w', alpha)`` with ``u`` a basis vector of V of
    positive weight and ``w'`` a basis vector of strictly lower weight;
    ``complement`` maps complement basis indices to ``beta``.
    """

    terms: List[Tuple[int, int, Fraction]]
    complement: Dict[int, Fraction]


@dataclass
class C1Quotient:
    module: ModuleData
    complement: List[int]
    decomposition: Dict[int, C1Decomposition] = field(default_factory=dict)
    # largest weight whose C1 spanning set was computed without truncation
    reliable_weight: Fraction | None = None

    @property
    def dimension(self) -> int:
        return len(self.complement)

    @property
    def top_weight(self):
        """Largest weight carrying a complement vector (``None`` if there is none)."""
        if not self.complement:
            return None
        return max(self.module.weight(i) for i in self.complement)

    def is_complement(self, i: int) -> bool:
        return i in self._complement_set

    def __post_init__(self):
        self._complement_set = set(self.complement)


def _inverse_rows(rows: List[List[Fraction]]) -> List[List[Fraction]]:
    """Inverse of the square matrix whose rows are ``rows``: returns ``X`` with ``X . rows = I``."""
    d = len(rows)
    # solve X B = I  <=>  B^T X^T = I
    bt = [[rows[r][c] for r in range(d)] for c in range(d)]
    aug = [bt[i] + [Fraction(int(i == j)) for j in range(d)] for i in range(d)]
    red, piv = rref(aug, 2 * d)
    if piv[:d] != list(range(d)):
        raise CofinitenessError("C1 decomposition basis is singular")
    xt = [row[d:] for row in red]
    return [[xt[r][c] for r in range(d)] for c in range(d)]


def c1_quotient(m: ModuleData, max_u_weight=None) -> C1Quotient:
    """Complement of ``C_1(W)`` in the truncated module with decompositions.

    The spanning set of ``C_1`` in weight ``s`` is ``u_{-1} w'`` for basis
    vectors ``u`` of V with ``0 < wt u`` (bounded by V's cutoff and
    ``max_u_weight``) and basis vectors ``w'`` of weight ``s - wt u``.
    """
    V = m.voa
    comp: List[int] = []
    table: Dict[int, C1Decomposition] = {}
    reliable = None
    if m.dim == 0:
        return C1Quotient(m, comp, table)
    for s in m.space.weight_list():
        basis = m.space.basis_of_weight(s)
        pos = {b: k for k, b in enumerate(basis)}
        spanning = []
        truncated = False
        for u in range(V.dim):
            wu = V.weight(u)
            if wu <= 0 or (max_u_weight is not None and wu > max_u_weight):
                continue
            for w in m.space.basis_of_weight(s - wu):
                try:
                    vec = m.mode(u, -1, w)
                except TruncationError:
                    truncated = True
                    continue
                if vec:
                    spanning.append(((wu, u, w), vec))
        if truncated:
            # products at this weight need data above the cutoff; stop here
            break
        spanning.sort(key=lambda t: t[0])
        rows, chosen = [], []
        span = RationalSpan(len(basis))
        for key, vec in spanning:
            row = [Fraction(0)] * len(basis)
            for j, c in vec.items():
                row[pos[j]] = c
            if span.add(row):
                rows.append(row)
                chosen.append(key)
            if len(rows) == len(basis):
                break
        red, piv = rref(rows, len(basis)) if rows else ([], [])
        local_comp = [basis[k] for k in range(len(basis)) if k not in piv]
        comp.extend(local_comp)
        full = rows + [[Fraction(int(k == pos[c])) for k in range(len(basis))] for c in local_comp]
        inv = _inverse_rows(full)
        for k, b in enumerate(basis):
            coeffs = inv[k]
            terms = [(key[1], key[2], coeffs[r]) for r, key in enumerate(chosen) if coeffs[r]]
            cpart = {c: coeffs[len(chosen) + q] for q, c in enumerate(local_comp) if coeffs[len(chosen) + q]}
            table[b] = C1Decomposition(terms, cpart)
        reliable = s
    return C1Quotient(m, sorted(comp, key=lambda i: (m.weight(i), i)), table, reliable)


def replay_decomposition(q: C1Quotient, b: int) -> Vector:
    """Recompute the vector described by a decomposition entry."""
    m = q.module
    out: Vector = {}
    d = q.decomposition[b]
    for u, w, a in d.terms:
        vec_add(out, m.mode(u, -1, w), a)
    for c, beta in d.complement.items():
        vec_add(out, {c: Fraction(1)}, beta)
    return out


def c2_quotient(v: VOAData) -> int:
    """``dim V / C_2(V)`` at the stored truncation."""
    if v.dim == 0:
        return 0
    total = 0
    for s in v.space.weight_list():
        basis = v.space.basis_of_weight(s)
        pos = {b: k for k, b in enumerate(basis)}
        rows = []
        for u in range(v.dim):
            wu = v.weight(u)
            if wu <= 0:
                continue
            for w in v.space.basis_of_weight(s - wu - 1):
                vec = v.mode(u, -2, w)
                if vec:
                    row = [Fraction(0)] * len(basis)
                    for j, c in vec.items():
                        row[pos[j]] = c
                    rows.append(row)
        r = len(rref(rows, len(basis))[1]) if rows else 0
        total += len(basis) - r
    return total
