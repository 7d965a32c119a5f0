"""Exact linear algebra over Q and fraction-free elimination over Q[z].

Vectors over the fraction field of R are handled by clearing denominators
(multiplying by units of R) and eliminating over the polynomial ring with
content removal, so no rational-function gcds are ever needed during
elimination.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

# -- dense linear algebra over Q --------------------------------------------


def rref(rows: Sequence[Sequence[Fraction]], ncols: int | None = None) -> Tuple[List[List[Fraction]], List[int]]:
    """Reduced row echelon form; returns the nonzero rows and pivot columns."""
    mat = [[Fraction(x) for x in r] for r in rows]
    if not mat:
        return [], []
    ncols = len(mat[0]) if ncols is None else ncols
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(mat)) if mat[i][c]), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = 1 / mat[r][c]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c]:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return mat[:r], pivots


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence[Fraction]], ncols: int) -> List[List[Fraction]]:
    """Basis of ``{x : rows . x = 0}``, one vector per free column (ascending)."""
    red, pivots = rref(rows, ncols) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, p in zip(red, pivots):
            x[p] = -row[f]
        basis.append(x)
    return basis


def solve(rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> Optional[List[Fraction]]:
    """One solution of ``rows . x = rhs`` (free variables zero) or ``None``."""
    ncols = len(rows[0]) if rows else 0
    aug = [list(r) + [Fraction(b)] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug, ncols + 1)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for row, p in zip(red, pivots):
        x[p] = row[ncols]
    return x


class RationalSpan:
    """Incrementally grown row space over Q with membership tests."""

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.rows: List[Tuple[int, List[Fraction]]] = []

    def reduce(self, v: Sequence[Fraction]) -> List[Fraction]:
        v = list(v)
        for c, row in self.rows:
            if v[c]:
                f = v[c]
                v = [a - f * b for a, b in zip(v, row)]
        return v

    def add(self, v: Sequence[Fraction]) -> bool:
        v = self.reduce(v)
        c = next((i for i, x in enumerate(v) if x), None)
        if c is None:
            return False
        inv = 1 / v[c]
        v = [x * inv for x in v]
        # keep rows fully reduced so membership is a single sweep
        self.rows = [(pc, [a - row[c] * b for a, b in zip(row, v)] if row[c] else row)
                     for pc, row in self.rows]
        self.rows.append((c, v))
        return True

    @property
    def rank(self) -> int:
        return len(self.rows)


# -- fraction-free elimination over Q[z] ------------------------------------


def _primitive(v: list) -> list:
    """Divide a polynomial vector by the gcd of its entries."""
    g = None
    for x in v:
        if not x:
            continue
        g = x if g is None else g.gcd(x)
        if g.is_ground:
            break
    if g is None:
        return v
    if g.is_ground:
        # normalise the scalar content too
        lead = next(x for x in v if x)
        lc = lead.LC
        return [x.quo_ground(lc) if x else x for x in v]
    v = [x.exquo(g) if x else x for x in v]
    lead = next(x for x in v if x)
    lc = lead.LC
    return [x.quo_ground(lc) if x else x for x in v]


class PolySpan:
    """Row space over the fraction field of Q[z], stored fraction-free.

    Each vector has ``ncols`` coordinate entries followed by optional tag
    entries that record how it was formed; pivots are only chosen among
    coordinates, so a vector whose coordinates reduce to zero exposes a
    linear relation through its tag part.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.rows: List[Tuple[int, list]] = []

    def reduce(self, v: Sequence) -> list:
        v = list(v)
        for c, row in self.rows:
            x = v[c]
            if not x:
                continue
            p = row[c]
            g = p.gcd(x)
            a, b = p.exquo(g), x.exquo(g)
            v = [a * vi - b * ri for vi, ri in zip(v, row)]
            v = _primitive(v)
        return v

    def pivot_of(self, v: Sequence) -> Optional[int]:
        return next((i for i in range(self.ncols) if v[i]), None)

    def add(self, v: Sequence) -> Tuple[bool, list]:
        """Insert ``v``; returns (independent, reduced vector)."""
        v = self.reduce(v)
        c = self.pivot_of(v)
        if c is None:
            return False, v
        self.rows.append((c, v))
        return True, v

    @property
    def rank(self) -> int:
        return len(self.rows)
