"""Truncated modules for a vertex operator algebra and their mode actions.

A VOA is presented by strong generators (``a`` for the Heisenberg algebra,
``omega`` for Virasoro) whose modes act on each module through explicit
tables, plus creation data writing every basis vector of V as
``g_p x`` with ``p < 0`` and ``x`` of lower weight.  Modes of arbitrary
vectors of V then follow from the iterate formula

    (g_p x)_q = sum_{i>=0} (-1)^i C(p, i) (g_{p-i} x_{q+i} - (-1)^p x_{p+q-i} g_i).
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from ..arith.laurent import as_rational
from ..arith.series import binomial
from .space import TRUNCATED, GradedSpace, TruncationError, Vector, vec_add

GeneratorAction = Callable[[str, int, int], Vector]
VLike = Union[int, Vector]


def _floor(x: Fraction) -> int:
    return math.floor(x)


class ModuleData:
    """A module of ``voa`` truncated at ``space.cutoff``.

    ``generator_action(g, n, i)`` returns ``g_n`` applied to basis vector
    ``i``; it is only called when the target weight is within
    ``[min_weight, cutoff]``.
    """

    def __init__(self, name: str, space: GradedSpace, generator_action: Optional[GeneratorAction],
                 voa: "VOAData" = None, *, family: str = "custom", params: dict | None = None):
        self.name = name
        self.space = space
        self._gen_action = generator_action
        self.voa = voa
        self.family = family
        self.params = dict(params or {})
        self._mode_cache: Dict[Tuple[int, int, int], object] = {}
        self._adj_cache: Dict[Tuple[int, int, int], object] = {}

    # -- bookkeeping ------------------------------------------------------
    @property
    def cutoff(self) -> Fraction:
        return self.space.cutoff

    @property
    def min_weight(self):
        return self.space.min_weight

    @property
    def dim(self) -> int:
        return self.space.dim

    def weight(self, i: int) -> Fraction:
        return self.space.weights[i]

    def _target_ok(self, target: Fraction) -> bool:
        """False if the target weight is below the module; raises above the cutoff."""
        if not self.space.dim or target < self.space.min_weight:
            return False
        if target > self.space.cutoff:
            raise TruncationError(f"weight {target} exceeds cutoff {self.space.cutoff} of {self.name}")
        return bool(self.space.basis_of_weight(target))

    # -- generator modes ------------------------------------------------
    def gen_mode(self, g: str, n: int, i: int) -> Vector:
        target = self.voa.generator_weight(g) - n - 1 + self.weight(i)
        if not self._target_ok(target):
            return {}
        return self._gen_action(g, n, i)

    # -- modes of arbitrary V vectors -------------------------------------
    def mode_basis(self, u: int, n: int, i: int) -> Vector:
        """``u_n`` on basis vector ``i`` for a basis vector ``u`` of V."""
        key = (u, n, i)
        hit = self._mode_cache.get(key)
        if hit is not None:
            if hit is TRUNCATED:
                raise TruncationError(f"{self.name}: mode ({u},{n}) on {i} is truncated")
            return hit
        try:
            result = self._compute_mode(u, n, i)
        except TruncationError:
            self._mode_cache[key] = TRUNCATED
            raise
        self._mode_cache[key] = result
        return result

    def _compute_mode(self, u: int, n: int, i: int) -> Vector:
        V = self.voa
        wt_w = self.weight(i)
        target = V.weight(u) - n - 1 + wt_w
        if not self._target_ok(target):
            return {}
        if u == V.vacuum:
            return {i: Fraction(1)} if n == -1 else {}
        g = V.generator_at.get(u)
        if g is not None:
            return dict(self.gen_mode(g, n, i))
        g, p, x = V.creation[u]
        wt_g = V.generator_weight(g)
        wt_x = V.space.weight_of(x)
        lo = self.min_weight
        out: Vector = {}
        sign_p = -1 if p % 2 else 1
        # first sum: g_{p-i} x_{n+i} w
        top = _floor(wt_x - n - 1 + wt_w - lo)
        for k in range(0, top + 1):
            c = binomial(p, k) * (-1 if k % 2 else 1)
            if not c:
                continue
            inner = self.mode(x, n + k, {i: Fraction(1)})
            if inner:
                vec_add(out, self.mode_gen_vec(g, p - k, inner), c)
        # second sum: x_{p+n-i} g_i w
        top = _floor(wt_g - 1 + wt_w - lo)
        for k in range(0, top + 1):
            c = binomial(p, k) * (-1 if k % 2 else 1) * sign_p
            if not c:
                continue
            inner = self.gen_mode(g, k, i)
            if inner:
                vec_add(out, self.mode(x, p + n - k, inner), -c)
        return out

    def mode_gen_vec(self, g: str, n: int, w: Vector) -> Vector:
        out: Vector = {}
        for j, c in w.items():
            vec_add(out, self.gen_mode(g, n, j), c)
        return out

    def mode(self, u: VLike, n: int, w: VLike) -> Vector:
        """``u_n w`` for vectors ``u`` of V and ``w`` of this module (bilinear)."""
        u = {u: Fraction(1)} if isinstance(u, int) else u
        w = {w: Fraction(1)} if isinstance(w, int) else w
        out: Vector = {}
        for a, ca in u.items():
            for j, cw in w.items():
                vec_add(out, self.mode_basis(a, n, j), ca * cw)
        return out

    # -- adjoint modes ----------------------------------------------------
    def adjoint_basis(self, u: int, n: int, i: int) -> Vector:
        """``u*_n`` on basis vector ``i``: the transpose of ``u_n`` acting on the contragredient.

        In this module's own modes,
        ``u*_n = (-1)^{wt u} sum_j (L(1)^j u)_{2 wt u - j - n - 2} / j!``.
        """
        key = (u, n, i)
        hit = self._adj_cache.get(key)
        if hit is not None:
            if hit is TRUNCATED:
                raise TruncationError(f"{self.name}: adjoint ({u},{n}) on {i} is truncated")
            return hit
        try:
            result = self._compute_adjoint(u, n, i)
        except TruncationError:
            self._adj_cache[key] = TRUNCATED
            raise
        self._adj_cache[key] = result
        return result

    def _compute_adjoint(self, u: int, n: int, i: int) -> Vector:
        V = self.voa
        wt_u = V.weight(u)
        target = -wt_u + n + 1 + self.weight(i)
        if not self._target_ok(target):
            return {}
        if wt_u.denominator != 1:
            raise ValueError("adjoint modes need an integral weight")
        wt_u = int(wt_u)
        sign = -1 if wt_u % 2 else 1
        out: Vector = {}
        for j, lu in enumerate(V.l1_powers(u)):
            vec_add(out, self.mode(lu, 2 * wt_u - j - n - 2, i), Fraction(sign, math.factorial(j)))
        return out

    def adjoint(self, u: VLike, n: int, w: VLike) -> Vector:
        u = {u: Fraction(1)} if isinstance(u, int) else u
        w = {w: Fraction(1)} if isinstance(w, int) else w
        out: Vector = {}
        for a, ca in u.items():
            for j, cw in w.items():
                vec_add(out, self.adjoint_basis(a, n, j), ca * cw)
        return out

    # -- Virasoro operators -----------------------------------------------
    def virasoro(self, n: int, w: VLike) -> Vector:
        """``L(n) w = omega_{n+1} w``."""
        return self.mode(self.voa.omega, n + 1, w)

    def L(self, n: int, w: VLike) -> Vector:
        return self.virasoro(n, w)

    def __repr__(self) -> str:
        return f"ModuleData({self.name!r}, dim={self.dim}, cutoff={self.cutoff})"


class VOAData(ModuleData):
    """A VOA as a module over itself, with generators and creation data.

    ``creation[i]`` is ``None`` for the vacuum and ``(g, p, x)`` otherwise,
    meaning basis vector ``i`` equals ``g_p x`` with ``x`` a vector of V.
    """

    def __init__(self, name: str, space: GradedSpace, generator_action: GeneratorAction,
                 generators: Dict[str, int], creation: Sequence, vacuum: int, omega: Vector,
                 central_charge, *, family: str = "custom", params: dict | None = None):
        super().__init__(name, space, generator_action, voa=None, family=family, params=params)
        self.voa = self
        self.generators = dict(generators)
        self.generator_at = {i: g for g, i in self.generators.items()}
        self.creation = list(creation)
        self.vacuum = vacuum
        self.omega = dict(omega)
        self.central_charge = as_rational(central_charge)
        self._l1_cache: Dict[int, List[Vector]] = {}

    def generator_weight(self, g: str) -> Fraction:
        return self.space.weights[self.generators[g]]

    def l1_powers(self, u: int) -> List[Vector]:
        """``[u, L(1)u, L(1)^2 u, ...]`` up to the first zero."""
        hit = self._l1_cache.get(u)
        if hit is None:
            hit = [{u: Fraction(1)}]
            while True:
                nxt = self.mode(self.omega, 2, hit[-1])
                if not nxt:
                    break
                hit.append(nxt)
            self._l1_cache[u] = hit
        return hit

    def positive_basis(self, max_weight) -> List[int]:
        """Homogeneous basis vectors with ``0 < wt <= max_weight``."""
        mw = as_rational(max_weight)
        return [i for i in range(self.dim) if 0 < self.weight(i) <= mw]


class ContragredientModule(ModuleData):
    """The graded dual ``W'`` of a module, in the dual basis.

    ``u_n`` on ``W'`` is the transpose of ``u*_n`` on ``W`` and ``u*_n`` on
    ``W'`` is the transpose of ``u_n`` on ``W``.
    """

    def __init__(self, parent: ModuleData):
        space = GradedSpace([("dual", lab) for lab in parent.space.labels],
                            parent.space.weights, parent.space.cutoff)
        super().__init__(parent.name + "'", space, None, voa=parent.voa,
                         family="contragredient", params={"of": parent.name})
        self.parent = parent

    def _compute_mode(self, u: int, n: int, i: int) -> Vector:
        target = self.voa.weight(u) - n - 1 + self.weight(i)
        if not self._target_ok(target):
            return {}
        out: Vector = {}
        for j in self.parent.space.basis_of_weight(target):
            c = self.parent.adjoint_basis(u, n, j).get(i)
            if c:
                out[j] = c
        return out

    def _compute_adjoint(self, u: int, n: int, i: int) -> Vector:
        target = -self.voa.weight(u) + n + 1 + self.weight(i)
        if not self._target_ok(target):
            return {}
        out: Vector = {}
        for j in self.parent.space.basis_of_weight(target):
            c = self.parent.mode_basis(u, n, j).get(i)
            if c:
                out[j] = c
        return out

    def gen_mode(self, g: str, n: int, i: int) -> Vector:
        return self.mode_basis(self.voa.generators[g], n, i)


def contragredient(m: ModuleData) -> ModuleData:
    if isinstance(m, ContragredientModule):
        return m.parent
    return ContragredientModule(m)


def _as_vec(x: VLike) -> Vector:
    return {x: Fraction(1)} if isinstance(x, int) else x


def apply_mode(m: ModuleData, u: VLike, n: int, w: VLike):
    """``u_n w``, or :data:`TRUNCATED` if the result needs data above the cutoff."""
    if isinstance(u, int) and not 0 <= u < m.voa.dim:
        raise KeyError(f"unknown vector {u} of V")
    try:
        return m.mode(u, n, w)
    except TruncationError:
        return TRUNCATED


def adjoint_mode(m: ModuleData, u: VLike, n: int, w: VLike):
    """``u*_n w`` with ``<u_n w', w> = <w', u*_n w>``, or :data:`TRUNCATED`."""
    try:
        return m.adjoint(u, n, w)
    except TruncationError:
        return TRUNCATED


def conjugated_mode(m: ModuleData, u: VLike, k: int, w: VLike) -> List[Tuple[Vector, int]]:
    """``e^{z^{-1}L(1)} (-z^2)^{L(0)} u_k (-z^{-2})^{L(0)} e^{-z^{-1}L(1)} w``.

    Returned as a list of ``(vector, power of z)`` sorted by power.  The
    ``L(0)`` conjugation contributes ``(-z^2)^{wt u - k - 1}``.
    """
    V = m.voa
    u = _as_vec(u)
    w = _as_vec(w)
    wt_u = V.space.weight_of(u)
    if wt_u is None or not w:
        return []
    if wt_u.denominator != 1:
        raise ValueError("conjugated modes need an integral weight")
    e = int(wt_u) - k - 1
    sign = -1 if e % 2 else 1
    terms: Dict[int, Vector] = {}
    x = w
    j2 = 0
    while x:
        y = m.mode(u, k, x)
        j1 = 0
        c2 = Fraction(-1 if j2 % 2 else 1, math.factorial(j2))
        while y:
            power = 2 * e - j1 - j2
            vec_add(terms.setdefault(power, {}), y, sign * c2 / math.factorial(j1))
            y = m.virasoro(1, y)
            j1 += 1
        x = m.virasoro(1, x)
        j2 += 1
    return [(terms[p], p) for p in sorted(terms) if terms[p]]


def conjugated_operator(V: VOAData, u: int, k: int, min_shift) -> List[Tuple[Fraction, Vector, int, int]]:
    """Operator form of the conjugation of ``u_k`` via ``ad L(1)``.

    Uses ``[L(1), v_n] = (2 wt v - n - 2) v_{n+1} + (L(1)v)_n`` and keeps the
    terms whose weight shift is at least ``min_shift``.  Each entry is
    ``(coefficient, vector v, mode index n, power of z)``.
    """
    wt_u = V.weight(u)
    if wt_u.denominator != 1:
        raise ValueError("conjugated modes need an integral weight")
    e = int(wt_u) - k - 1
    sign = -1 if e % 2 else 1
    out = []
    level: List[Tuple[Fraction, Vector, int]] = [(Fraction(1), {u: Fraction(1)}, k)]
    j = 0
    while level and (e - j) >= min_shift:
        for c, v, n in level:
            out.append((sign * c / math.factorial(j), v, n, 2 * e - j))
        nxt: List[Tuple[Fraction, Vector, int]] = []
        for c, v, n in level:
            wt_v = V.space.weight_of(v)
            a = 2 * wt_v - n - 2
            if a:
                nxt.append((c * a, v, n + 1))
            lv = V.virasoro(1, v)
            if lv:
                nxt.append((c, lv, n))
        level = nxt
        j += 1
    return out
