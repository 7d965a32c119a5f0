"""Dependencies among normal forms of ``L(-1)``-insertions and the resulting equations."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Dict, List, Optional, Sequence, Tuple

from ..arith.linalg import PolySpan, solve
from ..arith.ratfunc import (RatFunc, clearing_unit, from_qq, common_denominator, poly_ring,
                             poly_to_laurent, ring_to_poly, to_qq)
from ..arith.ring import RingElem, pair_list
from ..voa.space import TruncationError, Vector
from .. import errors
from ..tensor.reduce import Reducer
from ..tensor.relations import relations_up_to
from ..tensor.space import Quad, TensorElem, TensorSetup
from .system import DependencyWitness, ODEPart, ODESystem, canonical_locus, regularity_flags


def _poly_elem(p, nv: int) -> RingElem:
    return RingElem(poly_to_laurent(p, nv))


def _strip_units(p, nv: int):
    """``p`` with every factor ``z_i`` and ``z_i - z_j`` removed."""
    ring = poly_ring(nv)
    units = list(ring.gens) + [ring.gens[i] - ring.gens[j] for i, j in pair_list(nv)]
    for u in units:
        while True:
            q, r = divmod(p, u)
            if r:
                break
            p = q
    return p.quo_ground(p.LC)


def _homogeneous_monomials(nv: int, d: int):
    for c in combinations_with_replacement(range(nv), d):
        e = [0] * nv
        for i in c:
            e[i] += 1
        yield tuple(e)


def _monic_ring_combination(g: Dict[int, List[RatFunc]], m0: int, m: int, nv: int,
                            max_unit_power: Optional[int] = None) -> Optional[List[RingElem]]:
    """Coefficients ``a_0..a_{m-1}, 1`` in R with ``v_m + sum a_k v_k = 0``.

    ``g[j][b]`` expresses ``v_j`` (``j >= m0``) through the independent
    ``v_0..v_{m0-1}``.  The free coefficients ``a_k`` (``m0 <= k < m``) are
    sought as ``A_k / U`` with ``U = (prod z_i prod (z_i - z_j))^e`` and
    ``A_k`` homogeneous of degree ``deg U + k - m``; each remaining ``a_b``
    must then be in R, a divisibility condition that is linear in ``A_k``
    (remainder by a single polynomial is unique).
    """
    ring = poly_ring(nv)
    free = list(range(m0, m))
    base = ring.one
    for x in ring.gens:
        base = base * x
    for i, j in pair_list(nv):
        base = base * (ring.gens[i] - ring.gens[j])
    dbase = nv + len(pair_list(nv))
    top = max_unit_power if max_unit_power is not None else 2 * m + 2
    dens = []
    for b in range(m0):
        d = ring.one
        for k in free + [m]:
            d = d.lcm(g[k][b].den)
        nums = {k: g[k][b].num * d.exquo(g[k][b].den) for k in free + [m]}
        dens.append((_strip_units(d, nv), d, nums))
    for e in range(top + 1):
        U = base ** e
        unknowns = []
        for k in free:
            deg = dbase * e + k - m
            if deg >= 0:
                unknowns.extend((k, mono) for mono in _homogeneous_monomials(nv, deg))
        cols = {}
        eqs: Dict[tuple, Dict[int, Fraction]] = {}
        rhs: Dict[tuple, Fraction] = {}
        for b, (dprime, _d, nums) in enumerate(dens):
            if dprime.is_ground:
                continue
            target = (U * nums[m]).rem(dprime)
            for mono, c in target.terms():
                rhs[(b, mono)] = rhs.get((b, mono), Fraction(0)) - from_qq(c)
            for idx, (k, mono) in enumerate(unknowns):
                term = (ring.from_dict({mono: 1}) * nums[k]).rem(dprime)
                for mm, c in term.terms():
                    eqs.setdefault((b, mm), {})[idx] = from_qq(c)
        keys = sorted(set(eqs) | set(rhs))
        rows = [[eqs.get(key, {}).get(i, Fraction(0)) for i in range(len(unknowns))] for key in keys]
        if keys:
            sol = solve(rows, [rhs.get(key, Fraction(0)) for key in keys]) if unknowns else (
                None if any(rhs.values()) else [])
            if sol is None:
                continue
        else:
            sol = [Fraction(0)] * len(unknowns)
        A = {k: ring.zero for k in free}
        for (k, mono), c in zip(unknowns, sol):
            if c:
                A[k] = A[k] + ring.from_dict({mono: to_qq(c)})
        coeffs: List[Optional[RingElem]] = [None] * (m + 1)
        afree = {k: RatFunc(A[k], U, nv) for k in free}
        for k in free:
            coeffs[k] = afree[k].to_ring()
        for b in range(m0):
            acc = RatFunc(-g[m][b].num, g[m][b].den, nv)
            for k in free:
                acc = acc - afree[k] * g[k][b]
            coeffs[b] = acc.to_ring()
        coeffs[m] = RingElem.one(nv)
        if all(c is not None for c in coeffs):
            return coeffs
    return None


class Deriver:
    """Holds the reducer and the kernel ``K = span nf(J)`` for one tensor setup.

    ``relation_level`` bounds the level of the relation heads whose normal
    forms span ``K`` (default: the setup's level cutoff).
    """

    def __init__(self, setup: TensorSetup, relation_level=None, reducer: Optional[Reducer] = None):
        self.setup = setup
        self.reducer = reducer or Reducer(setup)
        self.nv = setup.nvars
        self.coords: List[Quad] = setup.complement_quads()
        self.pos = {q: i for i, q in enumerate(self.coords)}
        self.relation_level = setup.level_cutoff if relation_level is None else Fraction(relation_level)
        self._kernel: Optional[List[Tuple[tuple, List[RingElem]]]] = None

    # -- coordinates ---------------------------------------------------------
    def coordinates(self, t: TensorElem) -> List[RingElem]:
        nf = self.reducer.reduce(t, certificate=False).normal_form
        vec = [RingElem.zero(self.nv) for _ in self.coords]
        for q, c in nf.terms.items():
            vec[self.pos[q]] = c
        return vec

    def kernel(self) -> List[Tuple[tuple, List[RingElem]]]:
        """Nonzero normal forms of the generated relations, as ``(key, coordinates)``."""
        if self._kernel is None:
            out = []
            for key in relations_up_to(self.setup, self.relation_level):
                try:
                    rel = self.reducer.relation(key)
                except errors.CutoffError:
                    continue
                vec = self.coordinates(rel.expansion)
                if any(not x.is_zero() for x in vec):
                    out.append((key, vec))
            self._kernel = out
        return self._kernel

    # -- insertions ------------------------------------------------------------
    def insertion(self, slot: int, quad: Quad, j: int) -> TensorElem:
        """``w_0 (x) ... L(-1)^j w_slot (x) ...``."""
        m = self.setup.modules[slot]
        vec: Vector = {quad[slot]: Fraction(1)}
        try:
            for _ in range(j):
                vec = m.virasoro(-1, vec)
        except TruncationError as exc:
            raise errors.CutoffError(
                f"L(-1)^{j} on slot {slot} exceeds the stored weight of {m.name}") from exc
        t = TensorElem(nvars=self.nv)
        for i, c in vec.items():
            q = list(quad)
            q[slot] = i
            t.add_term(tuple(q), RingElem.const(c, self.nv))
        return t

    # -- dependence search ----------------------------------------------------------
    def _poly_row(self, vec: List[RingElem]):
        shift, den = common_denominator(vec, self.nv)
        row = [ring_to_poly(x, shift, den) for x in vec]
        unit = clearing_unit(self.nv, shift, den)
        return row, ring_to_poly(unit, (0,) * self.nv, (0,) * len(den))

    def derive(self, slot: int, quad: Quad, max_order: Optional[int] = None,
               certificates: bool = False, extra_orders: int = 3) -> Tuple[ODEPart, DependencyWitness]:
        """Least-order monic equation in ``z_slot`` with coefficients in R.

        The first dependence over the fraction field gives the order ``m0``.
        If its coefficients are not all in R (an apparent singularity), orders
        ``m0 + 1 .. m0 + extra_orders`` are searched for a monic dependence
        with coefficients in R.
        """
        setup = self.setup
        if not 1 <= slot <= setup.p:
            raise ValueError(f"slot must be between 1 and {setup.p}")
        quad = tuple(quad)
        ncols = len(self.coords)
        kern = self.kernel()
        nk = len(kern)
        limit = ncols + 1 if max_order is None else max_order
        ntags = nk + limit + extra_orders + 2
        ring = poly_ring(self.nv)
        span = PolySpan(ncols)
        for r, (key, vec) in enumerate(kern):
            row, unit = self._poly_row(vec)
            tags = [ring.zero] * ntags
            tags[r] = unit
            span.add(row + tags)
        vectors: List[List[RingElem]] = []
        sizes: List[int] = []

        def insert(j: int):
            t = self.insertion(slot, quad, j)
            vec = self.coordinates(t)
            if certificates:
                sizes.append(len(self.reducer.reduce(t).certificate))
            vectors.append(vec)
            if any(not x.is_zero() for x in vec):
                row, unit = self._poly_row(vec)
            else:
                row, unit = [ring.zero] * ncols, ring.one
            tags = [ring.zero] * ntags
            tags[nk + j] = unit
            return row + tags

        m0 = None
        for j in range(limit + 1):
            independent, reduced = span.add(insert(j))
            if not independent:
                m0 = j
                break
        if m0 is None:
            raise errors.DerivationError(
                f"no dependence among L(-1)^j insertions for j <= {limit} "
                f"(complement rank {ncols}); the cutoff is inconsistent")
        tagpart = reduced[ncols:]
        lead = tagpart[nk + m0]
        if not lead:
            raise errors.DerivationError("dependence without a leading coefficient")
        ratios = [RatFunc(tagpart[nk + k], lead, self.nv) for k in range(m0 + 1)]
        coeffs = [rf.to_ring() for rf in ratios]
        if all(c is not None for c in coeffs):
            scale = _poly_elem(lead, self.nv)
            kcoeffs, kkeys, kvecs = [], [], []
            for r in range(nk):
                if tagpart[r]:
                    kcoeffs.append(_poly_elem(tagpart[r], self.nv))
                    kkeys.append(kern[r][0])
                    kvecs.append(kern[r][1])
            part = ODEPart(slot, coeffs)
        else:
            # express each later insertion through v_0..v_{m0-1} modulo K
            g = {m0: [RatFunc(-tagpart[nk + b], lead, self.nv) for b in range(m0)]}
            found = None
            for m in range(m0 + 1, m0 + extra_orders + 1):
                red = span.reduce(insert(m))
                tp = red[ncols:]
                g[m] = [RatFunc(-tp[nk + b], tp[nk + m], self.nv) for b in range(m0)]
                found = _monic_ring_combination(g, m0, m, self.nv)
                if found is not None:
                    break
            if found is None:
                raise errors.DerivationError(
                    f"the fraction-field dependence at order {m0} has coefficients outside R "
                    f"({next(rf for rf, c in zip(ratios, coeffs) if c is None)}) and no monic "
                    f"dependence over R exists up to order {m0 + extra_orders} within the ansatz "
                    f"bounds; raise the cutoff")
            coeffs = found
            part = ODEPart(slot, coeffs)
            # kernel part of the witness: reduce the combined vector against K alone
            combo = [RingElem.zero(self.nv) for _ in range(ncols)]
            for a, vec in zip(coeffs, vectors):
                for i in range(ncols):
                    if not vec[i].is_zero() and not a.is_zero():
                        combo[i] = combo[i] + a * vec[i]
            kspan = PolySpan(ncols)
            for r, (key, vec) in enumerate(kern):
                row, unit = self._poly_row(vec)
                tags = [ring.zero] * (nk + 1)
                tags[r] = unit
                kspan.add(row + tags)
            if any(not x.is_zero() for x in combo):
                row, unit = self._poly_row(combo)
            else:
                row, unit = [ring.zero] * ncols, ring.one
            tags = [ring.zero] * (nk + 1)
            tags[nk] = unit
            independent, red = kspan.add(row + tags)
            if independent:
                raise errors.DerivationError("R-combination is not in the relation span")
            tp = red[ncols:]
            scale = _poly_elem(tp[nk], self.nv)
            kcoeffs, kkeys, kvecs = [], [], []
            for r in range(nk):
                if tp[r]:
                    kcoeffs.append(_poly_elem(tp[r], self.nv))
                    kkeys.append(kern[r][0])
                    kvecs.append(kern[r][1])
        part.regular = regularity_flags(part)
        m = part.order
        witness = DependencyWitness(list(self.coords), vectors[: m + 1], coeffs, kkeys, kvecs, kcoeffs,
                                    sizes[: m + 1], scale=scale, field_order=m0)
        return part, witness

    def _to_ring(self, rf: RatFunc, what: str) -> RingElem:
        r = rf.to_ring()
        if r is None:
            raise errors.DerivationError(
                f"{what} {rf} is not in R; the relation window is too small, raise the cutoff")
        return r

    def derive_regular(self, slot: int, quad: Quad, locus: str) -> Tuple[ODEPart, DependencyWitness]:
        locus = canonical_locus(locus)
        part, witness = self.derive(slot, quad)
        if part.order and not part.regular.get(locus, False):
            raise errors.DerivationError(
                f"least-order equation in z{slot} is not in regular form at {locus}; "
                f"flags: {part.regular}")
        return part, witness

    def derive_system(self, quad: Quad, slots: Optional[Sequence[int]] = None,
                      locus: Optional[str] = None) -> ODESystem:
        setup = self.setup
        slots = list(range(1, setup.p + 1)) if slots is None else list(slots)
        parts, wits = {}, {}
        for s in slots:
            if locus is None:
                part, wit = self.derive(s, quad)
            else:
                part, wit = self.derive_regular(s, quad, locus)
            parts[s] = part
            wits[s] = wit
        weights = [m.weight(i) for m, i in zip(setup.modules, quad)]
        delta = weights[0] - sum(weights[1:])
        prov = {
            "modules": [m.name for m in setup.modules],
            "tuple": [str(lbl) for lbl in setup.label(quad)],
            "level_cutoff": str(setup.level_cutoff),
            "relation_level": str(self.relation_level),
            "strategy": "slot-priority " + ",".join(str(s) for s in setup.slot_priority),
        }
        specs = _spec_provenance(setup.modules)
        if specs is not None:
            prov["specs"] = specs
            prov["vectors"] = [list(_plain_label(lbl)) for lbl in setup.label(quad)]
        if locus is not None:
            prov["locus"] = locus
        return ODESystem(setup.nvars, parts, prov, delta, weights, wits)


def _plain_label(lbl):
    if isinstance(lbl, tuple) and len(lbl) == 2 and lbl[0] == "dual":
        return lbl[1]
    return lbl


def _spec_provenance(modules) -> Optional[list]:
    """Model specs of the slots (slot 0 names the target, not its dual), when all are known."""
    from ..io import q_to_json
    from ..models.registry import FAMILIES, spec_of
    out = []
    for k, m in enumerate(modules):
        if k == 0:
            if m.family != "contragredient":
                return None
            m = m.parent
        if m.family not in FAMILIES:
            return None
        spec = spec_of(m)
        entry = {"family": spec.family, "params": {a: q_to_json(v) for a, v in sorted(spec.params.items())},
                 "cutoff": q_to_json(m.cutoff)}
        # the simple h = 0 module is the vertex algebra itself
        simple_vacuum = spec.family == "virasoro-minimal" and spec.params["h"] == 0
        if m is m.voa or m.params.get("vacuum") or simple_vacuum:
            entry["vacuum_module"] = True
        out.append(entry)
    return out


def apply_equation(part: ODEPart, log_derivative: RingElem, value: RingElem) -> RingElem:
    """``sum a_k d^k(P phi_0)/dz^k / P`` for ``phi = P * value`` with ``dP/P = log_derivative``.

    Returns the residual as an element of R; zero means the equation
    annihilates ``P * value`` exactly.
    """
    l = part.variable - 1
    cur = value
    total = RingElem.zero(part.nvars)
    for k, a in enumerate(part.coeffs):
        if not a.is_zero():
            total = total + a * cur
        cur = cur.derivative(l) + cur * log_derivative
    return total
