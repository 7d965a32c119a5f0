"""Normal-form reduction of T modulo J into the span of C1-complement tuples.

A basis tuple with a non-complement factor in slot ``s`` (first in the slot
priority order) is rewritten through the C1 decomposition of that factor::

    w_s = sum alpha u_{-1} w' + sum beta c

Each ``u_{-1} w'`` term is the head of the relation of slot ``s`` for ``u``
and the tuple with ``w'`` in slot ``s``; replacing the head by minus the rest
of the relation (divided by the head sign) strictly lowers the weight.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from ..arith.ring import RingElem
from .relations import RelKey, Relation, gen_relation, head_sign, kind_name
from .space import Quad, TensorElem, TensorSetup, filtration_index


@dataclass
class Certificate:
    """``input - normal_form = sum mult * relation(key)``."""

    entries: Dict[RelKey, RingElem] = field(default_factory=dict)

    def add(self, key: RelKey, c: RingElem) -> None:
        if c.is_zero():
            return
        old = self.entries.get(key)
        new = c if old is None else old + c
        if new.is_zero():
            self.entries.pop(key, None)
        else:
            self.entries[key] = new

    def __len__(self) -> int:
        return len(self.entries)

    def to_json(self, setup: TensorSetup) -> dict:
        from ..io import ring_to_json
        items = []
        for (slot, u, quad), c in sorted(self.entries.items(), key=lambda kv: (kv[0][0], kv[0][1], kv[0][2])):
            items.append({
                "kind": kind_name(slot, setup.p),
                "u": u,
                "tuple": list(quad),
                "multiplier": ring_to_json(c),
            })
        return {"relations": items}


@dataclass
class Reduction:
    normal_form: TensorElem
    certificate: Optional[Certificate]
    max_index: Optional[Fraction] = None


@dataclass
class _Node:
    nf: TensorElem
    direct: List[Tuple[RelKey, RingElem]]
    children: List[Tuple[Quad, RingElem]]


class Reducer:
    """Deterministic reducer for one tensor setup (memoised per basis tuple)."""

    def __init__(self, setup: TensorSetup):
        self.setup = setup
        self.nv = setup.nvars
        self._nodes: Dict[Quad, _Node] = {}
        self._relations: Dict[RelKey, Relation] = {}
        self._flat: Dict[Quad, Certificate] = {}

    # -- relations ----------------------------------------------------------
    def relation(self, key: RelKey) -> Relation:
        rel = self._relations.get(key)
        if rel is None:
            rel = gen_relation(self.setup, *key)
            self._relations[key] = rel
        return rel

    def rewrite_slot(self, quad: Quad) -> Optional[int]:
        """First slot (in priority order) whose factor is outside the C1 complement."""
        for s in self.setup.slot_priority:
            if not self.setup.quotients[s].is_complement(quad[s]):
                return s
        return None

    def rewrite(self, quad: Quad) -> Tuple[List[Tuple[RelKey, RingElem]], TensorElem]:
        """One rewriting step: ``quad = replacement + sum mult * relation``."""
        s = self.rewrite_slot(quad)
        if s is None:
            raise ValueError("tuple is already in complement form")
        nv = self.nv
        dec = self.setup.quotients[s].decomposition[quad[s]]
        repl = TensorElem.basis(quad, nv)
        direct: List[Tuple[RelKey, RingElem]] = []
        h = head_sign(s)
        for u, wp, alpha in dec.terms:
            q = list(quad)
            q[s] = wp
            key = (s, u, tuple(q))
            mult = RingElem.const(Fraction(alpha) / h, nv)
            direct.append((key, mult))
            repl.iadd(self.relation(key).expansion, -mult)
        # the heads reassemble quad minus its complement part
        if quad in repl.terms:
            raise AssertionError(f"rewriting of {quad} did not cancel its head term")
        return direct, repl

    # -- normal forms ---------------------------------------------------------
    def _node(self, quad: Quad) -> _Node:
        node = self._nodes.get(quad)
        if node is not None:
            return node
        if self.rewrite_slot(quad) is None:
            node = _Node(TensorElem.basis(quad, self.nv), [], [])
        else:
            direct, repl = self.rewrite(quad)
            nf = TensorElem(nvars=self.nv)
            children = []
            for q, c in repl.terms.items():
                nf.iadd(self._node(q).nf, c)
                children.append((q, c))
            node = _Node(nf, direct, children)
        self._nodes[quad] = node
        return node

    def nf_basis(self, quad: Quad) -> TensorElem:
        return self._node(tuple(quad)).nf

    def certificate_of_basis(self, quad: Quad) -> Certificate:
        quad = tuple(quad)
        hit = self._flat.get(quad)
        if hit is not None:
            return hit
        node = self._node(quad)
        cert = Certificate()
        for key, c in node.direct:
            cert.add(key, c)
        for q, c in node.children:
            for key, m in self.certificate_of_basis(q).entries.items():
                cert.add(key, m * c)
        self._flat[quad] = cert
        return cert

    def reduce(self, t: TensorElem, certificate: bool = True) -> Reduction:
        nf = TensorElem(nvars=self.nv)
        for q, c in t.terms.items():
            nf.iadd(self.nf_basis(q), c)
        cert = None
        if certificate:
            cert = Certificate()
            for q, c in t.terms.items():
                for key, m in self.certificate_of_basis(q).entries.items():
                    cert.add(key, m * c)
        return Reduction(nf, cert)

    def reduce_graded(self, t: TensorElem) -> Reduction:
        """Worklist reduction that always rewrites a term of highest ``z1 = z2`` index.

        ``max_index`` is the largest filtration index of any relation
        multiple used.
        """
        setup = self.setup
        work = t.copy()
        out = TensorElem(nvars=self.nv)
        cert = Certificate()
        max_index: Optional[Fraction] = None

        def index(q: Quad, c: RingElem) -> Fraction:
            return c.dpow + setup.weight(q)

        while work.terms:
            q, c = max(work.terms.items(), key=lambda kv: (index(*kv), kv[0]))
            del work.terms[q]
            if self.rewrite_slot(q) is None:
                out.add_term(q, c)
                continue
            direct, repl = self.rewrite(q)
            for key, m in direct:
                mult = m * c
                cert.add(key, mult)
                r = filtration_index(self.relation(key).expansion.scale(mult), setup)
                if r is not None and (max_index is None or r > max_index):
                    max_index = r
            work.iadd(repl, c)
        return Reduction(out, cert, max_index)

    # -- audit -----------------------------------------------------------------
    def replay(self, t: TensorElem, red: Reduction) -> bool:
        """Check ``t - normal_form = sum mult * relation`` exactly."""
        if red.certificate is None:
            raise ValueError("reduction carries no certificate")
        acc = t - red.normal_form
        for key, m in red.certificate.entries.items():
            acc.iadd(self.relation(key).expansion, -m)
        return acc.is_zero()

    def normal_form_weight(self, red: Reduction) -> Optional[Fraction]:
        return self.setup.max_weight(red.normal_form)
