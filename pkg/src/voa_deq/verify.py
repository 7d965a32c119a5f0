"""Oracle checks for derived equations.

Each equation is applied to an independently computed correlator: exactly
in R when a closed form exists, and term by term on its expansions in the
product, iterate and reversed regions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .arith.ring import RingElem
from .arith.series import PRODUCT, REGIONS, REVERSED, RegionSeries, power_prefactor, ring_expand
from .deq.derive import apply_equation
from .deq.system import ODEPart, ODESystem
from .frobenius.solver import FrobeniusSolution, local_equation, residual
from .models.freefield import fock_series_region1
from .models.oracles import fock_correlator, ising_blocks, oracle_fock_p_point
from . import errors


# -- region calculus ------------------------------------------------------------

def region_derivative(s: RegionSeries, variable: int) -> RegionSeries:
    """``d/dz_variable`` of a region expansion (the other ``z`` held fixed)."""
    out: Dict[Tuple[Fraction, Fraction], Fraction] = {}

    def put(k, c):
        if c:
            out[k] = out.get(k, 0) + c

    drop_small = False
    for (a, b), c in s.terms.items():
        if s.region == PRODUCT:
            if variable == 1:
                put((a - 1, b), a * c)
            else:
                put((a, b - 1), b * c)
                drop_small = True
        elif s.region == REVERSED:
            if variable == 1:
                put((a, b - 1), b * c)
                drop_small = True
            else:
                put((a - 1, b), a * c)
        else:
            # big = z2, small = w = z1 - z2; d/dz1 = d/dw, d/dz2 = d/dz2|_w - d/dw
            put((a, b - 1), (b * c) if variable == 1 else (-b * c))
            drop_small = True
            if variable == 2:
                put((a - 1, b), a * c)
    order = s.order
    if order is not None and drop_small:
        order = order - 1
    return RegionSeries(s.region, out, order)


def apply_to_series(part: ODEPart, phi: RegionSeries, order: int) -> RegionSeries:
    """``sum a_k d^k phi`` with the coefficients expanded in the series' region."""
    total: Optional[RegionSeries] = None
    cur = phi
    for k, a in enumerate(part.coeffs):
        if k:
            cur = region_derivative(cur, part.variable)
        if a.is_zero():
            continue
        term = ring_expand(a, phi.region, order + 2 * part.order + a.dpow + 4) * cur
        total = term if total is None else total + term
    return total if total is not None else RegionSeries(phi.region, {}, phi.order)


# -- oracles ----------------------------------------------------------------------

def fock_region_series(lams: Sequence, parts: Sequence[Sequence[int]], region: str, order: int
                       ) -> RegionSeries:
    """Four-point Fock correlator (closed form times Wick part) in one region."""
    _, l1, l2, l3 = (Fraction(x) for x in lams)
    body = fock_correlator(lams, parts)
    pre = power_prefactor(region, l1 * l3, l2 * l3, l1 * l2, order + 2 * body.dpow + 8)
    return pre * ring_expand(body, region, order + 2 * body.dpow + 8)


def vertex_product_series(lams: Sequence, parts: Sequence[Sequence[int]], order: int) -> RegionSeries:
    """Product-region expansion computed from vertex operators on Fock states."""
    _, l1, l2, l3 = (Fraction(x) for x in lams)
    terms = fock_series_region1(lams, parts, order)
    return RegionSeries(PRODUCT, terms, order + l2 * l3)


@dataclass
class Check:
    slot: int
    method: str
    passed: bool
    first_nonzero: Optional[str] = None

    def to_json(self) -> dict:
        return {"slot": self.slot, "method": self.method, "passed": self.passed,
                "first_nonzero_order": self.first_nonzero}


@dataclass
class VerifyReport:
    oracle: str
    order: int
    checks: List[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(c.passed for c in self.checks)

    def to_json(self) -> dict:
        return {"schema": "voa-deq/verify-report/1", "oracle": self.oracle, "order": self.order,
                "passed": self.passed, "checks": [c.to_json() for c in self.checks]}

    def text(self) -> str:
        lines = [f"oracle {self.oracle}, order {self.order}: {'PASS' if self.passed else 'FAIL'}"]
        for c in self.checks:
            where = c.first_nonzero if c.method == "exact" else f"order {c.first_nonzero}"
            extra = "" if c.passed else f" (first nonzero residual: {where})"
            lines.append(f"  z{c.slot} {c.method}: {'pass' if c.passed else 'fail'}{extra}")
        return "\n".join(lines) + "\n"


def _fock_log_derivative(lams: Sequence[Fraction], slot: int, nv: int) -> RingElem:
    exps = oracle_fock_p_point(lams)
    acc = RingElem.zero(nv)
    for (i, j), e in exps.items():
        if not e:
            continue
        if j == 0:
            if i == slot:
                acc = acc + RingElem.var(i - 1, nv, -1) * e
        elif slot in (i, j):
            sign = 1 if slot == i else -1
            acc = acc + RingElem.diff_power(i - 1, j - 1, -1, nv, e * sign)
    return acc


def detect_oracle(system: ODESystem) -> str:
    specs = system.provenance.get("specs")
    if not specs:
        raise errors.InputError("the system carries no model specs; name the oracle explicitly")
    fams = {s["family"] for s in specs}
    vectors = system.provenance.get("vectors", [])
    if fams <= {"fock", "heisenberg"}:
        return "fock"
    ends = [(s["family"], s["params"]) for s in (specs[0], specs[-1])]
    if all(not v for v in vectors) and all(s.get("vacuum_module") for s in specs[1:-1]) and ends[0] == ends[1]:
        return "vacuum"
    ising = {"family": "virasoro-minimal", "params": {"c": ["1", "2"], "h": ["1", "16"]}}
    if system.nvars == 2 and all({k: s[k] for k in ising} == ising for s in specs):
        return "ising"
    raise errors.InputError(f"no built-in oracle for model families {sorted(fams)}")


def _lams(system: ODESystem) -> List[Fraction]:
    from .io import q_from_json
    out = []
    for s in system.provenance["specs"]:
        out.append(Fraction(0) if s["family"] == "heisenberg" else q_from_json(s["params"]["lambda"]))
    return out


def verify_system(system: ODESystem, oracle: str = "auto", order: int = 8) -> VerifyReport:
    if oracle == "auto":
        oracle = detect_oracle(system)
    rep = VerifyReport(oracle, order)
    nv = system.nvars
    for slot, part in sorted(system.parts.items()):
        if oracle == "vacuum":
            res = apply_equation(part, RingElem.zero(nv), RingElem.one(nv))
            rep.checks.append(_exact_check(slot, res))
            if nv == 2:
                for region in REGIONS:
                    phi = RegionSeries(region, {(Fraction(0), Fraction(0)): Fraction(1)}, None)
                    rep.checks.append(_series_check(slot, region, apply_to_series(part, phi, order), order))
        elif oracle == "fock":
            lams = _lams(system)
            vectors = [tuple(v) for v in system.provenance["vectors"]]
            value = fock_correlator(lams, vectors)
            res = apply_equation(part, _fock_log_derivative(lams, slot, nv), value)
            rep.checks.append(_exact_check(slot, res))
            if nv == 2:
                for region in REGIONS:
                    phi = fock_region_series(lams, vectors, region, order + part.order + 4)
                    rep.checks.append(_series_check(slot, region, apply_to_series(part, phi, order), order))
                phi = vertex_product_series(lams, vectors, order + part.order + 4)
                check = _series_check(slot, PRODUCT, apply_to_series(part, phi, order), order)
                check.method = "vertex operators " + check.method
                rep.checks.append(check)
        elif oracle == "ising":
            if slot != 1:
                continue
            eq = local_equation(part, "z3=0", order + 4)
            for blk in ising_blocks(order):
                sol = FrobeniusSolution(blk.offset, [list(blk.coeffs)])
                rows = residual(eq, sol)
                bad = [n for n, x in enumerate(rows[0]) if x]
                rep.checks.append(Check(slot, f"z3-series s={blk.offset}", not bad,
                                        None if not bad else str(blk.offset + bad[0])))
        else:
            raise errors.InputError(f"unknown oracle {oracle!r}; expected auto, vacuum, fock or ising")
    return rep


def _exact_check(slot: int, res: RingElem) -> Check:
    if res.is_zero():
        return Check(slot, "exact", True)
    low = min(sum(e) for e in res.num.terms) - res.dpow
    return Check(slot, "exact", False, f"degree {low}")


def _series_check(slot: int, region: str, s: RegionSeries, order: int) -> Check:
    limit = order if s.order is None else min(order, s.order)
    ok = s.is_zero_through(limit)
    low = min((b for (_, b), c in s.terms.items() if c and b <= limit), default=None)
    return Check(slot, f"series {region} through {limit}", ok, None if ok else str(low))


# -- relations against the free-field correlator ------------------------------------

def setup_charges(setup) -> List[Fraction]:
    """Fock charges of the slots (slot 0 carries the target's charge)."""
    out = []
    for k, m in enumerate(setup.modules):
        if k == 0:
            m = m.parent
        if m.family == "heisenberg":
            out.append(Fraction(0))
        elif m.family == "fock":
            out.append(Fraction(m.params["lambda"]))
        else:
            raise errors.InputError(f"slot {k} module {m.name} is not a Fock module")
    return out


def _parts(setup, quad) -> List[tuple]:
    labels = list(setup.label(quad))
    labels[0] = labels[0][1]
    return [tuple(l) for l in labels]


def fock_pairing(setup, t) -> RingElem:
    """``sum_q c_q phi_q`` divided by the common lowest-weight prefactor."""
    lams = setup_charges(setup)
    acc = RingElem.zero(setup.nvars)
    for q, c in t.terms.items():
        acc = acc + c * fock_correlator(lams, _parts(setup, q))
    return acc


def fock_pairing_region(setup, t, region: str, order: int) -> RegionSeries:
    """The same pairing with every factor expanded in ``region`` (four points)."""
    lams = setup_charges(setup)
    _, l1, l2, l3 = lams
    total: Optional[RegionSeries] = None
    for q, c in t.terms.items():
        corr = fock_correlator(lams, _parts(setup, q))
        if corr.is_zero():
            continue
        n = order + 2 * (c.dpow + corr.dpow) + 6
        term = ring_expand(c, region, n) * ring_expand(corr, region, n)
        total = term if total is None else total + term
    if total is None:
        return RegionSeries(region, {}, None)
    pre = power_prefactor(region, l1 * l3, l2 * l3, l1 * l2, order + 2 * total_dpow(t) + 6)
    return pre * total


def total_dpow(t) -> int:
    return max((c.dpow for c in t.terms.values()), default=0)
