"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` or ``python tests/test_acceptance.py``.
"""

import functools
import random
import sys
import time
from fractions import Fraction as F
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from conftest import fock_deriver, fock_setup, ising_setup  # noqa: E402
from voa_deq.arith.ring import RingElem  # noqa: E402
from voa_deq.arith.series import REGIONS  # noqa: E402
from voa_deq.deq.derive import Deriver, apply_equation  # noqa: E402
from voa_deq.deq.system import graded_coefficients, ring_degrees  # noqa: E402
from voa_deq.frobenius.report import extension_report  # noqa: E402
from voa_deq.frobenius.solver import frobenius_basis, indicial, local_equation, residual_is_zero  # noqa: E402
from voa_deq.fusion import fusion_bound  # noqa: E402
from voa_deq.models.oracles import (bpz_operator, fock_local_series, ising_blocks,  # noqa: E402
                                    ising_correlator_series)
from voa_deq.models.registry import build_models, parse_spec  # noqa: E402
from voa_deq.tensor.reduce import Reducer  # noqa: E402
from voa_deq.tensor.relations import gen_relation, relations_up_to  # noqa: E402
from voa_deq.tensor.space import TensorElem, TensorSetup, compute_M, filtration_index  # noqa: E402
from voa_deq.verify import fock_pairing, fock_pairing_region, verify_system  # noqa: E402
from voa_deq.voa.module import contragredient  # noqa: E402

FREE_BOSON = [(F(1), F(1), F(1)), (F(2), F(1), F(-1)), (F(1, 2), F(1, 2), F(1))]
LOWEST = (0, 0, 0, 0)
ISING = "virasoro-minimal:c=1/2,h=1/16"

_CAPTURE = {"manager": None}


@pytest.fixture(autouse=True)
def _uncaptured(request):
    _CAPTURE["manager"] = request.config.pluginmanager.getplugin("capturemanager")
    yield


def report(n: int, ok: bool, detail: str, t0: float) -> None:
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} ({detail}; {time.time() - t0:.1f}s)"
    cm = _CAPTURE["manager"]
    if cm is None:
        print(line)
    else:
        with cm.global_and_fixture_disabled():
            print("\n" + line)
    assert ok, line


def lowest_log_derivative(lams, slot):
    """``d/dz_slot log`` of ``z1^(l1 l3) z2^(l2 l3) (z1 - z2)^(l1 l2)``."""
    l1, l2, l3 = lams
    d = RingElem.diff_power(0, 1, -1)
    if slot == 1:
        return RingElem.var(0, 2, -1) * (l1 * l3) + d * (l1 * l2)
    return RingElem.var(1, 2, -1) * (l2 * l3) - d * (l1 * l2)


@functools.lru_cache(maxsize=None)
def free_boson_system(lams, locus=None):
    return fock_deriver(lams, 6).derive_system(LOWEST, locus=locus)


@functools.lru_cache(maxsize=None)
def ising_system():
    return Deriver(ising_setup(4)).derive_system(LOWEST, slots=[1])


def vacuum_setup(npoints, level):
    mods = build_models([parse_spec("heisenberg").at_level(level)] * (npoints + 1))
    return TensorSetup([contragredient(mods[0])] + mods[1:], level)


def test_criterion_1_free_boson_annihilation():
    t0 = time.time()
    bad = []
    for lams in FREE_BOSON:
        system = free_boson_system(lams)
        for slot in (1, 2):
            res = apply_equation(system.parts[slot], lowest_log_derivative(lams, slot), RingElem.one())
            if not res.is_zero() or not system.witnesses[slot].is_exact():
                bad.append((lams, slot))
    report(1, not bad, f"3 charge triples x 2 slots at cutoff 6, residual 0; failures {bad}", t0)


def test_criterion_2_regular_singular_point():
    t0 = time.time()
    bad = []
    for lams in FREE_BOSON:
        system = free_boson_system(lams, "z1=z2")
        for slot, part in system.parts.items():
            if any(ring_degrees(graded_coefficients(part))) or not part.regular["z1=z2"]:
                bad.append((lams, slot, "degree"))
        roots = indicial(local_equation(system.parts[1], "z1=z2", 1)).roots
        if lams[0] * lams[1] not in roots:
            bad.append((lams, "roots", roots))
    report(2, not bad, f"degree-0 coefficients, indicial roots contain l1*l2; failures {bad}", t0)


def test_criterion_3_ising_bpz():
    t0 = time.time()
    part = ising_system().parts[1]
    h = F(1, 16)
    eq = local_equation(part, "z3=0", 30)
    basis = frobenius_basis(eq, 20)
    bpz = local_equation(bpz_operator(F(1, 2), h, h, h, h), "z3=0", 30)
    bpz_basis = frobenius_basis(bpz, 20)
    blocks = {b.offset: b.coeffs[:21] for b in ising_blocks(20)}
    ok = (part.order == 2 and len(basis) == 2
          and [b.coeffs for b in basis] == [b.coeffs for b in bpz_basis]
          and all(residual_is_zero(eq, b) and residual_is_zero(bpz, b) for b in basis)
          and all(blocks[b.exponent] == b.coeffs[0][:21] for b in basis)
          and not any(b.has_log for b in basis))
    report(3, ok, f"order {part.order}, exponents {[str(b.exponent) for b in basis]}, "
                  "equal to null-vector basis through order 20, log-free", t0)


def test_criterion_4_fusion_bounds():
    t0 = time.time()
    cases = [(("fock:lambda=1", "fock:lambda=1", "fock:lambda=2"), 1),
             (("fock:lambda=1/2", "fock:lambda=-1", "fock:lambda=-1/2"), 1),
             (("fock:lambda=1", "fock:lambda=1", "fock:lambda=1"), 0),
             (("fock:lambda=1", "fock:lambda=2", "fock:lambda=2"), 0),
             (("heisenberg", "heisenberg", "heisenberg"), 1)]
    got = []
    for specs, expected in cases:
        mods = build_models([parse_spec(s).at_level(4) for s in specs])
        res = fusion_bound(*mods, cutoff=4, extra_points=5)
        got.append((res.bound, res.stable, len(res.other_points)))
    ok = all(g == (e, True, 5) for g, (_, e) in zip(got, cases))
    report(4, ok, f"bounds {[g[0] for g in got]} at cutoff 4, stable over 5 extra points", t0)


def _random_element(rng, setup, quads):
    t = TensorElem(nvars=setup.nvars)
    for _ in range(rng.randint(1, 4)):
        c = (RingElem.const(F(rng.randint(-5, 5), rng.randint(1, 4)), setup.nvars)
             * RingElem.var(0, setup.nvars, rng.randint(-2, 2))
             * RingElem.diff_power(0, 1, -rng.randint(0, 3), setup.nvars))
        t.add_term(rng.choice(quads), c)
    return t


def test_criterion_5_reduction_soundness():
    t0 = time.time()
    counts = {}
    for name, setup in [("fock", fock_setup((1, 1, 1), 4)), ("ising", ising_setup(4))]:
        reducer, rng = Reducer(setup), random.Random(5)
        quads, M = setup.quads_up_to(setup.level_cutoff), compute_M(setup)
        ok = [0, 0, 0, 0]
        for _ in range(200):
            t = _random_element(rng, setup, quads)
            red = reducer.reduce(t)
            ok[0] += reducer.replay(t, red)
            ok[1] += reducer.reduce(red.normal_form).normal_form == red.normal_form
            w = reducer.normal_form_weight(red)
            ok[2] += w is None or w <= M
            g = reducer.reduce_graded(t)
            ok[3] += (g.max_index is None or g.max_index <= filtration_index(t, setup)) and \
                g.normal_form == red.normal_form
        counts[name] = ok
    passed = all(ok == [200] * 4 for ok in counts.values())
    report(5, passed, f"replay/idempotent/weight/filtration counts {counts} of 200", t0)


def test_criterion_6_region_kernel():
    t0 = time.time()
    total, bad = 0, []
    for lams, level in [((1, 1, 1), 4), ((2, 1, -1), 3)]:
        setup = fock_setup(lams, level)
        for key in relations_up_to(setup, setup.level_cutoff):
            rel = gen_relation(setup, *key).expansion
            total += 1
            if not fock_pairing(setup, rel).is_zero():
                bad.append((lams, key, "exact"))
            for region in REGIONS:
                if not fock_pairing_region(setup, rel, region, 8).is_zero_through(8):
                    bad.append((lams, key, region))
    report(6, total > 0 and not bad, f"{total} relations x 3 regions through order 8; failures {bad[:5]}", t0)


def test_criterion_7_extension_report():
    t0 = time.time()
    details, ok = [], True
    for lams in FREE_BOSON:
        system = free_boson_system(lams, "z1=z2")
        oracle = fock_local_series((sum(lams),) + lams, [()] * 4, "z3=0", 20)
        rep = extension_report(system, order=12, oracle=[oracle])
        ok &= rep.oracle.matched and rep.bound_holds() and isinstance(rep.N, int) and len(rep.basis) == 1
        details.append(f"fock {tuple(map(str, lams))}: s={rep.s[0]}, N={rep.N}")
    rep = extension_report(ising_system(), order=12, oracle=ising_correlator_series(20))
    ok &= rep.oracle.matched and rep.bound_holds() and len(rep.basis) == 2 and rep.log_free
    details.append(f"ising: s={[str(s) for s in rep.s]}, r={[str(r) for r in rep.r]}, N={rep.N}")
    report(7, ok, "; ".join(details), t0)


def test_criterion_8_three_points():
    t0 = time.time()
    vac = Deriver(vacuum_setup(4, 2)).derive_system((0,) * 5)
    vac_ok = sorted(vac.parts) == [1, 2, 3] and \
        [ln for ln in vac.text().splitlines() if not ln.startswith(" ")] == \
        ["dphi/dz1 = 0", "dphi/dz2 = 0", "dphi/dz3 = 0"] and \
        all(p.order == 1 and p.coeffs[0].is_zero() for p in vac.parts.values())
    fock = fock_deriver((1, 1, -1, 1), 2).derive_system((0,) * 5)
    rep = verify_system(fock, oracle="fock", order=6)
    report(8, vac_ok and rep.passed,
           f"vacuum dphi/dz_l = 0 for l = 1,2,3; Fock (1,1,-1,1) equations annihilate the oracle: {rep.passed}", t0)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
