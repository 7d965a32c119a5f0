import json
from fractions import Fraction as F

import pytest

from voa_deq import errors
from voa_deq.arith.ring import RingElem
from voa_deq.deq.derive import Deriver, apply_equation
from voa_deq.deq.system import ODEPart, ODESystem, canonical_locus, graded_coefficients, ring_degrees
from voa_deq.models.oracles import bpz_operator
from voa_deq.models.registry import build_models, parse_spec
from voa_deq.tensor.space import TensorSetup
from voa_deq.verify import verify_system
from voa_deq.voa.module import contragredient

from conftest import fock_deriver, ising_setup


def lowest_log_derivative(lams, slot):
    l1, l2, l3 = lams
    z1inv, z2inv = RingElem.var(0, 2, -1), RingElem.var(1, 2, -1)
    d = RingElem.diff_power(0, 1, -1)
    return z1inv * (l1 * l3) + d * (l1 * l2) if slot == 1 else z2inv * (l2 * l3) - d * (l1 * l2)


def round_trip(system):
    return ODESystem.from_json(json.loads(json.dumps(system.to_json())))


def test_locus_aliases():
    assert canonical_locus("z1 = z2") == "z1=z2"
    with pytest.raises(ValueError):
        canonical_locus("z9=0")


def test_vacuum_gives_constant():
    mods = build_models([parse_spec("heisenberg").at_level(3)] * 4)
    setup = TensorSetup([contragredient(mods[0])] + mods[1:], 3)
    system = Deriver(setup).derive_system((0, 0, 0, 0))
    assert system.text().splitlines()[0] == "dphi/dz1 = 0"
    assert [p.order for p in system.parts.values()] == [1, 1]
    assert all(w.is_exact() for w in system.witnesses.values())


def test_fock_lowest_tuple_annihilates_closed_form():
    lams = (F(1), F(1), F(1))
    system = fock_deriver(lams, 4).derive_system((0, 0, 0, 0), locus="z1=z2")
    for slot, part in system.parts.items():
        assert part.order == 1
        assert apply_equation(part, lowest_log_derivative(lams, slot), RingElem.one()).is_zero()
        assert part.regular["z1=z2"]
        assert system.witnesses[slot].is_exact()
    assert system.delta == F(9, 2) - 3 * F(1, 2)


def test_json_round_trip_is_identical():
    system = fock_deriver((1, 1, 1), 4).derive_system((0, 1, 0, 0))
    again = round_trip(system)
    assert again.to_json() == system.to_json()
    assert all(w.is_exact() for w in again.witnesses.values())
    assert again.provenance["vectors"] == [[], [1], [], []]
    assert [s["family"] for s in again.provenance["specs"]] == ["fock"] * 4


@pytest.mark.parametrize("quad", [(0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1), (1, 0, 0, 0)])
def test_excited_tuples_need_ring_coefficients(quad):
    """Apparent singularities at the least field order are removed by a monic R-combination."""
    system = fock_deriver((1, 1, 1), 4).derive_system(quad)
    for slot, w in system.witnesses.items():
        assert w.is_exact()
        assert w.field_order <= system.parts[slot].order
    assert verify_system(system, "fock", 6).passed


def test_fault_injection_is_detected():
    lams = (F(1), F(1), F(1))
    part = fock_deriver(lams, 4).derive(1, (0, 0, 0, 0))[0]
    bad = ODEPart(1, [part.coeffs[0] + RingElem.var(0, 2, -1), part.coeffs[1]])
    assert not apply_equation(bad, lowest_log_derivative(lams, 1), RingElem.one()).is_zero()


def test_ising_equation_is_the_null_vector_operator():
    part, witness = Deriver(ising_setup(4)).derive(1, (0, 0, 0, 0))
    h = F(1, 16)
    assert part.order == 2
    assert witness.is_exact()
    assert part.coeffs == bpz_operator(F(1, 2), h, h, h, h).coeffs
    assert ring_degrees(graded_coefficients(part)) == [0, 0, 0]


def test_witness_tampering_breaks_exactness():
    system = fock_deriver((1, 1, 1), 4).derive_system((0, 0, 0, 0))
    w = system.witnesses[1]
    w.coeffs[0] = w.coeffs[0] + RingElem.one()
    assert not w.is_exact()


def test_bad_slot_rejected():
    with pytest.raises(ValueError):
        fock_deriver((1, 1, 1), 4).derive(3, (0, 0, 0, 0))


def test_three_point_insertions_vacuum():
    mods = build_models([parse_spec("heisenberg").at_level(2)] * 5)
    setup = TensorSetup([contragredient(mods[0])] + mods[1:], 2)
    system = Deriver(setup).derive_system((0, 0, 0, 0, 0))
    assert system.nvars == 3
    assert [p.text() for p in system.parts.values()] == [f"dphi/dz{l} = 0" for l in (1, 2, 3)]
