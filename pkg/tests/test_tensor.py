import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from voa_deq import errors
from voa_deq.arith.ring import RingElem
from voa_deq.models.registry import build_models, parse_spec
from voa_deq.tensor.reduce import Reducer
from voa_deq.tensor.relations import gen_relation, head_term, kind_name, relations_up_to, slot_of_kind
from voa_deq.tensor.space import TensorElem, TensorSetup, compute_M, filtration_index
from voa_deq.verify import fock_pairing
from voa_deq.voa.module import contragredient

from conftest import fock_setup


def test_kind_names():
    assert [kind_name(s, 2) for s in range(4)] == ["D", "A", "B", "C"]
    assert [kind_name(s, 3) for s in range(5)] == ["D", "A1", "A2", "A3", "C"]
    for p in (2, 3):
        for s in range(p + 2):
            assert slot_of_kind(kind_name(s, p), p) == s


def test_cutoff_shortfall_is_reported():
    mods = build_models([parse_spec("fock:lambda=1,cutoff=2")] * 4)
    with pytest.raises(errors.CutoffError):
        TensorSetup([contragredient(mods[0])] + mods[1:], 4)


def test_relations_annihilate_free_field_correlator(fock111):
    """Every relation pairs to zero with the Wick-contraction correlator."""
    keys = list(relations_up_to(fock111, 3))
    assert len(keys) > 50
    for key in keys:
        rel = gen_relation(fock111, *key)
        assert fock_pairing(fock111, rel.expansion).is_zero(), key


def test_pairing_detects_a_non_relation(fock111):
    t = TensorElem.basis((0, 0, 0, 0))
    assert not fock_pairing(fock111, t).is_zero()


def test_head_term_carries_the_u_minus_one_vector(fock111):
    u = fock111.u_basis[0]
    rel = gen_relation(fock111, 1, u, (0, 0, 0, 0))
    head = head_term(fock111, rel)
    assert len(head) == 1
    (q, c), = head.terms.items()
    assert c == RingElem.const(-1) and q[1] != 0


def test_charge_relation_on_lowest_tuple(fock111):
    """Relation C with u = a_{-1}1: the zero modes at z1, z2 contribute -(l1/z1 + l2/z2)."""
    u = fock111.u_basis[0]
    rel = gen_relation(fock111, 3, u, (0, 0, 0, 0))
    lowest = rel.expansion.terms.get((0, 0, 0, 0))
    assert lowest is not None
    assert lowest == -RingElem.var(0, 2, -1) - RingElem.var(1, 2, -1)


@pytest.fixture(scope="module")
def reducer():
    return Reducer(fock_setup((1, 1, 1), 4))


coeff = st.builds(lambda a, b, e, d: RingElem.const(F(a, b)) * RingElem.var(0, 2, e) * RingElem.diff_power(0, 1, -d),
                  st.integers(-4, 4), st.integers(1, 3), st.integers(-2, 2), st.integers(0, 2))


@given(st.lists(st.tuples(st.integers(0, 10 ** 6), coeff), min_size=1, max_size=4))
@settings(max_examples=40, deadline=None)
def test_reduction_properties(reducer, items):
    setup = reducer.setup
    quads = setup.quads_up_to(setup.level_cutoff)
    t = TensorElem()
    for k, c in items:
        t.add_term(quads[k % len(quads)], c)
    red = reducer.reduce(t)
    assert reducer.replay(t, red)
    assert reducer.reduce(red.normal_form).normal_form == red.normal_form
    w = reducer.normal_form_weight(red)
    assert w is None or w <= compute_M(setup)
    assert all(setup.is_complement_quad(q) for q in red.normal_form.terms)
    g = reducer.reduce_graded(t)
    assert g.normal_form == red.normal_form
    assert g.max_index is None or g.max_index <= filtration_index(t, setup)


def test_reduction_commutes_with_the_oracle(reducer):
    """t and its normal form differ by relations, so their pairings agree."""
    setup = reducer.setup
    rng = random.Random(3)
    quads = setup.quads_up_to(3)
    for _ in range(20):
        t = TensorElem()
        for _ in range(3):
            t.add_term(rng.choice(quads), RingElem.const(rng.randint(1, 5)) * RingElem.var(1, 2, rng.randint(-1, 1)))
        red = reducer.reduce(t)
        assert fock_pairing(setup, t) == fock_pairing(setup, red.normal_form)


def test_certificate_json(reducer):
    red = reducer.reduce(TensorElem.basis((0, 1, 0, 0)))
    doc = red.certificate.to_json(reducer.setup)
    assert {r["kind"] for r in doc["relations"]} <= {"A", "B", "C", "D"}
