from fractions import Fraction as F

import pytest

from voa_deq import errors
from voa_deq.arith.linalg import nullspace
from voa_deq.models.heisenberg import build_fock, build_heisenberg, partition_count, partitions
from voa_deq.models.oracles import gram_kappa
from voa_deq.models.registry import (FAMILIES, ModelSpec, build_models, module_to_json, modules_from_json,
                                     parse_spec)
from voa_deq.models.virasoro import VermaAlgebra, build_virasoro, build_virasoro_voa, singular_vector_level2
from voa_deq.voa.axioms import check_axioms
from voa_deq.voa.cofinite import c1_quotient, c2_quotient, replay_decomposition
from voa_deq.voa.module import TRUNCATED, adjoint_mode, apply_mode, contragredient


@pytest.fixture(scope="module")
def heis():
    return build_heisenberg(6)


def test_partitions_oracle():
    assert [partition_count(n) for n in range(8)] == [1, 1, 2, 3, 5, 7, 11, 15]
    assert sorted(partitions(4)) == sorted([(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)])


def test_fock_dimensions_are_partition_counts(heis):
    m = build_fock(F(1), F(1, 2) + 6, voa=heis)
    assert m.min_weight == F(1, 2)
    dims = [len(m.space.basis_of_weight(F(1, 2) + n)) for n in range(7)]
    assert dims == [partition_count(n) for n in range(7)]


def test_ising_character():
    m = build_virasoro(F(1, 2), F(1, 16), F(1, 16) + 6, simple=True)
    dims = [d for _, d in sorted(m.space.graded_dims().items())]
    # q^(-1/48) chi_(1/16) = q^(1/16) (1 + q + q^2 + 2q^3 + 2q^4 + 3q^5 + 4q^6 + ...)
    assert dims == [1, 1, 1, 2, 2, 3, 4]


def test_simple_vacuum_character():
    v = build_virasoro_voa(F(1, 2), 8, simple=True)
    dims = [d for _, d in sorted(v.space.graded_dims().items())]
    # chi_0 = 1 + q^2 + q^3 + 2q^4 + 2q^5 + 3q^6 + 3q^7 + 5q^8
    assert dims == [1, 1, 1, 2, 2, 3, 3, 5]


def test_level2_singular_vector_matches_gram_radical():
    for c, h in [(F(1, 2), F(1, 16)), (F(1, 2), F(1, 2)), (F(-2), F(-1, 8))]:
        alg = VermaAlgebra(c, h)
        gram = alg.gram(2)
        mons = alg.monomials(2)
        ns = nullspace(gram, len(mons))
        formula = singular_vector_level2(c, h)
        # the formula vector is singular only on the Kac curve; there it spans the radical
        if ns:
            assert len(ns) == 1
            vec = dict(zip(mons, ns[0]))
            scale = vec[(2,)]
            assert {k: v / scale for k, v in vec.items() if v} == formula
    assert gram_kappa(F(1, 2), F(1, 16)) == F(4, 3)


def test_generic_verma_has_no_level2_radical():
    alg = VermaAlgebra(F(1, 3), F(2, 7))
    assert nullspace(alg.gram(2), 2) == []


@pytest.mark.parametrize("build", [
    lambda: build_heisenberg(5),
    lambda: build_fock(F(-3, 2), F(9, 8) + 5),
    lambda: build_virasoro(F(1, 3), F(1, 2), F(1, 2) + 5),
    lambda: build_virasoro(F(1, 2), F(1, 16), F(1, 16) + 5, simple=True),
    lambda: build_virasoro_voa(F(1, 2), 6, simple=True),
])
def test_axioms_hold(build):
    rep = check_axioms(build(), samples=40, seed=1)
    assert rep.ok, rep.violations
    assert rep.checks > 0


def test_adjoint_values_on_module_and_dual(heis):
    m = build_fock(F(3), F(9, 2) + 4, voa=heis)
    a = heis.space.index[(1,)]
    assert m.adjoint(a, 0, 0) == {0: F(-3)}
    assert contragredient(m).adjoint(a, 0, 0) == {0: F(3)}
    assert contragredient(contragredient(m)) is m


@pytest.mark.parametrize("build", [
    lambda v: build_fock(F(1), F(1, 2) + 5, voa=v),
    lambda v: build_virasoro(F(1, 2), F(1, 16), F(1, 16) + 5, simple=True),
])
def test_adjoint_duality(build):
    """<u_n e_i', e_j> = <e_i', u*_n e_j> in the dual bases."""
    m = build(build_heisenberg(5))
    dual = contragredient(m)
    V = m.voa
    checked = 0
    for u in range(1, V.dim):
        if V.weight(u) > 3:
            continue
        for n in range(-3, 4):
            for i in range(m.dim):
                left = apply_mode(dual, u, n, i)
                if left is TRUNCATED or m.weight(i) > m.min_weight + 2:
                    continue
                for j in range(m.dim):
                    right = adjoint_mode(m, u, n, j)
                    if right is TRUNCATED:
                        continue
                    assert left.get(j, 0) == right.get(i, 0)
                    checked += 1
    assert checked > 100


def test_truncation_is_flagged(heis):
    m = build_fock(F(0), 2, voa=heis)
    a = heis.space.index[(1,)]
    top = m.space.basis_of_weight(2)[0]
    assert apply_mode(m, a, -1, top) is TRUNCATED


def test_c1_quotients():
    heis = build_heisenberg(6)
    assert c1_quotient(build_fock(F(1), F(1, 2) + 6, voa=heis)).dimension == 1
    assert c1_quotient(heis).dimension == 1
    ising = build_virasoro(F(1, 2), F(1, 16), F(1, 16) + 6, simple=True)
    q = c1_quotient(ising)
    assert q.dimension == 2
    for b in range(ising.dim):
        assert replay_decomposition(q, b) == {b: F(1)}


def test_c2_quotients():
    # M(1) is not C2-cofinite: every a_{-1}^k 1 survives, one class per weight 0..6
    assert c2_quotient(build_heisenberg(6)) == 7
    # the Ising vertex algebra has C2 quotient C[x]/(x^3)
    assert c2_quotient(build_virasoro_voa(F(1, 2), 8, simple=True)) == 3


class TestRegistry:
    def test_families(self):
        assert FAMILIES == ("heisenberg", "fock", "virasoro-verma", "virasoro-minimal")

    def test_parse_spec(self):
        s = parse_spec("fock:lambda=1/2,cutoff=6")
        assert s == ModelSpec("fock", {"lambda": F(1, 2)}, F(6))
        assert s.lowest_weight == F(1, 8)
        assert s.at_level(2).cutoff == F(1, 8) + 5

    @pytest.mark.parametrize("text", ["fock", "fock:lambda=x", "virasoro-minimal:c=1,h=0", "nope:a=1",
                                      "fock:lambda"])
    def test_bad_specs(self, text):
        with pytest.raises(errors.InputError):
            parse_spec(text)

    def test_mixed_vertex_algebras_rejected(self):
        with pytest.raises(errors.InputError):
            build_models([parse_spec("fock:lambda=1,cutoff=3"), parse_spec("virasoro-verma:c=1,h=0,cutoff=3")])

    @pytest.mark.parametrize("text", ["heisenberg:cutoff=4", "fock:lambda=-2,cutoff=5",
                                      "virasoro-verma:c=1/3,h=2/5,cutoff=3",
                                      "virasoro-minimal:c=1/2,h=1/2,cutoff=4"])
    def test_json_round_trip(self, text):
        m = build_models([parse_spec(text)])[0]
        doc = module_to_json(m)
        again = modules_from_json([doc])[0]
        assert module_to_json(again) == doc

    def test_tampered_json_rejected(self):
        doc = module_to_json(build_models([parse_spec("fock:lambda=1,cutoff=4")])[0])
        doc["graded_dimensions"][1][1] = 5
        with pytest.raises(errors.InputError):
            modules_from_json([doc])
