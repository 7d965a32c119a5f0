import csv
from fractions import Fraction as F

import pytest

from voa_deq.arith.series import Series1
from voa_deq.deq.derive import Deriver
from voa_deq.frobenius.report import extension_report, match_oracle
from voa_deq.frobenius.solver import FrobeniusSolution
from voa_deq.models.oracles import fock_local_series, ising_correlator_series

from conftest import fock_deriver, ising_setup, validate


@pytest.fixture(scope="module")
def ising_report():
    system = Deriver(ising_setup(4)).derive_system((0, 0, 0, 0))
    return extension_report(system, order=12, oracle=ising_correlator_series(20), eval_points=["1/4"])


@pytest.fixture(scope="module")
def fock_report():
    system = fock_deriver((1, 1, 1), 4).derive_system((0, 0, 0, 0), locus="z1=z2")
    oracle = fock_local_series((3, 1, 1, 1), [(), (), (), ()], "z3=0", 20)
    return extension_report(system, order=12, oracle=[oracle])


def test_ising_exponents_and_bound(ising_report):
    rep = ising_report
    assert sorted(rep.s) == [F(-1, 8), F(3, 8)]
    assert rep.log_free and all(rep.residual_zero)
    assert rep.weight_sum == F(1, 8)
    assert rep.N == -1 and rep.bound_holds()
    assert rep.delta - rep.s[0] == rep.r[0]


def test_ising_oracle_combination(ising_report):
    assert ising_report.oracle.matched
    assert ising_report.oracle.coefficients == [F(1, 2), F(1)]


def test_ising_evaluation_is_finite(ising_report):
    ev = ising_report.evaluations["1/4"]
    assert len(ev) == 2 and all(abs(float(e.value)) < 10 for e in ev)


def test_fock_single_exponent(fock_report):
    rep = fock_report
    assert rep.s == [F(1)] and rep.log_free
    assert rep.oracle.matched and rep.oracle.coefficients[0] != 0
    assert rep.N < min(rep.bound_values)


def test_mismatched_oracle_is_reported():
    basis = [FrobeniusSolution(F(0), [[F(1), F(1), F(1), F(1)]])]
    res = match_oracle(basis, [Series1([1, 2, 3, 4])], 3)
    assert not res.matched and res.checked_terms == 4


def test_outputs_and_schema(ising_report, tmp_path):
    doc = ising_report.to_json()
    validate(doc, "extension-report")
    assert doc["log_free"] is True
    ising_report.write_csv(tmp_path / "r.csv")
    rows = list(csv.DictReader(open(tmp_path / "r.csv")))
    assert {"solution", "exponent", "n", "log_power", "coefficient", "coefficient_float"} <= set(rows[0])
    assert F(rows[0]["coefficient"]) == 1
    ising_report.plot(tmp_path / "r.png")
    assert (tmp_path / "r.png").read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
