import math
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from voa_deq import errors
from voa_deq.arith.series import Series1
from voa_deq.deq.derive import Deriver
from voa_deq.frobenius.solver import (FrobeniusSolution, LocalEquation, eval_solution, frobenius_basis,
                                      indicial, local_equation, residual_is_zero)
from voa_deq.models.oracles import bpz_operator, ising_blocks

from conftest import ising_setup

N = 24


def const(c, n=N):
    return Series1([c] + [0] * (n - 1))


def euler(a, b):
    """t^2 f'' + a t f' + b f = 0."""
    return LocalEquation("z1=0", [const(b), const(a), const(1)])


def gauss(a, b, c, n=N):
    """Hypergeometric equation in the c_k = a_k t^(m-k) form."""
    geo = [F(1)] * n
    c1 = [c * geo[0]] + [c - (a + b + 1) for _ in range(n - 1)]
    c0 = [F(0)] + [-a * b] * (n - 1)
    return LocalEquation("z1=0", [Series1(c0), Series1(c1), const(1, n)])


def hyper_coeffs(a, b, c, n):
    out, term = [], F(1)
    for k in range(n):
        out.append(term)
        term = term * (a + k) * (b + k) / ((c + k) * (k + 1))
    return out


def test_euler_exponents():
    # s(s-1) + 4s + 2 = (s+1)(s+2)
    eq = euler(4, 2)
    ind = indicial(eq)
    assert ind.roots == [F(-2), F(-1)]
    basis = frobenius_basis(eq, 6)
    assert sorted(b.exponent for b in basis) == [-2, -1]
    for b in basis:
        assert b.coeffs == [[1, 0, 0, 0, 0, 0, 0]]


def test_double_root_has_log():
    eq = euler(1, 0)  # t f'' + f' = 0: solutions 1 and log t
    basis = frobenius_basis(eq, 5)
    assert [b.has_log for b in basis] == [False, True] or [b.has_log for b in basis] == [True, False]
    logsol = next(b for b in basis if b.has_log)
    assert logsol.coeffs[1][0] != 0 and all(residual_is_zero(eq, b) for b in basis)


@pytest.mark.parametrize("a,b,c", [(F(1, 2), F(1, 3), F(1, 4)), (F(-1, 3), F(2), F(2, 5)), (1, 1, F(3, 2))])
def test_gauss_hypergeometric(a, b, c):
    a, b, c = F(a), F(b), F(c)
    eq = gauss(a, b, c)
    basis = {sol.exponent: sol for sol in frobenius_basis(eq, 12)}
    assert set(basis) == {F(0), 1 - c}
    assert basis[F(0)].coeffs[0] == hyper_coeffs(a, b, c, 13)
    assert basis[1 - c].coeffs[0] == hyper_coeffs(a - c + 1, b - c + 1, 2 - c, 13)
    assert not any(s.has_log for s in basis.values())


def test_bessel_half_matches_sine_and_cosine():
    # t^2 f'' + t f' + (t^2 - 1/4) f = 0: t^(-1/2) cos t, t^(-1/2) sin t
    eq = LocalEquation("z1=0", [Series1([F(-1, 4), 0, 1] + [0] * (N - 3)), const(1), const(1)])
    basis = {b.exponent: b for b in frobenius_basis(eq, 10)}
    cos = [F((-1) ** (k // 2), math.factorial(k)) if k % 2 == 0 else F(0) for k in range(11)]
    sin_over_t = [F((-1) ** (k // 2), math.factorial(k + 1)) if k % 2 == 0 else F(0) for k in range(11)]
    assert basis[F(-1, 2)].coeffs[0] == cos
    assert basis[F(1, 2)].coeffs[0] == sin_over_t
    ev = eval_solution(basis[F(1, 2)], F(1, 2))
    assert ev.value == pytest.approx(math.sin(0.5) / math.sqrt(0.5), rel=1e-9)


def test_resonant_bessel_needs_log():
    eq = LocalEquation("z1=0", [Series1([-1, 0, 1] + [0] * (N - 3)), const(1), const(1)])
    basis = frobenius_basis(eq, 8)
    assert {b.exponent for b in basis} == {F(-1), F(1)}
    assert any(b.has_log for b in basis)
    assert all(residual_is_zero(eq, b) for b in basis)


def test_irrational_roots_reported_not_solved():
    eq = euler(1, -2)  # s^2 = 2
    ind = indicial(eq)
    assert ind.roots == [] and len(ind.irrational) == 2
    lo, hi = ind.irrational[1]
    assert 0 < lo and lo * lo < 2 < hi * hi and hi - lo < F(1, 10 ** 9)
    with pytest.raises(errors.DerivationError):
        frobenius_basis(eq, 4)
    assert indicial(euler(1, 1)).nonreal == 2


def test_residual_detects_a_corrupted_solution():
    eq = euler(4, 2)
    sol = frobenius_basis(eq, 6)[0]
    bad = FrobeniusSolution(sol.exponent, [[c + (F(1) if n == 3 else 0) for n, c in enumerate(sol.coeffs[0])]])
    assert not residual_is_zero(eq, bad)


def test_exact_evaluation_for_integral_exponent():
    eq = gauss(F(1), F(1), F(2))  # -log(1-t)/t
    sol = next(b for b in frobenius_basis(eq, 20) if b.exponent == 0)
    ev = eval_solution(sol, F(1, 10))
    assert ev.exact is not None
    assert ev.value == pytest.approx(-math.log(0.9) / 0.1, rel=1e-12)
    assert ev.exact == sum(F(1, 10) ** n / (n + 1) for n in range(21))
    with pytest.raises(ValueError):
        eval_solution(sol, F(3, 2))


@given(st.fractions(min_value=-3, max_value=3, max_denominator=5),
       st.fractions(min_value=-3, max_value=3, max_denominator=5))
@settings(max_examples=30, deadline=None)
def test_basis_size_equals_order_for_rational_roots(r1, r2):
    # indicial polynomial (s - r1)(s - r2)
    eq = euler(1 - r1 - r2, r1 * r2)
    basis = frobenius_basis(eq, 6)
    assert len(basis) == 2
    assert all(residual_is_zero(eq, b) for b in basis)
    # Euler equations produce a log only for a double root
    assert any(b.has_log for b in basis) == (r1 == r2)


def test_ising_local_basis_matches_closed_form_blocks():
    part = Deriver(ising_setup(4)).derive(1, (0, 0, 0, 0))[0]
    eq = local_equation(part, "z3=0", 30)
    basis = {b.exponent: b for b in frobenius_basis(eq, 20)}
    blocks = {b.offset: b for b in ising_blocks(20)}
    assert set(basis) == set(blocks) == {F(-1, 8), F(3, 8)}
    for s, blk in blocks.items():
        assert basis[s].coeffs == [blk.coeffs]
    bpz = local_equation(bpz_operator(F(1, 2), F(1, 16), F(1, 16), F(1, 16), F(1, 16)), "z3=0", 30)
    assert [b.coeffs for b in frobenius_basis(bpz, 20)] == [b.coeffs for b in frobenius_basis(eq, 20)]


def test_local_equation_rejects_unknown_locus():
    part = Deriver(ising_setup(4)).derive(1, (0, 0, 0, 0))[0]
    with pytest.raises(ValueError):
        local_equation(part, "z2=inf", 5)
