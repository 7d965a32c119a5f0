"""Independent closed-form correlators used to validate derived equations.

* Free boson: Wick contractions of Heisenberg modes and vertex currents give
  every correlator of Fock-module basis vectors as an element of R times the
  prefactor ``prod_{i<j} (z_i - z_j)^{l_i l_j} prod_i z_i^{l_i l_{p+1}}``.
* Ising: closed-form conformal blocks of four spin fields and the BPZ
  second-order operator from the level-2 singular vector.
"""

from __future__ import annotations

import math
from collections import Counter
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from ..arith.laurent import LaurentPoly, as_rational
from ..arith.ring import RingElem
from ..arith.series import Series1, binomial

ZERO = "zero"


def oracle_fock_correlator(l0, l1, l2, l3):
    """Exponents ``(p1, p2, p12)`` of the lowest-weight four-point function, or ``"zero"``."""
    l0, l1, l2, l3 = (as_rational(x) for x in (l0, l1, l2, l3))
    if l0 != l1 + l2 + l3:
        return ZERO
    return (l1 * l3, l2 * l3, l1 * l2)


def oracle_fock_p_point(lams: Sequence) -> Dict[Tuple[int, int], Fraction] | str:
    """Exponents of the lowest-weight ``(p+2)``-point function.

    ``lams = (l_0, l_1, ..., l_{p+1})``; returns ``{(i, j): l_i l_j}`` for the
    factors ``(z_i - z_j)`` (``1 <= i < j <= p``) and ``{(i, 0): l_i l_{p+1}}``
    for the factors ``z_i``.
    """
    lams = [as_rational(x) for x in lams]
    p = len(lams) - 2
    if lams[0] != sum(lams[1:]):
        return ZERO
    out: Dict[Tuple[int, int], Fraction] = {}
    for i in range(1, p + 1):
        for j in range(i + 1, p + 1):
            out[(i, j)] = lams[i] * lams[j]
        out[(i, 0)] = lams[i] * lams[p + 1]
    return out


def dual_norm(part: Sequence[int]) -> int:
    """``<lam| a_P a_{-P} |lam>`` = product of parts times product of multiplicity factorials."""
    out = 1
    for n in part:
        out *= n
    for mult in Counter(part).values():
        out *= math.factorial(mult)
    return out


# -- Wick contractions --------------------------------------------------------

# an operator is (kind, data): ("bra", m) for a_m with m > 0 on the left,
# ("ket", n) for a_{-n} on the right, ("cur", (i, p)) for the order-p current at z_i


def _unpaired(op, lams, nv) -> RingElem:
    kind, d = op
    p = len(lams) - 2
    if kind == "bra":
        acc = RingElem.zero(nv)
        for i in range(1, p + 1):
            acc = acc + RingElem.var(i - 1, nv, d) * lams[i]
        return acc
    if kind == "ket":
        acc = RingElem.zero(nv)
        for i in range(1, p + 1):
            acc = acc + RingElem.var(i - 1, nv, -d) * (-lams[i])
        return acc
    i, order = d
    sign = -1 if (order - 1) % 2 else 1
    acc = RingElem.zero(nv)
    for j in range(1, p + 2):
        if j == i:
            continue
        if j == p + 1:
            acc = acc + RingElem.var(i - 1, nv, -order) * (sign * lams[j])
        else:
            acc = acc + RingElem.diff_power(i - 1, j - 1, -order, nv, sign * lams[j])
    return acc


def _pair(a, b, nv) -> Optional[RingElem]:
    ka, da = a
    kb, db = b
    if ka == kb and ka in ("bra", "ket"):
        return None
    if ka == "ket" and kb == "bra" or ka == "cur" and kb == "bra" or ka == "ket" and kb == "cur":
        a, b = b, a
        ka, da, kb, db = kb, db, ka, da
    if ka == "bra" and kb == "ket":
        return RingElem.const(da, nv) if da == db else None
    if ka == "bra" and kb == "cur":
        m = da
        i, order = db
        c = m * math.comb(m - 1, order - 1) if m >= order else 0
        return RingElem.var(i - 1, nv, m - order) * c if c else None
    if ka == "cur" and kb == "ket":
        n = db
        i, order = da
        c = n * binomial(-n - 1, order - 1)
        return RingElem.var(i - 1, nv, -n - order) * c
    # two currents
    (i, pa), (j, pb) = da, db
    if i == j:
        return None
    if i > j:
        i, j, pa, pb = j, i, pb, pa
    sign = -1 if (pa - 1) % 2 else 1
    c = Fraction(sign * math.factorial(pa + pb - 1), math.factorial(pa - 1) * math.factorial(pb - 1))
    return RingElem.diff_power(i - 1, j - 1, -pa - pb, nv, c)


def _wick(ops: List, lams, nv, memo) -> RingElem:
    key = tuple(ops)
    hit = memo.get(key)
    if hit is not None:
        return hit
    if not ops:
        return RingElem.one(nv)
    first, rest = ops[0], ops[1:]
    total = _unpaired(first, lams, nv) * _wick(rest, lams, nv, memo)
    for k, other in enumerate(rest):
        val = _pair(first, other, nv)
        if val is None:
            continue
        total = total + val * _wick(rest[:k] + rest[k + 1:], lams, nv, memo)
    memo[key] = total
    return total


def fock_correlator(lams: Sequence, parts: Sequence[Sequence[int]]) -> RingElem:
    """Correlator of Fock basis vectors divided by the lowest-weight prefactor.

    ``parts[0]`` labels the dual basis vector of ``M(1, l_0)`` in slot 0,
    ``parts[1..p]`` the vectors inserted at ``z_1..z_p`` and ``parts[p+1]``
    the vector at the origin; each is a partition ``(n_1, ..., n_k)`` for
    ``a_{-n_1} ... a_{-n_k} v``.  Returns zero when charge is not conserved.
    """
    lams = [as_rational(x) for x in lams]
    p = len(lams) - 2
    nv = p
    if lams[0] != sum(lams[1:]):
        return RingElem.zero(nv)
    ops: List = [("bra", m) for m in parts[0]]
    for i in range(1, p + 1):
        ops.extend(("cur", (i, n)) for n in parts[i])
    ops.extend(("ket", n) for n in parts[p + 1])
    value = _wick(ops, lams, nv, {})
    return value * Fraction(1, dual_norm(parts[0]))


def fock_prefactor_exponents(lams: Sequence) -> Dict[Tuple[int, int], Fraction]:
    res = oracle_fock_p_point(lams)
    if res == ZERO:
        raise ValueError("charge is not conserved")
    return res


# -- Ising model ---------------------------------------------------------------

ISING_C = Fraction(1, 2)
ISING_SIGMA = Fraction(1, 16)


def gram_kappa(c, h) -> Fraction:
    """``kappa`` with ``(L(-2) - kappa L(-1)^2) v`` spanning the level-2 Gram radical."""
    from ..arith.linalg import nullspace
    from .virasoro import VermaAlgebra
    alg = VermaAlgebra(c, h)
    monos = alg.monomials(2)
    kern = nullspace(alg.gram(2), len(monos))
    if len(kern) != 1:
        raise ValueError(f"level-2 Gram radical of M({c}, {h}) has dimension {len(kern)}")
    vec = dict(zip(monos, kern[0]))
    if not vec[(2,)]:
        raise ValueError("radical vector has no L(-2) component")
    return -vec[(1, 1)] / vec[(2,)]


def bpz_operator(c, h_moving, h_other, h_origin, h_out):
    """Second-order operator in ``z1`` from the level-2 singular vector at ``z1``.

    Fields sit at ``z1``, ``z2``, ``0`` and the out state at infinity.  The
    ``L(-2)`` insertion gives
    ``sum_j [h_j / (z_j - z1)^2 - (z_j - z1)^{-1} d_j]``; translation
    invariance eliminates the origin derivative and ``L(0)`` covariance
    eliminates ``d_2 = (Delta - z1 d_1) / z2``.  Returns an ``ODEPart``.
    """
    from ..deq.system import ODEPart, regularity_flags
    kappa = gram_kappa(c, h_moving)
    h2, h0 = as_rational(h_other), as_rational(h_origin)
    delta = as_rational(h_out) - as_rational(h_moving) - h2 - h0
    nv = 2
    z1inv = RingElem.var(0, nv, -1)
    d12 = RingElem.diff_power(0, 1, -1, nv)
    # L(-2) phi = A phi - B d_1 phi
    A = d12 * d12 * h2 + z1inv * z1inv * h0 + z1inv * d12 * delta
    B = d12 + z1inv
    k = Fraction(1) / kappa
    part = ODEPart(1, [A * (-k), B * k, RingElem.one(nv)])
    part.regular = regularity_flags(part)
    return part


def ising_blocks(order: int) -> List[Series1]:
    """The two spin-field blocks in ``z3 = (z1 - z2) / z2`` with ``z2 = 1``.

    With ``y = z3^{1/2}`` the blocks are
    ``y^{-1/4} (1 + y^2)^{1/8} (1 +- y (1 + y^2)^{-1/2})^{1/2}``.  Returns
    their sum and difference, normalised to leading coefficient 1, as series in ``z3`` through
    ``z3^{exponent + order}``, exponents ``-1/8`` and ``3/8``.
    """
    n = 2 * order + 3
    one_plus = Series1([1, 0, 1] + [0] * (n - 3))
    a = one_plus.power(Fraction(1, 8))
    u = one_plus.power(Fraction(-1, 2)).shift(1).truncate(n)
    u = Series1([0] + u.coeffs[: n - 1])
    plus = (Series1.one(n) + u).power(Fraction(1, 2)) * a
    minus = (Series1.one(n) - u).power(Fraction(1, 2)) * a
    even = [(x + y) / 2 for x, y in zip(plus.coeffs, minus.coeffs)]
    odd = [(x - y) / 2 for x, y in zip(plus.coeffs, minus.coeffs)]
    e, o = even[0::2][: order + 1], odd[1::2][: order + 1]
    return [Series1([x / e[0] for x in e], Fraction(-1, 8)),
            Series1([x / o[0] for x in o], Fraction(3, 8))]


def ising_correlator_series(order: int) -> List[Series1]:
    """The ``+`` block split by exponent class (constant factor dropped)."""
    e, o = ising_blocks(order)
    return [e, o.scale(Fraction(1, 2))]


def fock_local_series(lams: Sequence, parts: Sequence[Sequence[int]], locus: str, order: int
                      ) -> Series1:
    """Four-point Fock correlator at ``z2 = 1`` in the local coordinate of ``locus``.

    Up to a nonzero constant; valid for ``z3=0`` / ``z1=z2`` (``z1 = 1 + t``)
    and ``z1=0`` (``z1 = t``).  Series through ``t^{exponent + order}``.
    """
    from ..arith.series import binomial_series, local_series
    lams = [as_rational(x) for x in lams]
    l0, l1, l2, l3 = lams
    corr = fock_correlator(lams, parts)
    n = order + 1 + 2 * max(corr.dpow, 0) + 4
    if corr.is_zero():
        return Series1([0] * (order + 1))
    body = local_series(corr, locus, n)
    if locus in ("z3=0", "z1=z2"):
        pref = binomial_series(l1 * l3, n).shift(l1 * l2)
    elif locus == "z1=0":
        pref = binomial_series(l1 * l2, n, -1).shift(l1 * l3)
    else:
        raise ValueError(f"no local coordinate for locus {locus!r}")
    s = pref * body
    k = next(i for i, c in enumerate(s.coeffs) if c)
    return Series1(s.coeffs[k: k + order + 1], s.offset + k)
