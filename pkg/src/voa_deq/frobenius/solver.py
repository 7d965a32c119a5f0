"""Regular singular points: local Euler form, indicial data and Frobenius bases.

A monic equation ``sum_k a_k d^k phi / dz^k = 0`` at a regular point
``t = 0`` is rewritten as ``sum_k c_k(t) t^k d^k f / dt^k = 0`` with
``c_k = a_k t^{m-k}`` analytic.  With ``theta = t d/dt`` this is
``sum_j t^j Q_j(theta) f = 0`` where ``Q_j(s) = sum_k [t^j]c_k * s(s-1)...(s-k+1)``.
Solutions are sought as ``t^r sum_n t^n sum_l g_{n,l} log^l(t) / l!``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import sympy

from ..arith.laurent import as_rational
from ..arith.linalg import nullspace, rref
from ..arith.ring import RingElem
from ..arith.series import Series1, local_series
from ..deq.system import ODEPart, canonical_locus
from .. import errors

LOCAL_LOCI = ("z3=0", "z1=z2", "z1=0")


# -- polynomials in s with Fraction coefficients (index = power) -------------------

def _poly_mul(a: List[Fraction], b: List[Fraction]) -> List[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def falling(k: int) -> List[Fraction]:
    """Coefficients of ``s (s-1) ... (s-k+1)``."""
    p = [Fraction(1)]
    for i in range(k):
        p = _poly_mul(p, [Fraction(-i), Fraction(1)])
    return p


def poly_eval(p: Sequence[Fraction], s) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * s + c
    return acc


def taylor(p: Sequence[Fraction], s) -> List[Fraction]:
    """``[Q(s), Q'(s), Q''(s)/2!, ...]``."""
    c = list(p)
    out = []
    while c:
        # synthetic division by (x - s)
        acc = Fraction(0)
        quot = []
        for coef in reversed(c):
            acc = acc * s + coef
            quot.append(acc)
        out.append(quot[-1])
        c = list(reversed(quot[:-1]))
    return out


# -- local equation -----------------------------------------------------------------

@dataclass
class LocalEquation:
    """``sum_k c_k(t) t^k d^k f/dt^k = 0`` with ``c_m = 1``; ``c[k]`` truncated series."""

    locus: str
    c: List[Series1]

    @property
    def order(self) -> int:
        return len(self.c) - 1

    @property
    def length(self) -> int:
        return min(s.length for s in self.c)

    def q(self, j: int) -> List[Fraction]:
        """``Q_j`` as a coefficient list in ``s``."""
        out = [Fraction(0)]
        for k, ck in enumerate(self.c):
            x = ck[j]
            if x:
                fk = falling(k)
                out = out + [Fraction(0)] * (len(fk) - len(out))
                for i, v in enumerate(fk):
                    out[i] += x * v
        while len(out) > 1 and not out[-1]:
            out.pop()
        return out


def local_equation(part: ODEPart, locus: str, length: int) -> LocalEquation:
    locus = canonical_locus(locus)
    if locus not in LOCAL_LOCI:
        raise ValueError(f"no local coordinate for locus {locus!r}; supported: {', '.join(LOCAL_LOCI)}")
    if part.variable != 1:
        raise ValueError("local analysis is implemented for equations in z1")
    m = part.order
    cs = []
    for k in range(m + 1):
        a = part.coeffs[k]
        if a.is_zero():
            cs.append(Series1([0] * length))
            continue
        s = local_series(a, locus, length + 2 * m).shift(m - k)
        if s.offset < 0 and any(s.coeffs[: int(-s.offset)]):
            raise errors.DerivationError(f"coefficient c_{k} has a pole at {locus}")
        # normalise to offset 0
        off = int(s.offset)
        coeffs = ([Fraction(0)] * off + s.coeffs) if off >= 0 else s.coeffs[-off:]
        cs.append(Series1(coeffs[:length] + [Fraction(0)] * max(0, length - len(coeffs))))
    return LocalEquation(locus, cs)


# -- indicial data --------------------------------------------------------------------

@dataclass
class IndicialData:
    locus: str
    coefficients: List[Fraction]
    roots: List[Fraction]
    multiplicities: Dict[Fraction, int]
    irrational: List[Tuple[Fraction, Fraction]] = field(default_factory=list)
    resonances: List[Tuple[Fraction, Fraction]] = field(default_factory=list)
    nonreal: int = 0

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def to_json(self) -> dict:
        from ..io import q_to_json
        return {
            "locus": self.locus,
            "polynomial": [q_to_json(c) for c in self.coefficients],
            "roots": [{"root": q_to_json(r), "multiplicity": self.multiplicities[r]} for r in self.roots],
            "irrational_root_intervals": [[q_to_json(a), q_to_json(b)] for a, b in self.irrational],
            "nonreal_roots": self.nonreal,
            "resonances": [[q_to_json(a), q_to_json(b)] for a, b in self.resonances],
        }


def indicial(eq: LocalEquation) -> IndicialData:
    q0 = eq.q(0)
    s = sympy.Symbol("s")
    poly = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(q0)], s, domain="QQ")
    mult: Dict[Fraction, int] = {}
    irrational: List[Tuple[Fraction, Fraction]] = []
    nonreal = 0
    for factor, e in poly.factor_list()[1]:
        if factor.degree() == 1:
            a, b = factor.all_coeffs()
            r = -sympy.Rational(b) / sympy.Rational(a)
            mult[Fraction(int(r.p), int(r.q))] = mult.get(Fraction(int(r.p), int(r.q)), 0) + e
        else:
            real = factor.intervals(eps=sympy.Rational(1, 10 ** 12))
            for (lo, hi), _m in real:
                for _ in range(e):
                    irrational.append((Fraction(int(lo.p), int(lo.q)), Fraction(int(hi.p), int(hi.q))))
            nonreal += e * (factor.degree() - len(real))
    roots = sorted(mult)
    res = [(a, b) for a in roots for b in roots if b > a and (b - a).denominator == 1]
    return IndicialData(eq.locus, list(q0), roots, mult, irrational, res, nonreal)


# -- Frobenius solutions -----------------------------------------------------------------

@dataclass
class FrobeniusSolution:
    """``t^exponent sum_n sum_l coeffs[l][n] t^n log^l(t)`` (plain ``log^l``)."""

    exponent: Fraction
    coeffs: List[List[Fraction]]

    @property
    def order(self) -> int:
        return len(self.coeffs[0]) - 1

    @property
    def has_log(self) -> bool:
        return any(any(row) for row in self.coeffs[1:])

    def series(self, log_power: int = 0) -> Series1:
        return Series1(self.coeffs[log_power], self.exponent)

    def to_json(self) -> dict:
        from ..io import q_to_json
        return {
            "exponent": q_to_json(self.exponent),
            "log": self.has_log,
            "coefficients": [[q_to_json(c) for c in row] for row in self.coeffs],
        }


def _class_basis(eq: LocalEquation, r0: Fraction, mu: int, order: int,
                 qs: List[List[Fraction]]) -> List[FrobeniusSolution]:
    """All solutions ``t^{r0} sum_n t^n sum_{l < mu} g_{n,l} log^l/l!`` to ``order``."""
    P = mu
    g: List[List[List[Fraction]]] = []  # g[n][l] = vector over parameters
    constraints: List[List[Fraction]] = []
    introduced = 0
    zero = lambda: [Fraction(0)] * P
    for n in range(order + 1):
        rhs = [zero() for _ in range(mu)]
        for j in range(1, n + 1):
            if j >= len(qs):
                break
            qj = qs[j]
            if len(qj) == 1 and not qj[0]:
                continue
            tj = taylor(qj, r0 + n - j)
            prev = g[n - j]
            for l in range(mu):
                for i, ti in enumerate(tj):
                    if not ti or l + i >= mu:
                        continue
                    vec = prev[l + i]
                    for p in range(P):
                        if vec[p]:
                            rhs[l][p] -= ti * vec[p]
        t0 = taylor(qs[0], r0 + n)
        nu = next((i for i, x in enumerate(t0) if x), len(t0))
        if nu >= len(t0):
            raise errors.DerivationError("indicial polynomial vanishes identically")
        gn = [zero() for _ in range(mu)]
        for l in range(nu):
            if l < mu:
                if introduced >= P:
                    raise errors.DerivationError("more free parameters than the root multiplicity")
                gn[l][introduced] = Fraction(1)
                introduced += 1
        for l in range(mu - 1 - nu, -1, -1):
            acc = list(rhs[l])
            for i in range(nu + 1, len(t0)):
                if l + i < mu and t0[i]:
                    for p in range(P):
                        acc[p] -= t0[i] * gn[l + i][p]
            gn[l + nu] = [x / t0[nu] for x in acc]
        for l in range(max(mu - nu, 0), mu):
            if any(rhs[l]):
                constraints.append(rhs[l])
        g.append(gn)
    if introduced != P:
        raise errors.DerivationError(f"expected {P} parameters at root class {r0}, found {introduced}")
    if constraints:
        basis = nullspace(constraints, P)
    else:
        basis = [[Fraction(int(i == p)) for i in range(P)] for p in range(P)]
    # prefer solutions led by the largest exponents: eliminate on reversed parameter order
    rows = [list(reversed(b)) for b in basis]
    red, _ = rref(rows, P)
    basis = [list(reversed(r)) for r in red if any(r)]
    out = []
    for b in basis:
        coeffs = [[Fraction(0)] * (order + 1) for _ in range(mu)]
        for n in range(order + 1):
            for l in range(mu):
                v = sum((x * y for x, y in zip(g[n][l], b)), Fraction(0))
                coeffs[l][n] = v / math.factorial(l)
        first = next((n for n in range(order + 1) if any(coeffs[l][n] for l in range(mu))), None)
        if first is None:
            continue
        lead = coeffs[0][first] if coeffs[0][first] else next(coeffs[l][first] for l in range(mu) if coeffs[l][first])
        shifted = [[c / lead for c in row[first:]] + [Fraction(0)] * first for row in coeffs]
        while len(shifted) > 1 and not any(shifted[-1]):
            shifted.pop()
        out.append(FrobeniusSolution(r0 + first, [row[: order + 1 - first] for row in shifted]))
    return out


def frobenius_basis(eq: LocalEquation, order: int, ind: Optional[IndicialData] = None
                    ) -> List[FrobeniusSolution]:
    """Basis of Frobenius solutions through ``t^{exponent + order}``, largest exponent first."""
    if order < 0:
        raise ValueError("order must be non-negative")
    ind = ind or indicial(eq)
    if ind.irrational or ind.nonreal:
        raise errors.DerivationError("irrational indicial roots: exact Frobenius series unavailable")
    classes: Dict[Fraction, List[Fraction]] = {}
    for r in ind.roots:
        key = r - math.floor(r)
        classes.setdefault(key, []).append(r)
    span = int(max((max(rs) - min(rs) for rs in classes.values()), default=0))
    need = order + span + 1
    if eq.length < need:
        raise ValueError(f"local equation known to {eq.length} terms; need {need}")
    qs = [eq.q(j) for j in range(need)]
    sols: List[FrobeniusSolution] = []
    for key in sorted(classes):
        rs = classes[key]
        r0 = min(rs)
        mu = sum(ind.multiplicities[r] for r in rs)
        full = _class_basis(eq, r0, mu, order + int(max(rs) - r0), qs)
        for s in full:
            s.coeffs = [row[: order + 1] for row in s.coeffs]
            sols.append(s)
    sols.sort(key=lambda s: (-s.exponent, s.has_log))
    return sols


def frobenius_series(eq: LocalEquation, root, order: int) -> FrobeniusSolution:
    root = as_rational(root)
    for s in frobenius_basis(eq, order):
        if s.exponent == root:
            return s
    raise ValueError(f"{root} is not the leading exponent of a Frobenius solution")


def residual(eq: LocalEquation, sol: FrobeniusSolution) -> List[List[Fraction]]:
    """``sum_k c_k t^k f^{(k)}`` by direct differentiation, as ``[log power][n]``.

    Computed through ``t^{exponent + order}``; all entries vanish for a solution.
    """
    n_terms = sol.order + 1
    nl = len(sol.coeffs)
    # f^{(k)} in the same basis t^{s+n-k} log^l
    cur = [list(row) for row in sol.coeffs]
    out = [[Fraction(0)] * n_terms for _ in range(nl)]
    for k in range(eq.order + 1):
        # add c_k * t^k f^{(k)}; t^k f^{(k)} has exponents s + n
        ck = eq.c[k]
        for l in range(nl):
            for n in range(n_terms):
                v = cur[l][n]
                if not v:
                    continue
                for j in range(n_terms - n):
                    if ck[j]:
                        out[l][n + j] += ck[j] * v
        # differentiate and multiply by t: theta-free form d/dt(t^a log^l) * t = a t^a log^l + l t^a log^{l-1}
        # t^{k+1} f^{(k+1)} = t * d/dt (t^k f^{(k)}) - k t^k f^{(k)}
        nxt = [[Fraction(0)] * n_terms for _ in range(nl)]
        for l in range(nl):
            for n in range(n_terms):
                v = cur[l][n]
                if not v:
                    continue
                a = sol.exponent + n
                nxt[l][n] += (a - k) * v
                if l:
                    nxt[l - 1][n] += l * v
        cur = nxt
    return out


def residual_is_zero(eq: LocalEquation, sol: FrobeniusSolution) -> bool:
    return all(not x for row in residual(eq, sol) for x in row)


# -- numerics -----------------------------------------------------------------------

@dataclass
class Evaluation:
    value: float
    exact: Optional[Fraction]
    tail_bound: float
    note: str = "heuristic geometric tail bound from the last quarter of coefficients"


def eval_solution(sol: FrobeniusSolution, z) -> Evaluation:
    z = as_rational(z)
    if abs(z) >= 1:
        raise ValueError("evaluation needs |z3| < 1")
    if z <= 0 and (sol.exponent.denominator != 1 or sol.has_log):
        raise ValueError("non-integral exponents and logs are evaluated on 0 < z3 < 1")
    parts = []
    for l, row in enumerate(sol.coeffs):
        acc = Fraction(0)
        for c in reversed(row):
            acc = acc * z + c
        parts.append(acc)
    exact = None
    if not sol.has_log and sol.exponent.denominator == 1:
        exact = parts[0] * z ** int(sol.exponent)
        value = float(exact)
    else:
        lg = math.log(float(z))
        value = float(z) ** float(sol.exponent) * sum(float(p) * lg ** l for l, p in enumerate(parts))
    n = sol.order
    az = abs(float(z))
    start = max(1, (3 * (n + 1)) // 4)
    rho = 0.0
    big = 0.0
    for row in sol.coeffs:
        for k in range(start, n + 1):
            c = abs(float(row[k]))
            if c:
                rho = max(rho, c ** (1.0 / k))
    if rho == 0.0:
        return Evaluation(value, exact, 0.0)
    for row in sol.coeffs:
        for k in range(start, n + 1):
            c = abs(float(row[k]))
            if c:
                big = max(big, c / rho ** k)
    q = rho * az
    if q >= 1:
        return Evaluation(value, exact, math.inf)
    scale = az ** float(sol.exponent) if az else 1.0
    logs = sum(abs(math.log(az)) ** l for l in range(len(sol.coeffs))) if az else 1.0
    tail = big * q ** (n + 1) / (1 - q) * scale * logs
    return Evaluation(value, exact, tail)
