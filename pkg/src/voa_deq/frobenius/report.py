"""Local solution basis at ``z3 = (z1 - z2) / z2 = 0`` and the extension data.

Each basis solution ``t^s g(t)`` at ``z2 = 1`` corresponds to the
homogeneous function ``z2^r (z1 - z2)^s g(z3)`` with ``r + s = Delta``, the
total degree of the correlator.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from ..arith.laurent import as_rational
from ..arith.linalg import rref
from ..arith.series import Series1
from ..deq.system import ODEPart, ODESystem
from ..io import q_to_json
from .solver import (Evaluation, FrobeniusSolution, IndicialData, eval_solution, frobenius_basis,
                     indicial, local_equation, residual_is_zero)

REPORT_SCHEMA = "voa-deq/extension-report/1"


@dataclass
class OracleMatch:
    """``oracle = sum coefficients[i] * basis[i]`` through ``t^{min exponent + order}``."""

    order: int
    coefficients: Optional[List[Fraction]]
    checked_terms: int

    @property
    def matched(self) -> bool:
        return self.coefficients is not None

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "matched": self.matched,
            "checked_terms": self.checked_terms,
            "coefficients": None if self.coefficients is None else [q_to_json(c) for c in self.coefficients],
        }


@dataclass
class ExtensionReport:
    locus: str
    delta: Fraction
    weight_sum: Fraction
    indicial: IndicialData
    basis: List[FrobeniusSolution]
    residual_zero: List[bool]
    log_free: bool
    N: int
    oracle: Optional[OracleMatch] = None
    evaluations: Dict[str, List[Evaluation]] = field(default_factory=dict)

    @property
    def s(self) -> List[Fraction]:
        return [b.exponent for b in self.basis]

    @property
    def r(self) -> List[Fraction]:
        return [self.delta - b.exponent for b in self.basis]

    @property
    def bound_values(self) -> List[Fraction]:
        return [self.weight_sum + s for s in self.s]

    def bound_holds(self) -> bool:
        return all(v > self.N for v in self.bound_values)

    def to_json(self) -> dict:
        evals = {}
        for z, items in sorted(self.evaluations.items()):
            evals[z] = [{
                "exact": None if e.exact is None else q_to_json(e.exact),
                "value": repr(e.value),
                "tail_bound": repr(e.tail_bound),
                "note": e.note,
            } for e in items]
        return {
            "schema": REPORT_SCHEMA,
            "locus": self.locus,
            "delta": q_to_json(self.delta),
            "indicial": self.indicial.to_json(),
            "solutions": [dict(b.to_json(), r=q_to_json(r), residual_zero=ok)
                          for b, r, ok in zip(self.basis, self.r, self.residual_zero)],
            "log_free": self.log_free,
            "N": self.N,
            "weight_sum_plus_s": [q_to_json(v) for v in self.bound_values],
            "oracle": None if self.oracle is None else self.oracle.to_json(),
            "evaluations": evals,
        }

    def text(self) -> str:
        lines = [f"locus {self.locus}: {len(self.basis)} solution(s), "
                 f"{'log-free' if self.log_free else 'log terms present'}"]
        for b, r, v in zip(self.basis, self.r, self.bound_values):
            head = ", ".join(str(c) for c in b.coeffs[0][:4])
            lines.append(f"  z2^({r}) (z1-z2)^({b.exponent}) f(z3), f = {head}, ...; "
                         f"wt w1 + wt w2 + s = {v}{'; log' if b.has_log else ''}")
        lines.append(f"  N = {self.N} (all wt w1 + wt w2 + s_i > N: {self.bound_holds()})")
        if self.oracle is not None:
            if self.oracle.matched:
                coeffs = ", ".join(str(c) for c in self.oracle.coefficients)
                lines.append(f"  oracle matched through order {self.oracle.order}: [{coeffs}]")
            else:
                lines.append(f"  oracle NOT in the span of the basis through order {self.oracle.order}")
        for z, items in sorted(self.evaluations.items()):
            for b, e in zip(self.basis, items):
                lines.append(f"  f_(s={b.exponent})(z3={z}) = {e.value:.15g} +- {e.tail_bound:.3g} (heuristic)")
        return "\n".join(lines) + "\n"

    # -- plot data -------------------------------------------------------------
    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["solution", "exponent", "n", "log_power", "coefficient", "coefficient_float"])
            for i, b in enumerate(self.basis):
                for l, row in enumerate(b.coeffs):
                    for n, c in enumerate(row):
                        w.writerow([i, str(b.exponent), n, l, str(c), repr(float(c))])

    def plot(self, path) -> None:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.6))
        for b in self.basis:
            label = f"s = {b.exponent}" + (" (log)" if b.has_log else "")
            ns = [n for n, c in enumerate(b.coeffs[0]) if c]
            ax1.semilogy(ns, [abs(float(b.coeffs[0][n])) for n in ns], "o-", ms=3, label=label)
            xs = [k / 200 for k in range(1, 180)]
            ys = [_partial(b, x) for x in xs]
            ax2.plot(xs, ys, label=label)
        ax1.set_xlabel("n")
        ax1.set_ylabel("|coefficient of z3^(s+n)|")
        ax2.set_xlabel("z3")
        ax2.set_ylabel("partial sum")
        ax1.legend(fontsize=8)
        ax2.set_ylim(*_clip_limits(ax2))
        fig.suptitle(f"Frobenius basis at {self.locus}")
        fig.tight_layout()
        fig.savefig(path, dpi=120)
        plt.close(fig)


def _partial(b: FrobeniusSolution, x: float) -> float:
    lg = math.log(x)
    total = 0.0
    for l, row in enumerate(b.coeffs):
        acc = 0.0
        for c in reversed(row):
            acc = acc * x + float(c)
        total += acc * lg ** l
    return total * x ** float(b.exponent)


def _clip_limits(ax):
    lo, hi = ax.get_ylim()
    return max(lo, -10.0), min(hi, 10.0)


def match_oracle(basis: Sequence[FrobeniusSolution], oracle: Sequence[Series1], order: int
                 ) -> OracleMatch:
    """Solve ``oracle = sum alpha_i basis_i`` on all exponents up to ``min exponent + order``."""
    exps = [b.exponent for b in basis] + [o.offset for o in oracle if any(o.coeffs)]
    if not exps:
        return OracleMatch(order, [], 0)
    cap = min(exps) + order
    for b in basis:
        if b.exponent + b.order < cap:
            raise ValueError(f"basis solution s = {b.exponent} is known only to {b.exponent + b.order}")
    for o in oracle:
        if any(o.coeffs) and o.order < cap:
            raise ValueError(f"oracle series is known only to {o.order}")
    keys = set()
    for b in basis:
        for l, row in enumerate(b.coeffs):
            for n, c in enumerate(row):
                if b.exponent + n <= cap:
                    keys.add((b.exponent + n, l))
    for o in oracle:
        for n, c in enumerate(o.coeffs):
            if o.offset + n <= cap:
                keys.add((o.offset + n, 0))
    keys = sorted(keys)
    rows = []
    for e, l in keys:
        row = []
        for b in basis:
            k = e - b.exponent
            ok = k.denominator == 1 and 0 <= k <= b.order and l < len(b.coeffs)
            row.append(b.coeffs[l][int(k)] if ok else Fraction(0))
        rhs = Fraction(0)
        if l == 0:
            for o in oracle:
                k = e - o.offset
                if k.denominator == 1 and 0 <= k < len(o.coeffs):
                    rhs += o.coeffs[int(k)]
        rows.append(row + [rhs])
    red, pivots = rref(rows, len(basis) + 1)
    if len(basis) in pivots:
        return OracleMatch(order, None, len(keys))
    alpha = [Fraction(0)] * len(basis)
    for row, p in zip(red, pivots):
        alpha[p] = row[len(basis)]
    return OracleMatch(order, alpha, len(keys))


def extension_report(system: ODESystem, order: int = 12, oracle: Optional[Sequence[Series1]] = None,
                     eval_points: Sequence = (), locus: str = "z3=0") -> ExtensionReport:
    """Frobenius basis of the ``z1`` equation, log-free verdict, bound ``N`` and oracle match."""
    part: ODEPart = system.parts.get(1)
    if part is None:
        raise ValueError("the system has no equation in z1")
    if system.weights is None or system.delta is None:
        raise ValueError("the system carries no weight data")
    if not part.regular.get(locus if locus != "z1=z2" else "z3=0", part.order == 0):
        raise ValueError(f"the z1 equation is not flagged regular at {locus}")
    weight_sum = system.weights[1] + system.weights[2]
    if part.order == 0:
        raise ValueError("the correlator vanishes identically (order-0 equation)")
    ind = indicial(local_equation(part, locus, 1))
    span = int(max(ind.roots) - min(ind.roots)) if ind.roots else 0
    eq = local_equation(part, locus, order + 2 * span + 1)
    basis = frobenius_basis(eq, order + span, ind)
    oks = [residual_is_zero(eq, b) for b in basis]
    log_free = not any(b.has_log for b in basis)
    low = min(weight_sum + b.exponent for b in basis)
    N = math.ceil(low) - 1
    match = match_oracle(basis, oracle, order) if oracle is not None else None
    evals = {}
    for z in eval_points:
        z = as_rational(z)
        evals[str(z)] = [eval_solution(b, z) for b in basis]
    return ExtensionReport(locus, system.delta, weight_sum, ind, basis, oks, log_free, N, match, evals)
