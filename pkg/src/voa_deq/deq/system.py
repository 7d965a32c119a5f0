"""Derived differential equations and their dependency witnesses."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional

from ..arith.ring import INHOMOGENEOUS, RingElem, pair_list
from ..io import q_from_json, q_to_json, ring_from_json, ring_to_json

SCHEMA = "voa-deq/ode-system/1"

# singular loci of a single-variable equation in z_l (two-variable names)
LOCI = ("z1=0", "z2=0", "z1=inf", "z2=inf", "z1=z2", "z3=0", "z1^-1(z1-z2)=0")
LOCUS_ALIASES = {
    "z2^-1(z1-z2)=0": "z3=0",
    "z2^{-1}(z1-z2)=0": "z3=0",
    "z1=infinity": "z1=inf",
    "z2=infinity": "z2=inf",
    "z1^{-1}(z1-z2)=0": "z1^-1(z1-z2)=0",
}


def canonical_locus(name: str) -> str:
    name = name.replace(" ", "")
    name = LOCUS_ALIASES.get(name, name)
    if name not in LOCI:
        raise ValueError(f"unknown locus {name!r}; expected one of {', '.join(LOCI)}")
    return name


@dataclass
class ODEPart:
    """``d^m phi / dz_l^m + a_{m-1} d^{m-1} phi / dz_l^{m-1} + ... + a_0 phi = 0``.

    ``coeffs[k]`` is ``a_k``; ``coeffs[m] = 1``.
    """

    variable: int
    coeffs: List[RingElem]
    regular: Dict[str, bool] = field(default_factory=dict)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def nvars(self) -> int:
        return self.coeffs[0].nvars

    def to_json(self) -> dict:
        return {
            "variable": self.variable,
            "order": self.order,
            "coefficients": [ring_to_json(c) for c in self.coeffs],
            "regular": dict(sorted(self.regular.items())),
        }

    @classmethod
    def from_json(cls, d: dict) -> "ODEPart":
        return cls(int(d["variable"]), [ring_from_json(c) for c in d["coefficients"]],
                   {k: bool(v) for k, v in d.get("regular", {}).items()})

    def text(self) -> str:
        v = f"z{self.variable}"
        m = self.order
        if m == 0:
            return "phi = 0"
        terms = []
        for k in range(m, -1, -1):
            c = self.coeffs[k]
            if c.is_zero():
                continue
            d = "phi" if k == 0 else (f"dphi/d{v}" if k == 1 else f"d^{k}phi/d{v}^{k}")
            cv = c.constant_value()
            if cv == 1:
                terms.append(d)
            else:
                terms.append(f"({c})*{d}")
        return " + ".join(terms) + " = 0"


@dataclass
class DependencyWitness:
    """``scale * sum_j a_j v_j + sum_r b_r nf(relation_r) = 0`` in complement coordinates.

    ``field_order`` is the least order of a dependence over the fraction
    field; it is below the equation order only when that dependence had
    coefficients outside R.
    """

    coordinates: List[tuple]
    vectors: List[List[RingElem]]
    coeffs: List[RingElem]
    kernel_keys: List[tuple] = field(default_factory=list)
    kernel_vectors: List[List[RingElem]] = field(default_factory=list)
    kernel_coeffs: List[RingElem] = field(default_factory=list)
    certificate_sizes: List[int] = field(default_factory=list)
    scale: Optional[RingElem] = None
    field_order: Optional[int] = None

    def residual(self) -> List[RingElem]:
        n = len(self.coordinates)
        nv = self.coeffs[0].nvars
        scale = RingElem.one(nv) if self.scale is None else self.scale
        acc = [RingElem.zero(nv) for _ in range(n)]
        for a, vec in zip(self.coeffs, self.vectors):
            for i in range(n):
                if not vec[i].is_zero():
                    acc[i] = acc[i] + scale * a * vec[i]
        for b, vec in zip(self.kernel_coeffs, self.kernel_vectors):
            for i in range(n):
                if not vec[i].is_zero():
                    acc[i] = acc[i] + b * vec[i]
        return acc

    def is_exact(self) -> bool:
        return all(x.is_zero() for x in self.residual())

    def to_json(self) -> dict:
        enc = lambda vs: [[ring_to_json(x) for x in v] for v in vs]
        return {
            "coordinates": [list(q) for q in self.coordinates],
            "vectors": enc(self.vectors),
            "coefficients": [ring_to_json(c) for c in self.coeffs],
            "kernel_relations": [{"slot": k[0], "u": k[1], "tuple": list(k[2])} for k in self.kernel_keys],
            "kernel_vectors": enc(self.kernel_vectors),
            "kernel_coefficients": [ring_to_json(c) for c in self.kernel_coeffs],
            "certificate_sizes": list(self.certificate_sizes),
            "scale": None if self.scale is None else ring_to_json(self.scale),
            "field_order": self.field_order,
        }

    @classmethod
    def from_json(cls, d: dict) -> "DependencyWitness":
        dec = lambda vs: [[ring_from_json(x) for x in v] for v in vs]
        return cls(
            [tuple(q) for q in d["coordinates"]],
            dec(d["vectors"]),
            [ring_from_json(c) for c in d["coefficients"]],
            [(k["slot"], k["u"], tuple(k["tuple"])) for k in d.get("kernel_relations", [])],
            dec(d.get("kernel_vectors", [])),
            [ring_from_json(c) for c in d.get("kernel_coefficients", [])],
            list(d.get("certificate_sizes", [])),
            None if d.get("scale") is None else ring_from_json(d["scale"]),
            d.get("field_order"),
        )


@dataclass
class ODESystem:
    nvars: int
    parts: Dict[int, ODEPart]
    provenance: dict = field(default_factory=dict)
    delta: Optional[Fraction] = None
    weights: Optional[List[Fraction]] = None
    witnesses: Dict[int, DependencyWitness] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA,
            "nvars": self.nvars,
            "parts": [self.parts[k].to_json() for k in sorted(self.parts)],
            "provenance": self.provenance,
            "delta": None if self.delta is None else q_to_json(self.delta),
            "weights": None if self.weights is None else [q_to_json(w) for w in self.weights],
            "witnesses": {str(k): w.to_json() for k, w in sorted(self.witnesses.items())},
        }

    @classmethod
    def from_json(cls, d: dict) -> "ODESystem":
        if d.get("schema") != SCHEMA:
            raise ValueError(f"expected schema {SCHEMA}, got {d.get('schema')!r}")
        parts = {p["variable"]: ODEPart.from_json(p) for p in d["parts"]}
        return cls(
            int(d["nvars"]), parts, d.get("provenance", {}),
            None if d.get("delta") is None else q_from_json(d["delta"]),
            None if d.get("weights") is None else [q_from_json(w) for w in d["weights"]],
            {int(k): DependencyWitness.from_json(w) for k, w in d.get("witnesses", {}).items()},
        )

    def text(self) -> str:
        lines = []
        for k in sorted(self.parts):
            part = self.parts[k]
            lines.append(part.text())
            flags = ", ".join(f"{l}: {'regular' if r else 'not shown regular'}"
                              for l, r in sorted(part.regular.items()))
            if flags:
                lines.append(f"  # {flags}")
        return "\n".join(lines) + "\n"


def regularity_flags(part: ODEPart) -> Dict[str, bool]:
    """Regular-singular checks of a single-variable equation at each locus.

    Each test is the standard Fuchs condition ``a_k = O(t^{k-m})`` in the local
    coordinate ``t``; at ``z3 = 0`` (and its mirror ``z1^{-1}(z1-z2) = 0``)
    the coefficients ``c_k = a_k (z1-z2)^{m-k}`` must in addition have degree 0
    and no ``(z1-z2)`` pole, so they are analytic functions of ``z3`` alone.
    """
    m = part.order
    l = part.variable - 1
    nv = part.nvars
    flags: Dict[str, bool] = {}
    if m == 0:
        return flags
    pairs = pair_list(nv)
    own = [idx for idx, (i, j) in enumerate(pairs) if l in (i, j)]

    def ok_zero(a: RingElem, k: int) -> bool:
        return a.is_zero() or min(e[l] for e in a.num.terms) >= k - m

    def ok_inf(a: RingElem, k: int) -> bool:
        if a.is_zero():
            return True
        deg = max(e[l] for e in a.num.terms) - sum(a.den[idx] for idx in own)
        return deg <= k - m

    def ok_diff(a: RingElem, k: int, idx: int) -> bool:
        return a.is_zero() or a.den[idx] <= m - k

    name = f"z{l + 1}"
    flags[f"{name}=0"] = all(ok_zero(part.coeffs[k], k) for k in range(m))
    flags[f"{name}=inf"] = all(ok_inf(part.coeffs[k], k) for k in range(m))
    for idx in own:
        i, j = pairs[idx]
        flags[f"z{i + 1}=z{j + 1}"] = all(ok_diff(part.coeffs[k], k, idx) for k in range(m))
    if nv == 2:
        graded = True
        for k in range(m):
            c = part.coeffs[k] * RingElem.diff_power(0, 1, m - k, 2)
            if not c.is_zero() and (c.degree() != 0 or c.dpow != 0):
                graded = False
        flags["z3=0"] = graded
        flags["z1^-1(z1-z2)=0"] = graded
    return flags


def graded_coefficients(part: ODEPart) -> List[RingElem]:
    """``c_k = a_k (z1 - z2)^{m-k}`` (two variables)."""
    m = part.order
    return [part.coeffs[k] * RingElem.diff_power(0, 1, m - k, part.nvars) for k in range(m + 1)]


def ring_degrees(coeffs: List[RingElem]):
    return [c.degree() if not c.is_zero() else 0 for c in coeffs]


__all__ = [
    "DependencyWitness", "INHOMOGENEOUS", "LOCI", "ODEPart", "ODESystem", "SCHEMA",
    "canonical_locus", "graded_coefficients", "regularity_flags", "ring_degrees",
]
