"""Model specifications, shared-VOA construction and the module JSON format."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

from ..arith.laurent import as_rational
from ..io import q_from_json, q_to_json
from ..voa.module import ModuleData, VOAData
from .. import errors
from .heisenberg import build_fock, build_heisenberg
from .virasoro import SUPPORTED_SIMPLE, build_virasoro, build_virasoro_voa

MODULE_SCHEMA = "voa-deq/module/1"
FAMILIES = ("heisenberg", "fock", "virasoro-verma", "virasoro-minimal")
# room above the requested level for the modes used by relations and insertions
HEADROOM = 3


@dataclass(frozen=True)
class ModelSpec:
    """``family`` with ``params`` (``lambda`` or ``c``, ``h``) stored to weight ``cutoff``."""

    family: str
    params: Dict[str, Fraction] = field(default_factory=dict)
    cutoff: Optional[Fraction] = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise errors.InputError(f"unknown family {self.family!r}; expected one of {', '.join(FAMILIES)}")
        need = {"heisenberg": set(), "fock": {"lambda"}, "virasoro-verma": {"c", "h"},
                "virasoro-minimal": {"c", "h"}}[self.family]
        if set(self.params) != need:
            raise errors.InputError(f"{self.family} needs parameters {sorted(need)}, got {sorted(self.params)}")
        if self.family == "virasoro-minimal" and (self.params["c"], self.params["h"]) not in SUPPORTED_SIMPLE:
            raise errors.InputError(
                f"virasoro-minimal supports c=1/2 with h in {{0, 1/2, 1/16}}; got c={self.params['c']}, "
                f"h={self.params['h']}")

    @property
    def lowest_weight(self) -> Fraction:
        if self.family == "heisenberg":
            return Fraction(0)
        if self.family == "fock":
            return self.params["lambda"] ** 2 / 2
        return self.params["h"]

    def at_level(self, level) -> "ModelSpec":
        """The same model stored ``level + HEADROOM`` above its lowest weight."""
        return ModelSpec(self.family, dict(self.params), self.lowest_weight + as_rational(level) + HEADROOM)

    @property
    def voa_key(self) -> tuple:
        if self.family in ("heisenberg", "fock"):
            return ("heisenberg",)
        return (self.family, self.params["c"])


def parse_spec(text: str) -> ModelSpec:
    """``fock:lambda=1``, ``virasoro-minimal:c=1/2,h=1/16``, ``heisenberg`` (optional ``cutoff=``)."""
    family, _, rest = text.partition(":")
    params: Dict[str, Fraction] = {}
    cutoff = None
    for item in filter(None, rest.split(",")):
        key, eq, val = item.partition("=")
        if not eq:
            raise errors.InputError(f"bad model parameter {item!r} in {text!r}")
        try:
            q = Fraction(val)
        except (ValueError, ZeroDivisionError) as exc:
            raise errors.InputError(f"bad rational {val!r} in {text!r}") from exc
        if key == "cutoff":
            cutoff = q
        else:
            params[{"l": "lambda", "lam": "lambda"}.get(key, key)] = q
    return ModelSpec(family.strip(), params, cutoff)


def build_models(specs: Sequence[ModelSpec]) -> List[ModuleData]:
    """Modules for ``specs`` over one shared VOA object."""
    if not specs:
        return []
    keys = {s.voa_key for s in specs}
    if len(keys) != 1:
        raise errors.InputError(f"modules over different VOAs: {sorted(map(str, keys))}")
    for s in specs:
        if s.cutoff is None:
            raise errors.InputError(f"model {s.family} has no cutoff")
        if s.cutoff < s.lowest_weight:
            raise errors.InputError(f"cutoff {s.cutoff} is below the lowest weight {s.lowest_weight}")
    span = max(max(s.cutoff - s.lowest_weight for s in specs), Fraction(2))
    key = keys.pop()
    if key[0] == "heisenberg":
        hs = [s for s in specs if s.family == "heisenberg"]
        voa = build_heisenberg(max([span] + [s.cutoff for s in hs]))
        return [voa if s.family == "heisenberg" else build_fock(s.params["lambda"], s.cutoff, voa=voa)
                for s in specs]
    simple = key[0] == "virasoro-minimal"
    c = key[1]
    voa = build_virasoro_voa(c, span, simple)
    return [build_virasoro(c, s.params["h"], s.cutoff, simple=simple, voa=voa) for s in specs]


def build_model(spec: ModelSpec) -> ModuleData:
    return build_models([spec])[0]


def spec_of(m: ModuleData) -> ModelSpec:
    fam = m.family
    if fam == "heisenberg":
        params = {}
    elif fam == "fock":
        params = {"lambda": Fraction(m.params["lambda"])}
    else:
        params = {"c": Fraction(m.params["c"]), "h": Fraction(m.params.get("h", "0"))}
    return ModelSpec(fam, params, m.cutoff)


def graded_dimensions(m: ModuleData) -> List[tuple]:
    return [(w, len(idx)) for w, idx in sorted(m.space.by_weight.items())]


def module_to_json(m: ModuleData) -> dict:
    spec = spec_of(m)
    return {
        "schema": MODULE_SCHEMA,
        "family": spec.family,
        "params": {k: q_to_json(v) for k, v in sorted(spec.params.items())},
        "cutoff": q_to_json(m.cutoff),
        "name": m.name,
        "lowest_weight": q_to_json(m.min_weight),
        "central_charge": q_to_json(m.voa.central_charge),
        "graded_dimensions": [[q_to_json(w), d] for w, d in graded_dimensions(m)],
        "basis": [[i, q_to_json(w), str(lab)] for i, (lab, w) in enumerate(zip(m.space.labels, m.space.weights))],
    }


def spec_from_json(d: dict) -> ModelSpec:
    if not isinstance(d, dict) or d.get("schema") != MODULE_SCHEMA:
        raise errors.InputError(f"expected a module file with schema {MODULE_SCHEMA}")
    try:
        params = {k: q_from_json(v) for k, v in d["params"].items()}
        return ModelSpec(d["family"], params, q_from_json(d["cutoff"]))
    except (KeyError, AttributeError, TypeError) as exc:
        raise errors.InputError(f"module file is missing field {exc}") from exc


def check_module_json(d: dict, m: ModuleData) -> None:
    """Schema-level consistency of a stored module against its rebuilt data."""
    stored = [(q_from_json(w), int(n)) for w, n in d.get("graded_dimensions", [])]
    if stored and stored != graded_dimensions(m):
        raise errors.InputError("stored graded dimensions do not match the rebuilt module")
    if "lowest_weight" in d and q_from_json(d["lowest_weight"]) != m.min_weight:
        raise errors.InputError("stored lowest weight does not match the rebuilt module")


def modules_from_json(docs: Sequence[dict]) -> List[ModuleData]:
    specs = [spec_from_json(d) for d in docs]
    mods = build_models(specs)
    for d, m in zip(docs, mods):
        check_module_json(d, m)
    return mods
