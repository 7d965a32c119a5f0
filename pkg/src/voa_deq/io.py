"""Exact JSON encodings: rationals as decimal-string ``[numerator, denominator]`` pairs."""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any

from .arith.laurent import LaurentPoly, as_rational
from .arith.ring import RingElem
from . import errors


def q_to_json(x) -> list:
    x = as_rational(x)
    return [str(x.numerator), str(x.denominator)]


def q_from_json(v) -> Fraction:
    try:
        if isinstance(v, list) and len(v) == 2:
            return Fraction(int(v[0]), int(v[1]))
        if isinstance(v, str):
            return Fraction(v)
    except (ValueError, ZeroDivisionError) as exc:
        raise errors.InputError(f"bad rational {v!r}") from exc
    raise errors.InputError(f"bad rational {v!r}")


def laurent_to_json(p: LaurentPoly) -> list:
    return [[list(e), q_to_json(c)] for e, c in sorted(p.terms.items())]


def laurent_from_json(v, nvars: int) -> LaurentPoly:
    return LaurentPoly({tuple(int(x) for x in e): q_from_json(c) for e, c in v}, nvars)


def ring_to_json(a: RingElem) -> dict:
    return {"nvars": a.nvars, "num": laurent_to_json(a.num), "den": list(a.den)}


def ring_from_json(v) -> RingElem:
    try:
        nv = int(v["nvars"])
        return RingElem(laurent_from_json(v["num"], nv), tuple(int(d) for d in v["den"]))
    except (KeyError, TypeError) as exc:
        raise errors.InputError(f"bad ring element {v!r}") from exc


def write_json(path, obj: Any) -> None:
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def read_json(path) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise errors.InputError(f"cannot read JSON from {path}: {exc}") from exc
