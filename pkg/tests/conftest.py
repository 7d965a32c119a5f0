import json
import functools
from fractions import Fraction
from pathlib import Path

import pytest

from voa_deq.deq.derive import Deriver
from voa_deq.models.registry import build_models, parse_spec
from voa_deq.tensor.space import TensorSetup
from voa_deq.voa.module import contragredient


@functools.lru_cache(maxsize=None)
def fock_setup(lams, level):
    """Tensor setup for ``M(l0)' (x) M(l1) (x) M(l2) (x) ... `` with ``l0 = sum``."""
    lams = tuple(Fraction(x) for x in lams)
    specs = [parse_spec(f"fock:lambda={l}").at_level(level) for l in (sum(lams),) + lams]
    mods = build_models(specs)
    return TensorSetup([contragredient(mods[0])] + mods[1:], level)


@functools.lru_cache(maxsize=None)
def fock_deriver(lams, level):
    return Deriver(fock_setup(lams, level))


@functools.lru_cache(maxsize=None)
def ising_setup(level=4):
    spec = parse_spec("virasoro-minimal:c=1/2,h=1/16").at_level(level)
    mods = build_models([spec] * 4)
    return TensorSetup([contragredient(mods[0])] + mods[1:], level)


@pytest.fixture
def fock111():
    return fock_setup((1, 1, 1), 4)


SCHEMAS = Path(__file__).resolve().parent.parent / "schemas"


def validate(doc, name):
    """Validate ``doc`` against ``schemas/<name>.schema.json``."""
    jsonschema = pytest.importorskip("jsonschema")
    schema = json.loads((SCHEMAS / f"{name}.schema.json").read_text())
    jsonschema.validate(json.loads(json.dumps(doc)), schema)
