from fractions import Fraction as F

import pytest

from voa_deq import errors
from voa_deq.fusion import DEFAULT_POINT, admissible, fusion_bound, random_points
from voa_deq.models.registry import build_models, parse_spec

from conftest import validate

ISING = "virasoro-minimal:c=1/2,h="


def bound(specs, level, **kw):
    mods = build_models([parse_spec(s).at_level(level) for s in specs])
    return fusion_bound(*mods, cutoff=level, **kw)


def test_random_points_are_admissible_and_reproducible():
    pts = random_points(8, seed=4)
    assert pts == random_points(8, seed=4)
    assert all(admissible(p) for p in pts) and DEFAULT_POINT not in pts
    assert len(set(pts)) == 8


@pytest.mark.parametrize("point", [(0, 1), (1, 0), (3, 3)])
def test_singular_points_rejected(point):
    with pytest.raises(errors.InputError):
        bound(["fock:lambda=1"] * 3, 2, point=point)


@pytest.mark.parametrize("lams,expected", [((1, 1, 2), 1), ((1, 1, 1), 0), ((1, -1, 0), 1), ((1, 2, 2), 0)])
def test_fock_charge_conservation(lams, expected):
    res = bound([f"fock:lambda={l}" for l in lams], 3)
    assert res.bound == expected and res.stable


def test_vacuum():
    res = bound(["heisenberg"] * 3, 3)
    assert res.bound == 1 and res.minimum == 1


@pytest.mark.parametrize("h3,expected", [("0", 1), ("1/2", 1), ("1/16", 0)])
def test_ising_fusion_rules(h3, expected):
    """sigma x sigma = 1 + epsilon, reached at cutoff 5."""
    res = bound([ISING + "1/16", ISING + "1/16", ISING + h3], 5, extra_points=2)
    assert res.bound == expected and res.stable


def test_bound_never_increases_with_cutoff():
    values = [bound([ISING + "1/16"] * 3, L, extra_points=0).bound for L in (3, 4, 5)]
    assert values == sorted(values, reverse=True)


def test_json_and_text():
    res = bound(["fock:lambda=1", "fock:lambda=1", "fock:lambda=2"], 2, point=(F(3), F(-1)))
    doc = res.to_json()
    assert doc["schema"] == "voa-deq/fusion-bound/1"
    assert doc["point"] == [["3", "1"], ["-1", "1"]]
    assert doc["bound"] == 1 and len(doc["diagnostics"]["other_points"]) == 5
    validate(doc, "fusion-bound")
    assert "fusion bound for (M(1,2); M(1,1) M(1,1))" in res.text()
