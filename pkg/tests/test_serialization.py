"""
Tests for the JSON forms of posets, spreads and modules.
"""
import pytest
from pydantic import ValidationError

from src.api.models import ModuleSpec, PosetSpec, SpreadSpec
from src.core.errors import InvalidInputError, UnknownPointError
from src.core.functors import PresentedModule
from src.core.poset import FinitePoset, GridPoset, materialize_spread
from src.core.rep import spread_module
from src.utils.serialization import (
    build_module,
    build_poset,
    build_spread,
    module_to_dict,
    poset_to_dict,
    spread_to_dict,
)


def test_grid_literal():
    P = build_poset(PosetSpec.model_validate({"kind": "grid", "sizes": [3, 2]}))
    assert isinstance(P, GridPoset)
    assert P.sizes == [3, 2]
    assert poset_to_dict(P) == {"kind": "grid", "sizes": [3, 2]}


def test_finite_literal_closes_leq():
    P = build_poset(PosetSpec.model_validate(
        {"kind": "finite", "elements": ["a", "b", "c"], "leq": [[0, 1], [1, 2]]}
    ))
    assert P.leq("a", "c")
    assert not P.leq("c", "a")
    assert poset_to_dict(P) == {"kind": "finite", "elements": ["a", "b", "c"], "leq": [[0, 1], [1, 2]]}


def test_finite_round_trip():
    P = FinitePoset.from_relations([0, 1, 2, 3], [(0, 1), (0, 2), (1, 3), (2, 3)])
    assert build_poset(PosetSpec.model_validate(poset_to_dict(P))) == P


@pytest.mark.parametrize("data", [
    {"kind": "finite", "elements": [0, 1], "relations": [[0, 1]]},
    {"kind": "finite", "sizes": [2]},
    {"kind": "grid", "elements": [0, 1]},
    {"elements": [0, 1], "leq": [[0]]},
    {"sizes": [2], "leq": [[0, 1]]},
    {"kind": "lattice", "sizes": [2]},
])
def test_malformed_posets(data):
    with pytest.raises(ValidationError):
        PosetSpec.model_validate(data)


def test_leq_index_out_of_range():
    with pytest.raises(UnknownPointError):
        build_poset(PosetSpec.model_validate({"kind": "finite", "elements": [0, 1], "leq": [[0, 2]]}))


def test_spread_descriptors(grid3):
    inf = build_spread(grid3, SpreadSpec.model_validate({"A": [[1, 1]], "B": "inf"}))
    omitted = build_spread(grid3, SpreadSpec.model_validate({"A": [[1, 1]]}))
    assert inf.support == omitted.support
    assert inf.bound is None
    bounded = build_spread(grid3, SpreadSpec.model_validate({"A": [[0, 1], [1, 0]], "B": [[2, 1]]}))
    assert spread_to_dict(bounded) == {"A": [[0, 1], [1, 0]], "B": [[2, 1]]}
    assert spread_to_dict(inf) == {"A": [[1, 1]], "B": "inf"}


@pytest.mark.parametrize("data", [
    {"lower": [[0, 0]]},
    {"B": "inf"},
    {"support": [[0, 0]], "B": "inf"},
    {"A": [[0, 0]], "B": "none"},
])
def test_malformed_spreads(data):
    with pytest.raises(ValidationError):
        SpreadSpec.model_validate(data)


def test_pointwise_module(grid2):
    spec = ModuleSpec.model_validate({
        "poset": {"kind": "grid", "sizes": [2, 2]},
        "dims": {"(0,0)": 1, "(0, 1)": 1},
        "maps": {"(0,0)->(0,1)": [[1]]},
    })
    M = build_module(spec)
    assert M.dims == {(0, 0): 1, (0, 1): 1, (1, 0): 0, (1, 1): 0}
    assert M.maps[((0, 0), (0, 1))].tolist() == [[1]]


def test_scalar_points_accept_both_keys():
    poset = {"kind": "finite", "elements": ["a", "b"], "leq": [[0, 1]]}
    plain = build_module(ModuleSpec.model_validate(
        {"poset": poset, "dims": {"a": 1, "b": 1}, "maps": {"a->b": [[1]]}}
    ))
    wrapped = build_module(ModuleSpec.model_validate(
        {"poset": poset, "dims": {"(a)": 1, "(b)": 1}, "maps": {"(a)->(b)": [[1]]}}
    ))
    assert plain.equals(wrapped)


def test_bad_module_keys():
    poset = {"kind": "grid", "sizes": [2]}
    with pytest.raises(UnknownPointError):
        build_module(ModuleSpec.model_validate({"poset": poset, "dims": {"(7)": 1}}))
    with pytest.raises(InvalidInputError, match="must read"):
        build_module(ModuleSpec.model_validate(
            {"poset": poset, "dims": {"(0)": 1, "(1)": 1}, "maps": {"(0),(1)": [[1]]}}
        ))
    with pytest.raises(ValidationError):
        ModuleSpec.model_validate({"poset": poset, "dims": {"(0)": 1}, "values": {}})


def test_spread_module_serializes_by_descriptor(grid3, prime):
    S = materialize_spread(grid3, [(0, 1), (1, 0)], [(2, 1)])
    data = module_to_dict(spread_module(grid3, S, prime))
    assert data["spread"] == {"A": [[0, 1], [1, 0]], "B": [[2, 1]]}
    assert "dims" not in data
    assert build_module(ModuleSpec.model_validate(data)).equals(spread_module(grid3, S, prime))


def test_pointwise_round_trip(grid3, prime):
    M = PresentedModule.random(grid3, 3, 2, seed=4, p=prime).realize(grid3)
    data = module_to_dict(M)
    assert set(data) >= {"poset", "prime", "dims", "maps"}
    assert all("->" in key for key in data["maps"])
    assert build_module(ModuleSpec.model_validate(data)).equals(M)
