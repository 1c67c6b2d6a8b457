"""
Conversion between request models, JSON files and library objects.
"""
import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional, Union

from pydantic import BaseModel

from src.api.models import GridSpec, ModuleSpec, PosetSpec, PresentationSpec, SpreadSpec
from src.core import linalg as la
from src.core.errors import InvalidInputError, UnknownPointError
from src.core.functors import PresentedModule
from src.core.poset import (
    AlignedSubgrid,
    FinitePoset,
    GridPoset,
    Point,
    Spread,
    make_spread,
    materialize_spread,
    point_label,
)
from src.core.rep import PersModule, presentation_module, spread_module

logger = logging.getLogger(__name__)


def load_json(path: Union[str, Path]) -> Any:
    """
    Raises:
        InvalidInputError: If the file is missing or is not valid JSON.
    """
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise InvalidInputError(f"file not found: {path}") from None
    except (OSError, json.JSONDecodeError) as e:
        raise InvalidInputError(f"cannot read {path}: {e}") from None


def render_json(data: Union[BaseModel, Dict[str, Any]]) -> str:
    """Canonical JSON text: stable key order as built, two-space indent, trailing newline."""
    if isinstance(data, BaseModel):
        data = data.model_dump(mode="json")
    return json.dumps(data, indent=2) + "\n"


def build_poset(spec: PosetSpec) -> FinitePoset:
    """
    Raises:
        UnknownPointError: If a ``leq`` pair indexes past the element list.
    """
    if spec.sizes is not None:
        return GridPoset.from_sizes(spec.sizes)
    if spec.axes is not None:
        return GridPoset(spec.axes)
    elements = spec.elements
    relations = []
    for i, j in spec.leq:
        for k in (i, j):
            if not 0 <= k < len(elements):
                raise UnknownPointError(k)
        relations.append((elements[i], elements[j]))
    return FinitePoset.from_relations(elements, relations)


def poset_to_dict(P: FinitePoset) -> Dict[str, Any]:
    if isinstance(P, GridPoset):
        if all(list(axis) == list(range(len(axis))) for axis in P.axes):
            return {"kind": "grid", "sizes": P.sizes}
        return {"kind": "grid", "axes": [list(a) for a in P.axes]}
    return {
        "kind": "finite",
        "elements": [_jsonable(x) for x in P.points],
        "leq": [[P.index(x), P.index(y)] for x, y in P.hasse],
    }


def _jsonable(x):
    if isinstance(x, tuple):
        return [_jsonable(v) for v in x]
    return x


def point_key(x: Point) -> str:
    """The JSON key of a point: ``(0,1)`` for grid points, ``(a)`` for scalar ids."""
    return point_label(x) if isinstance(x, tuple) else f"({x})"


def _point_lookup(P: FinitePoset) -> Dict[str, Point]:
    lookup = {}
    for x in P.points:
        lookup[point_key(x).replace(" ", "")] = x
        lookup.setdefault(point_label(x).replace(" ", ""), x)
    return lookup


def _parse_key(lookup: Dict[str, Point], key: str) -> Point:
    try:
        return lookup[key.replace(" ", "")]
    except KeyError:
        raise UnknownPointError(key) from None


def build_spread(P: FinitePoset, spec: SpreadSpec) -> Spread:
    if spec.support is not None:
        return make_spread(P, spec.support)
    return materialize_spread(P, spec.A, spec.bound)


def spread_to_dict(S: Spread) -> Dict[str, Any]:
    return {
        "A": [_jsonable(a) for a in S.lower],
        "B": "inf" if S.bound is None else [_jsonable(b) for b in S.bound],
    }


def build_grid(spec: GridSpec) -> AlignedSubgrid:
    if spec.axes is not None:
        return AlignedSubgrid(spec.axes)
    return AlignedSubgrid.from_points(spec.points)


def build_presentation(spec: PresentationSpec, p: Optional[int] = None) -> PresentedModule:
    return PresentedModule(spec.generators, spec.relations, spec.matrix or [], p)


def build_module(spec: ModuleSpec, p: Optional[int] = None) -> PersModule:
    """
    Args:
        spec: Module description.
        p: Prime overriding the one in the description.
    """
    P = build_poset(spec.poset)
    prime = la.resolve_prime(p if p is not None else spec.prime)
    if spec.spread is not None:
        module = spread_module(P, build_spread(P, spec.spread), prime)
    elif spec.presentation is not None:
        pres = spec.presentation
        module = presentation_module(P, pres.generators, pres.relations, pres.matrix or [], p=prime)
    else:
        lookup = _point_lookup(P)
        dims = {_parse_key(lookup, key): d for key, d in spec.dims.items()}
        maps = {}
        for key, matrix in spec.maps.items():
            source, sep, target = key.partition("->")
            if not sep:
                raise InvalidInputError(f"map key {key!r} must read \"(x)->(y)\"")
            maps[(_parse_key(lookup, source), _parse_key(lookup, target))] = matrix
        module = PersModule(P, dims, maps, p=prime)
    if spec.name:
        module.name = spec.name
    logger.debug(f"Loaded {module!r}")
    return module


def module_to_dict(M: PersModule) -> Dict[str, Any]:
    """
    JSON form of a module: spread modules by descriptor, everything else pointwise on its
    support. Parsing it back with ``build_module`` gives an equal module.
    """
    P = M.poset
    out: Dict[str, Any] = {"poset": poset_to_dict(P), "prime": M.p}
    if M.name:
        out["name"] = M.name
    if M.spread is not None:
        out["spread"] = spread_to_dict(M.spread)
        return out
    out["dims"] = {point_key(x): M.dims[x] for x in P.points if M.dims[x]}
    out["maps"] = {
        f"{point_key(x)}->{point_key(y)}": M.maps[(x, y)].tolist()
        for x, y in P.hasse
        if M.dims[x] and M.dims[y]
    }
    return out
