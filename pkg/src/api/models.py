"""
Request models shared by the HTTP service and the CLI.

Points are JSON lists of integers on grids and arbitrary scalars on general finite posets.
Module values and maps are keyed by point labels such as ``"(0,1)"`` and ``"(0,1)->(1,1)"``.
"""
from typing import Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, NonNegativeInt, model_validator

FAMILY_KIND = Literal[
    "projectives",
    "segments",
    "hooks",
    "single_source_spreads",
    "spreads",
    "upsets",
    "fp_upsets",
    "custom",
]


class StrictModel(BaseModel):
    """Base for request models: unknown fields are rejected rather than dropped."""
    model_config = ConfigDict(extra="forbid")


class PosetSpec(StrictModel):
    """
    A grid, ``{"kind": "grid", "sizes": [...]}`` (or ``axes``), or a finite poset,
    ``{"kind": "finite", "elements": [...], "leq": [[i, j], ...]}`` with index pairs.
    """
    kind: Optional[Literal["grid", "finite"]] = None
    sizes: Optional[List[int]] = Field(None, description="Grid {0..n1-1} x ... x {0..nk-1}")
    axes: Optional[List[List[int]]] = Field(None, description="Per-axis integer coordinates")
    elements: Optional[List[Any]] = Field(None, description="Point ids of a finite poset")
    leq: List[List[int]] = Field(default_factory=list, description="Index pairs [i, j] meaning elements[i] <= elements[j]")

    @model_validator(mode="after")
    def _one_form(self):
        given = [f for f in ("sizes", "axes", "elements") if getattr(self, f) is not None]
        if len(given) != 1:
            raise ValueError("give exactly one of sizes, axes or elements")
        if self.leq and self.elements is None:
            raise ValueError("leq is only allowed with elements")
        if any(len(pair) != 2 for pair in self.leq):
            raise ValueError("leq entries must be index pairs [i, j]")
        is_finite = self.elements is not None
        if self.kind == "grid" and is_finite:
            raise ValueError("a grid poset takes sizes or axes")
        if self.kind == "finite" and not is_finite:
            raise ValueError("a finite poset takes elements and leq")
        return self


class SpreadSpec(StrictModel):
    """
    A spread by descriptor ``{"A": [...], "B": [...] | "inf"}`` (B omitted or ``"inf"`` for
    an upset) or by its support ``{"support": [...]}``.
    """
    poset: Optional[PosetSpec] = None
    A: Optional[List[Any]] = Field(None, description="Minimal elements")
    B: Optional[Union[Literal["inf"], List[Any]]] = Field(None, description="Bounding antichain or 'inf'")
    support: Optional[List[Any]] = None

    @model_validator(mode="after")
    def _one_form(self):
        if (self.A is None) == (self.support is None):
            raise ValueError("give either A (with optional B) or support")
        if self.support is not None and self.B is not None:
            raise ValueError("B is only allowed with A")
        return self

    @property
    def bound(self) -> Optional[List[Any]]:
        return None if self.B is None or self.B == "inf" else self.B


class PresentationSpec(StrictModel):
    generators: List[Any] = Field(default_factory=list)
    relations: List[Any] = Field(default_factory=list)
    matrix: List[List[int]] = Field(default_factory=list, description="matrix[r][g]")


class ModuleSpec(StrictModel):
    """
    A module given pointwise (``dims`` keyed ``"(x)"``, ``maps`` keyed ``"(x)->(y)"`` on
    cover relations), by a presentation, or as a spread module.
    """
    poset: PosetSpec
    prime: Optional[int] = None
    name: Optional[str] = None
    dims: Optional[Dict[str, NonNegativeInt]] = None
    maps: Dict[str, List[List[int]]] = Field(default_factory=dict)
    presentation: Optional[PresentationSpec] = None
    spread: Optional[SpreadSpec] = None

    @model_validator(mode="after")
    def _one_form(self):
        given = [f for f in ("dims", "presentation", "spread") if getattr(self, f) is not None]
        if len(given) != 1:
            raise ValueError("give exactly one of dims, presentation or spread")
        if self.maps and self.dims is None:
            raise ValueError("maps are only allowed with dims")
        return self


class GridSpec(StrictModel):
    """An aligned subgrid by its axes, or by its points (rejected unless aligned)."""
    axes: Optional[List[List[int]]] = None
    points: Optional[List[List[int]]] = None

    @model_validator(mode="after")
    def _one_form(self):
        if (self.axes is None) == (self.points is None):
            raise ValueError("give either axes or points")
        return self


class HomJob(StrictModel):
    spread1: SpreadSpec
    spread2: SpreadSpec
    poset: Optional[PosetSpec] = Field(None, description="Shared poset when the spreads omit theirs")


class ResolveJob(StrictModel):
    family: FAMILY_KIND
    module: ModuleSpec
    max_len: Optional[int] = Field(None, ge=0)
    spreads: List[SpreadSpec] = Field(default_factory=list, description="Members of a custom family")


class InvariantJob(StrictModel):
    which: Literal["dim", "rank", "barcode", "dimhom"]
    module: ModuleSpec
    family: FAMILY_KIND = Field("projectives", description="Probe family for dimhom")
    spreads: List[SpreadSpec] = Field(default_factory=list)


class QuiverJob(StrictModel):
    family: FAMILY_KIND
    poset: PosetSpec
    cross_check: bool = True
    prime: Optional[int] = None
    spreads: List[SpreadSpec] = Field(default_factory=list)


class KoszulJob(StrictModel):
    n: int = Field(3, ge=2)
    families: List[FAMILY_KIND] = Field(default_factory=lambda: ["single_source_spreads", "spreads"])
    prime: Optional[int] = None


class FunctorJob(StrictModel):
    op: Literal["restrict", "extend", "contract"]
    grid: GridSpec
    module: ModuleSpec
    target: Optional[PosetSpec] = Field(None, description="Ambient grid for extend")


class CheckFamilyJob(StrictModel):
    family: FAMILY_KIND
    bound: PosetSpec
    grids: List[GridSpec]
    test_modules: List[PresentationSpec] = Field(default_factory=list)
    prime: Optional[int] = None


class PrecoverJob(StrictModel):
    bound: PosetSpec
    r: int
    s: int
    t: int
    candidates: Optional[List[List[List[int]]]] = None
