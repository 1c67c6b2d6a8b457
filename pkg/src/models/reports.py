"""
Report models emitted by jobs, the CLI and the HTTP service.
"""
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field


class ErrorDetail(BaseModel):
    """Machine-readable error body."""
    type: str = Field(..., description="Exception class name")
    message: str = Field(..., description="Human-readable message")
    exit_code: int = Field(..., description="Process exit code for the CLI")


class ErrorReport(BaseModel):
    error: ErrorDetail


class HomReport(BaseModel):
    """Hom between two spread modules."""
    dim: int = Field(..., description="dim Hom(I_S, I_T)")
    witnesses: List[str] = Field(default_factory=list, description="Image spread of each basis morphism")


class ResolutionReport(BaseModel):
    """A minimal relative resolution with its class and signed decomposition."""
    family: str
    family_size: int
    length: Optional[int] = Field(None, description="Length of the resolution; None when truncated")
    truncated: bool = False
    max_len: int
    terms: List[List[str]] = Field(default_factory=list, description="Summands of U_0, U_1, ...")
    groth_class: Dict[str, int] = Field(default_factory=dict)
    plus: List[str] = Field(default_factory=list)
    minus: List[str] = Field(default_factory=list)


class InvariantReport(BaseModel):
    which: str
    entries: List[Dict[str, Any]] = Field(default_factory=list)


class QuiverArrow(BaseModel):
    source: int
    target: int
    multiplicity: int = 1
    tag: Optional[str] = Field(None, description="'injective', 'surjective' or None")


class QuiverReport(BaseModel):
    """The quiver of the endomorphism algebra of a family."""
    kind: str
    vertices: List[str]
    arrows: List[QuiverArrow] = Field(default_factory=list)
    cross_checked: bool = False
    mismatches: List[str] = Field(default_factory=list)

    def to_dot(self) -> str:
        lines = [f'digraph "{self.kind}" {{']
        for i, label in enumerate(self.vertices):
            lines.append(f'  v{i} [label="{label}"];')
        for arrow in self.arrows:
            attrs = []
            if arrow.tag:
                attrs.append(f'label="{arrow.tag}"')
            if arrow.tag == "surjective":
                attrs.append("style=dashed")
            suffix = f" [{', '.join(attrs)}]" if attrs else ""
            for _ in range(arrow.multiplicity):
                lines.append(f"  v{arrow.source} -> v{arrow.target}{suffix};")
        lines.append("}")
        return "\n".join(lines) + "\n"


class KoszulReport(BaseModel):
    n: int
    ranks: List[int] = Field(..., description="Number of summands of each term")
    subsets: List[List[List[int]]]
    coefficients: List[List[List[int]]] = Field(..., description="Sign matrices of the differentials")
    is_complex: bool
    is_exact: bool
    relative_exact: Dict[str, bool] = Field(default_factory=dict, description="Per family kind")
    witness_length: Optional[int] = None


class FunctorReport(BaseModel):
    op: str
    module: Dict[str, Any]


class ConditionCheck(BaseModel):
    """Outcome of one extended-class condition, globally (grid None) or on one grid."""
    condition: int
    grid: Optional[List[List[int]]] = None
    passed: bool
    witness: Optional[str] = None


class ExtendedClassReport(BaseModel):
    kind: str
    checks: List[ConditionCheck] = Field(default_factory=list)
    first_violation: Optional[ConditionCheck] = None
    passed: bool


class PrecoverProbeReport(BaseModel):
    """Factorization chain of upset maps onto a hook within a finite bound."""
    hook: str
    candidates: List[str]
    chain: List[str]
    factorizations: List[bool] = Field(..., description="Whether each chain step factors the smaller map")
    supported_at_base: bool
    maximal_within_bound: List[str]
    precover_within_bound: bool
    note: str = Field(
        "A maximal candidate inside a finite bound only reflects the truncation; "
        "refining the bound always admits a larger candidate.",
    )


class ScanReport(BaseModel):
    family: str
    lower_bound: int
    witness: Optional[str] = None
    candidates: int
    histogram: Dict[int, int] = Field(default_factory=dict, description="Relative dimension -> count")
