"""
Job runners shared by the CLI and the HTTP service.

Each runner takes a validated request model and returns a report model.
"""
import logging
from typing import Callable, Dict, List, Tuple, Type

from pydantic import BaseModel

from src.api.models import (
    CheckFamilyJob,
    FunctorJob,
    HomJob,
    InvariantJob,
    KoszulJob,
    PrecoverJob,
    QuiverJob,
    ResolveJob,
    SpreadSpec,
)
from src.core import functors, rha, spreadcalc
from src.core.errors import InvalidInputError, TruncatedError
from src.core.poset import FinitePoset, GridPoset
from src.core.rep import hom_dim_spreads
from src.models.reports import (
    ExtendedClassReport,
    FunctorReport,
    HomReport,
    InvariantReport,
    KoszulReport,
    PrecoverProbeReport,
    QuiverReport,
    ResolutionReport,
)
from src.utils.serialization import (
    build_grid,
    build_module,
    build_poset,
    build_presentation,
    build_spread,
    module_to_dict,
)

logger = logging.getLogger(__name__)


def _family(P: FinitePoset, kind: str, spreads: List[SpreadSpec], p: int,
            with_projectives: bool) -> spreadcalc.Family:
    if kind == "custom":
        if not spreads:
            raise InvalidInputError("a custom family needs at least one spread")
        members = [build_spread(P, s) for s in spreads]
        return spreadcalc.custom_family(P, members, with_projectives=with_projectives, p=p)
    if spreads:
        raise InvalidInputError("spreads are only accepted for the custom family")
    return spreadcalc.build_family(P, kind, with_projectives=with_projectives, p=p)


def _grid_poset(P: FinitePoset, what: str) -> GridPoset:
    if not isinstance(P, GridPoset):
        raise InvalidInputError(f"{what} must be a grid")
    return P


def run_hom(job: HomJob) -> HomReport:
    shared = job.poset or job.spread1.poset or job.spread2.poset
    if shared is None:
        raise InvalidInputError("no poset given for the spreads")
    P = build_poset(job.spread1.poset or shared)
    if build_poset(job.spread2.poset or shared) != P:
        raise InvalidInputError("spreads live on different posets")
    S, T = build_spread(P, job.spread1), build_spread(P, job.spread2)
    dim, witnesses = hom_dim_spreads(P, S, T)
    return HomReport(dim=dim, witnesses=[U.describe() for U in witnesses])


def run_resolve(job: ResolveJob) -> ResolutionReport:
    """
    Raises:
        TruncatedError: If the resolution does not finish within the budget.
    """
    M = build_module(job.module)
    family = _family(M.poset, job.family, job.spreads, M.p, with_projectives=True)
    res = rha.minimal_resolution(M, family, job.max_len)
    if res.truncated:
        raise TruncatedError(res.max_len)
    cls = rha.class_of_resolution(res)
    return ResolutionReport(
        family=job.family,
        family_size=len(family),
        length=res.length,
        truncated=False,
        max_len=res.max_len,
        terms=res.term_labels(),
        groth_class=cls.labelled(),
        plus=[family.describe(i) for i in cls.plus()],
        minus=[family.describe(i) for i in cls.minus()],
    )


def _point(x):
    return list(x) if isinstance(x, tuple) else x


def run_invariant(job: InvariantJob) -> InvariantReport:
    M = build_module(job.module)
    if job.which == "dim":
        entries = [{"point": _point(x), "dim": d} for x, d in rha.dim_vector(M).items()]
    elif job.which == "rank":
        entries = [{"x": _point(x), "y": _point(y), "rank": r} for (x, y), r in rha.rank_invariant(M).items()]
    elif job.which == "barcode":
        entries = [{"bar": S.describe(), "multiplicity": m} for S, m in rha.barcode_1d(M)]
    else:
        members = _family(M.poset, job.family, job.spreads, M.p, with_projectives=False)
        entries = [{"member": members.describe(i), "dim": d} for i, d in rha.dim_hom_vector(M, members).items()]
    return InvariantReport(which=job.which, entries=entries)


def run_quiver(job: QuiverJob) -> QuiverReport:
    P = build_poset(job.poset)
    family = _family(P, job.family, job.spreads, job.prime, with_projectives=False)
    return spreadcalc.end_quiver(P, family, cross_check=job.cross_check)


def run_koszul(job: KoszulJob) -> KoszulReport:
    complex_ = spreadcalc.koszul_complex(job.n, job.prime)
    P = complex_.poset
    relative, witness = {}, None
    for kind in job.families:
        family = spreadcalc.build_family(P, kind, p=complex_.terms[0].p)
        relative[kind] = spreadcalc.check_relative_exact_contra(complex_, family)
        if witness is None and relative[kind]:
            try:
                witness = spreadcalc.koszul_witness_length(complex_, family)
            except InvalidInputError as e:
                logger.warning(f"no witness length over {kind}: {e}")
    return KoszulReport(
        n=job.n,
        ranks=[len(t) for t in complex_.terms],
        subsets=[[list(s) for s in level] for level in complex_.subsets],
        coefficients=[c.tolist() for c in complex_.coefficients],
        is_complex=complex_.is_complex(),
        is_exact=complex_.is_exact(),
        relative_exact=relative,
        witness_length=witness,
    )


def run_functor(job: FunctorJob) -> FunctorReport:
    Q = build_grid(job.grid)
    M = build_module(job.module)
    if job.op == "restrict":
        result = functors.restrict(M, Q)
    elif job.op == "contract":
        result = functors.contract(M, Q, _grid_poset(M.poset, "the module's poset"))
    else:
        if job.target is None:
            raise InvalidInputError("extend needs a target grid")
        if M.poset != Q.as_poset():
            raise InvalidInputError("extend needs a module over the subgrid")
        result = functors.extend(M, Q, _grid_poset(build_poset(job.target), "target"))
    return FunctorReport(op=job.op, module=module_to_dict(result))


def run_check_family(job: CheckFamilyJob) -> ExtendedClassReport:
    bound = _grid_poset(build_poset(job.bound), "bound")
    grids = [build_grid(g) for g in job.grids]
    tests = [build_presentation(t, job.prime) for t in job.test_modules]
    return functors.check_extended_class(bound, grids, job.family, tests, p=job.prime)


def run_precover(job: PrecoverJob) -> PrecoverProbeReport:
    bound = _grid_poset(build_poset(job.bound), "bound")
    return functors.upset_precover_probe(bound, job.r, job.s, job.t, job.candidates)


JOBS: Dict[str, Tuple[Type[BaseModel], Callable[..., BaseModel]]] = {
    "hom": (HomJob, run_hom),
    "resolve": (ResolveJob, run_resolve),
    "invariant": (InvariantJob, run_invariant),
    "quiver": (QuiverJob, run_quiver),
    "koszul": (KoszulJob, run_koszul),
    "functor": (FunctorJob, run_functor),
    "check-family": (CheckFamilyJob, run_check_family),
    "probe-precover": (PrecoverJob, run_precover),
}


def run_job(command: str, payload: dict) -> BaseModel:
    """
    Validate a payload for a command and run it.

    Raises:
        InvalidInputError: For an unknown command.
        pydantic.ValidationError: If the payload does not match the request model.
    """
    if command not in JOBS:
        raise InvalidInputError(f"unknown command {command!r}")
    model, handler = JOBS[command]
    job = model.model_validate(payload)
    logger.info(f"Running {command}")
    report = handler(job)
    logger.info(f"Finished {command}")
    return report
