"""
API routes for the spreadhom service.
"""
import logging
from typing import Any, Dict

from fastapi import APIRouter, HTTPException, Query
from fastapi.responses import PlainTextResponse
from pydantic import BaseModel, ValidationError

from src.api.models import (
    CheckFamilyJob,
    FunctorJob,
    HomJob,
    InvariantJob,
    KoszulJob,
    PrecoverJob,
    QuiverJob,
    ResolveJob,
)
from src.core.config import get_settings
from src.core.errors import InvalidInputError, TooLargeError, TruncatedError
from src.core.jobs import JOBS
from src.core.spreadcalc import FAMILY_KINDS
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

logger = logging.getLogger(__name__)
router = APIRouter()


def _run(command: str, job: BaseModel) -> BaseModel:
    """Run a job and map library errors to HTTP status codes."""
    _, handler = JOBS[command]
    try:
        return handler(job)
    except (InvalidInputError, ValidationError) as e:
        logger.warning(f"Invalid input for {command}: {e}")
        raise HTTPException(status_code=422, detail=str(e))
    except TooLargeError as e:
        logger.warning(f"{command} too large: {e}")
        raise HTTPException(status_code=413, detail=str(e))
    except TruncatedError as e:
        logger.warning(f"{command} truncated: {e}")
        raise HTTPException(status_code=409, detail=str(e))
    except Exception as e:
        logger.exception(f"Error running {command}: {str(e)}")
        raise HTTPException(status_code=500, detail=str(e))


@router.get("/", tags=["Status"])
async def get_status() -> Dict[str, Any]:
    """Service status, field prime and available commands."""
    settings = get_settings()
    return {
        "status": "ok",
        "prime": settings.prime,
        "family_cap": settings.family_cap,
        "commands": list(JOBS),
    }


@router.get("/families", tags=["Status"])
async def list_families() -> Dict[str, Any]:
    return {"kinds": list(FAMILY_KINDS)}


@router.post("/hom", response_model=HomReport, tags=["Spreads"])
def hom(job: HomJob):
    return _run("hom", job)


@router.post("/resolve", response_model=ResolutionReport, tags=["Resolutions"])
def resolve(job: ResolveJob):
    return _run("resolve", job)


@router.post("/invariant", response_model=InvariantReport, tags=["Resolutions"])
def invariant(job: InvariantJob):
    return _run("invariant", job)


@router.post("/quiver", response_model=QuiverReport, tags=["Spreads"])
def quiver(job: QuiverJob, format: str = Query("json", pattern="^(json|dot)$")):
    """The quiver of a family, as JSON or as DOT text."""
    report = _run("quiver", job)
    if format == "dot":
        return PlainTextResponse(report.to_dot())
    return report


@router.post("/koszul", response_model=KoszulReport, tags=["Spreads"])
def koszul(job: KoszulJob):
    return _run("koszul", job)


@router.post("/functor", response_model=FunctorReport, tags=["Functors"])
def functor(job: FunctorJob):
    return _run("functor", job)


@router.post("/check-family", response_model=ExtendedClassReport, tags=["Functors"])
def check_family(job: CheckFamilyJob):
    return _run("check-family", job)


@router.post("/probe-precover", response_model=PrecoverProbeReport, tags=["Functors"])
def probe_precover(job: PrecoverJob):
    return _run("probe-precover", job)
