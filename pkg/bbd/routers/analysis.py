from fastapi import APIRouter, Depends, HTTPException

from ..errors import BbdError, CapExceededError, ParseError, UnknownConditionError
from ..schemas.reports import AnalysisReport, ConditionReport, CycleFactorReport
from ..schemas.requests import AnalyzeRequest, CheckRequest, GraphRequest
from ..security import verify_api_key
from ..services.bbd_format import parse
from ..services.digraph import BipartiteDigraph
from ..services.experiments import analyze, check, cycle_factor_report
from ..services.factor import cycle_factor


router = APIRouter(tags=["analysis"], dependencies=[Depends(verify_api_key)])


def _load(text: str) -> BipartiteDigraph:
    try:
        return parse(text)
    except ParseError as e:
        raise HTTPException(status_code=400, detail=f"invalid graph: {e}")


def _reject(exc: BbdError) -> HTTPException:
    if isinstance(exc, UnknownConditionError):
        return HTTPException(status_code=404, detail=str(exc))
    if isinstance(exc, CapExceededError):
        return HTTPException(status_code=422, detail=str(exc))
    return HTTPException(status_code=400, detail=str(exc))


@router.post("/analyze")
def analyze_graph(body: AnalyzeRequest) -> AnalysisReport:
    d = _load(body.graph)
    try:
        return analyze(d, body.k)
    except BbdError as e:
        raise _reject(e)


@router.post("/check")
def check_condition(body: CheckRequest) -> ConditionReport:
    d = _load(body.graph)
    try:
        return check(d, body.condition, body.params)
    except BbdError as e:
        raise _reject(e)


@router.post("/cycle-factor")
def find_cycle_factor(body: GraphRequest) -> CycleFactorReport:
    return cycle_factor_report(cycle_factor(_load(body.graph)))
