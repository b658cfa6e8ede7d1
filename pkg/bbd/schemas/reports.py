from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field


class Witness(BaseModel):
    vertices: List[str]
    degrees: List[int]
    common_neighbour: Optional[str] = None
    reason: str = ""


class ConditionReport(BaseModel):
    condition: str
    params: Dict[str, float | int] = Field(default_factory=dict)
    holds: bool
    vacuous: bool = False
    witness: Optional[Witness] = None


class TheoremCheck(BaseModel):
    theorem: str
    hypothesis_holds: bool
    failed_requirements: List[str] = Field(default_factory=list)
    conclusion: str
    exception: Optional[str] = None
    # Filled in by analysis once the solvers have run
    conclusion_holds: Optional[bool] = None
    excepted: bool = False
    contradiction: bool = False


class HallViolatorReport(BaseModel):
    direction: str
    S: List[str]
    neighborhood: List[str]


class CycleFactorReport(BaseModel):
    exists: bool
    cycles: List[str] = Field(default_factory=list)
    missing_direction: Optional[str] = None
    violator: Optional[HallViolatorReport] = None


class ConnectivityReport(BaseModel):
    strong: bool
    components: int
    unreachable: Optional[List[str]] = None


class TwoConnectivityReport(BaseModel):
    two_connected: bool
    connected: bool
    cut_vertex: Optional[str] = None
    separation: Optional[List[List[str]]] = None


class AnalysisReport(BaseModel):
    a: int
    order: int
    arc_count: int
    k: int
    wang_range: bool
    strong: ConnectivityReport
    two_connected_ug: Optional[TwoConnectivityReport] = None
    bk: ConditionReport
    dominating_pairs: List[List[str]]
    cycle_factor: CycleFactorReport
    hamiltonian: Optional[bool] = None
    hamiltonian_cycle: Optional[str] = None
    even_spectrum: Optional[List[int]] = None
    theorems: List[TheoremCheck] = Field(default_factory=list)
    omissions: List[str] = Field(default_factory=list)


class Violation(BaseModel):
    graph: str
    failed_property: str
    certificate: Dict[str, Any] = Field(default_factory=dict)
    # "bug" for proved statements, "finding" for open-problem search hits
    severity: str = "bug"


class AssertionResult(BaseModel):
    name: str
    passed: bool
    detail: str = ""


class ExperimentReport(BaseModel):
    experiment: str
    tool_version: str
    generator: str
    config: Dict[str, Any] = Field(default_factory=dict)
    instance_count: int = 0
    generation_failures: int = 0
    violations: List[Violation] = Field(default_factory=list)
    assertions: List[AssertionResult] = Field(default_factory=list)
    coverage: Dict[str, Any] = Field(default_factory=dict)
    completed: bool = True
    passed: bool = True
    wall_time_s: Optional[float] = None
    timestamp: Optional[str] = None

    def stable_dump(self) -> Dict[str, Any]:
        """Body without the run-dependent fields."""
        return self.model_dump(exclude={"wall_time_s", "timestamp"})
