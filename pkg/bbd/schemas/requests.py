from typing import Dict, Optional

from pydantic import BaseModel, Field


class GraphRequest(BaseModel):
    graph: str = Field(..., description="digraph in bbd/1 text format")


class AnalyzeRequest(GraphRequest):
    k: int = Field(2, ge=0)


class CheckRequest(GraphRequest):
    condition: str
    params: Dict[str, Optional[float]] = Field(default_factory=dict)
