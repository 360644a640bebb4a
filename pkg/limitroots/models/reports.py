from typing import Any, Dict, List, Optional
from pydantic import BaseModel, Field


class LimitPointRecord(BaseModel):
    """One exported limit point."""
    coords: List[float] = Field(description="Ambient coordinates on the cut hyperplane")
    barycentric: List[float] = Field(description="Coordinates over the normalized simple roots")
    q: float = Field(description="q(coords), zero up to rounding")

    # Provenance: "pair" (root_a, root_b), "word" (word, base) or "conic"
    source: str
    root_a: Optional[int] = None
    root_b: Optional[int] = None
    word: Optional[List[int]] = None


class LimitExport(BaseModel):
    """Limit point set written by the `limits` command."""
    system: Optional[str] = None
    rank: int
    mode: str = Field(description="e2, e2circ or f0")
    max_depth: int
    hyperplane: List[float]
    experimental: bool = False
    count: int
    points: List[LimitPointRecord]


class ComponentReport(BaseModel):
    generators: List[int]
    form_type: str


class ClassifyReport(BaseModel):
    """Output of the `classify` command."""
    system: Optional[str] = None
    rank: int
    signature: List[int] = Field(description="(positive, negative, zero) eigenvalue counts")
    eigenvalues: List[float]
    form_type: str
    hyperbolic: bool
    components: List[ComponentReport]
    radical_cone_trivial: bool
    radical_point: Optional[List[float]] = None

    # Filled when roots were enumerated
    max_depth: Optional[int] = None
    level_counts: Optional[List[int]] = None
    kappa: Optional[float] = None
    lam: Optional[float] = None


class SuiteResult(BaseModel):
    name: str
    checked: int
    violations: int
    details: Dict[str, Any] = Field(default_factory=dict)


class AuditReport(BaseModel):
    """Output of the `audit` command."""
    system: Optional[str] = None
    max_depth: int
    suites: List[SuiteResult]

    @property
    def violations(self) -> int:
        return sum(s.violations for s in self.suites)

    def summary(self) -> str:
        return f"{self.violations} violations"
