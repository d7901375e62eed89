"""
Pydantic schemas for check results and CLI reports
"""

from pydantic import BaseModel, Field
from typing import Optional, List, Dict, Any
from enum import Enum


class ReportFormat(str, Enum):
    """Available CLI output formats"""
    TEXT = "text"
    JSON = "json"
    SCHEMA = "schema"


class ValidationReport(BaseModel):
    """Outcome of validating a candidate ortholattice or orthospace"""
    valid: bool
    law: Optional[str] = Field(default=None, description="First violated law")
    witness: List[str] = Field(default_factory=list, description="Element names witnessing the failure")
    message: str = ""
    size: int = 0


class SublatticeWitness(BaseModel):
    """A five-element sublattice isomorphic to M3 or N5"""
    kind: str  # "M3" or "N5"
    elements: List[int]
    names: List[str]


class LawWitness(BaseModel):
    """Elements on which an identity or implication fails"""
    law: str
    elements: List[int]
    names: List[str]


class SpectralReport(BaseModel):
    """Literal spectral-space checks of a finite space"""
    t0: bool
    compact: bool
    coherent: bool
    sober: bool
    open_count: int
    witness: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.t0 and self.compact and self.coherent and self.sober


class AxiomResult(BaseModel):
    """One axiom of a UVO-space"""
    axiom: int
    name: str
    passed: bool
    witness: Optional[str] = None


class UvoAxiomReport(BaseModel):
    """Per-axiom verdicts of a UVO-space check"""
    points: int
    cor_size: int
    axioms: List[AxiomResult]

    @property
    def passed(self) -> bool:
        return all(a.passed for a in self.axioms)

    def failures(self) -> List[AxiomResult]:
        return [a for a in self.axioms if not a.passed]


class MapReport(BaseModel):
    """Flags of a point map between orthospaces"""
    spectral: bool
    spectral_literal: bool
    forth: bool
    back: bool
    back_literal: bool
    order_back: bool
    witness: Optional[str] = None

    @property
    def verified(self) -> bool:
        return self.spectral and self.forth and self.back


class CheckResult(BaseModel):
    """One named check of the verification suite"""
    name: str
    passed: bool
    detail: str = ""
    witness: Optional[str] = None
    seconds: float = 0.0


class CommandReport(BaseModel):
    """Machine-readable result of one CLI command"""
    command: str
    ok: bool
    exit_code: int
    summary: List[str] = Field(default_factory=list)
    checks: List[CheckResult] = Field(default_factory=list)
    data: Dict[str, Any] = Field(default_factory=dict)
