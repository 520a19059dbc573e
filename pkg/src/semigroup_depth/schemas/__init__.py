"""
Pydantic schemas for JSON input/output validation
"""
from pydantic import BaseModel, ConfigDict, field_validator
from typing import Any, Dict, List, Optional, Union


class SemigroupInput(BaseModel):
    matrix: List[List[int]]  # d × e, columns are generators

    @field_validator("matrix")
    @classmethod
    def check_rectangular(cls, value: List[List[int]]) -> List[List[int]]:
        if not value or not value[0]:
            raise ValueError("matrix must be nonempty")
        if any(len(row) != len(value[0]) for row in value):
            raise ValueError("matrix rows must have equal length")
        if any(x < 0 for row in value for x in row):
            raise ValueError("matrix entries must be non-negative")
        return value


class DescriptorSchema(BaseModel):
    ambient_dim: int
    num_gens: int
    generators: List[List[int]]
    extremal: List[int]  # 1-based
    nonextremal: List[int]  # 1-based


class FactorizationWitness(BaseModel):
    element: List[int]
    factorization: Optional[List[int]] = None


class AperyReport(BaseModel):
    delta: List[int]
    maximal: bool
    kind: str
    witness: Optional[FactorizationWitness] = None


class BettiEntry(BaseModel):
    i: int
    degree: List[int]
    mult: int


class BettiTableSchema(BaseModel):
    betti: List[BettiEntry]
    scan_bound: Optional[int] = None
    certified: bool
    completeness: str
    field: str = "rational"


class CycleTerm(BaseModel):
    coeff: Union[int, str]  # "p/q" when not integral
    element: List[int]


class CycleSchema(BaseModel):
    degree: List[int]
    terms: Dict[str, List[CycleTerm]]


class CertificateSchema(BaseModel):
    depth: int
    method: str
    witness: Optional[Dict[str, Any]] = None
    scan_bound: Optional[int] = None
    inconclusive: bool = False


class ConjectureRecordSchema(BaseModel):
    depth: int
    subsets_tried: List[AperyReport]
    witness: Optional[AperyReport] = None
    counterexample_candidate: bool


class InstanceRecord(BaseModel):
    model_config = ConfigDict(extra='forbid')

    origin: str  # "random" or a file/preset name
    seed: Optional[int] = None
    index: Optional[int] = None
    matrix: List[List[int]]
    certificate: Optional[CertificateSchema] = None
    conjecture: Optional[ConjectureRecordSchema] = None
    error: Optional[str] = None
    timings: Dict[str, float] = {}
    timestamp: Optional[str] = None

    def reproducible_dump(self) -> Dict[str, Any]:
        """実行ごとに変わる timings と timestamp を除いた内容"""
        return self.model_dump(exclude={"timings", "timestamp"})


class ErrorResponse(BaseModel):
    error: str
    message: str
