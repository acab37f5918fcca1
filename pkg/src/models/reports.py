"""
Report Models

Schema-tagged pydantic models for everything the engine emits or reads:
rationality profiles, verdicts, class-count reports, certificates, bound
evaluations, corpus manifests and run reports.
"""

import json
from fractions import Fraction
from typing import Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.config.settings import SCHEMA_TAGS, TOOL_VERSION


def fraction_str(value: Union[Fraction, int]) -> str:
    value = Fraction(value)
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


class Report(BaseModel):
    """Base for emitted documents; `schema` is serialized under its alias."""

    model_config = ConfigDict(populate_by_name=True)

    schema_tag: str = Field(default="", alias="schema")

    def to_json(self) -> str:
        return json.dumps(self.model_dump(mode="json", by_alias=True), sort_keys=True, indent=2)


# ==================== RATIONALITY ====================

class RationalityCounts(BaseModel):
    k: int
    parat: int
    pprime_parat: int
    b0_pprime_parat: int
    prat: int
    cl_pareg: int
    cl_preg: int


class RationalityProfile(Report):
    schema_tag: str = Field(default=SCHEMA_TAGS["profile"], alias="schema")
    group: str
    fingerprint: str
    order: int
    p: int
    degrees: List[int]
    levels: List[int]
    p_prime_degree: List[bool]
    blocks: List[int]
    principal_block: int
    block_degenerate: bool
    class_levels: List[int]
    counts: RationalityCounts
    embedding: Optional[Dict[str, Any]] = None


class SpSet(BaseModel):
    p: int
    values: List[int]


class DetectorVerdict(BaseModel):
    p: int
    count: int
    in_sp: bool
    predicted_cyclic: bool
    actual_cyclic: bool
    agree: bool
    sylow_order: int

    @model_validator(mode="after")
    def _agreement(self):
        if self.agree != (self.predicted_cyclic == self.actual_cyclic):
            raise ValueError("agree must equal predicted_cyclic == actual_cyclic")
        return self


class McKayNavarroReport(BaseModel):
    p: int
    lhs: int
    rhs: int
    equal: bool
    normalizer_order: int
    quotient_order: int


class CheckReport(BaseModel):
    """Outcome of one proved statement checked on one input."""

    name: str
    p: Optional[int] = None
    applicable: bool = True
    passed: bool = True
    facts: Dict[str, Any] = Field(default_factory=dict)
    violations: List[str] = Field(default_factory=list)

    def fail(self, message: str) -> None:
        self.passed = False
        self.violations.append(message)


class AnalysisReport(Report):
    schema_tag: str = Field(default=SCHEMA_TAGS["analysis"], alias="schema")
    tool_version: str = TOOL_VERSION
    profile: RationalityProfile
    detector: Optional[DetectorVerdict] = None
    mckay_navarro: Optional[McKayNavarroReport] = None
    theorem_1_1: Optional[CheckReport] = None
    statistics: Optional[Dict[str, Any]] = None
    warnings: List[str] = Field(default_factory=list)


# ==================== AFFINE ====================

class OrbitRecord(BaseModel):
    representative: List[int]
    size: int
    stabilizer_order: int
    k_stabilizer: int


class ClassCountReport(Report):
    schema_tag: str = Field(default=SCHEMA_TAGS["classcount"], alias="schema")
    p: int
    n: int
    h_order: int
    k_h: Optional[int] = None
    k_hv: int
    method: Literal["orbit_reps", "perm_oracle", "closed_form"]
    orbit_count: Optional[int] = None
    orbits: List[OrbitRecord] = Field(default_factory=list)
    clifford_lower: Optional[str] = None
    sandwich_upper: Optional[str] = None
    sandwich_checked: bool = False
    sp_values: Optional[List[int]] = None
    in_sp: Optional[bool] = None

    @model_validator(mode="after")
    def _orbit_sums(self):
        if self.orbits:
            if sum(o.size for o in self.orbits) != self.p ** self.n:
                raise ValueError("orbit sizes do not sum to p^n")
            if sum(o.k_stabilizer for o in self.orbits) != self.k_hv:
                raise ValueError("k(HV) differs from the sum of stabilizer class numbers")
        return self


class LowerBoundCertificate(Report):
    schema_tag: str = Field(default=SCHEMA_TAGS["certificate"], alias="schema")
    p: int
    n: int
    h_order: int
    k_h: int
    orbit_count: int
    bound: int
    exceeds_p: bool


class PrimeConditionVerdict(BaseModel):
    p: int
    cond_i: bool
    cond_i_witness: Optional[int] = None
    cond_ii: bool
    cond_ii_witness: Optional[int] = None
    any: bool
    caveat: str = "the equivalence with k(HV) <= p is established for p > 7300000"


# ==================== BOUNDS ====================

class BoundEvaluation(BaseModel):
    name: str
    inputs: Dict[str, Any]
    lower: str
    upper: str
    floor: int
    ceiling: int
    exact: Optional[str] = None
    perfect_square: Optional[bool] = None


# ==================== INPUTS AND CORPUS ====================

class GroupInput(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    schema_tag: Optional[str] = Field(default=None, alias="schema")
    name: Optional[str] = None
    degree: int = Field(ge=1)
    generators: List[List[int]] = Field(default_factory=list)


class MatGroupInput(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    schema_tag: Optional[str] = Field(default=None, alias="schema")
    name: Optional[str] = None
    p: int = Field(ge=2)
    n: int = Field(ge=1)
    generators: List[List[List[int]]] = Field(default_factory=list)


class CorpusEntry(BaseModel):
    id: str
    kind: Literal["group", "matgroup"] = "group"
    construct: Optional[Union[Dict[str, Any], List[Any]]] = None
    group: Optional[GroupInput] = None
    matgroup: Optional[Union[MatGroupInput, Dict[str, Any]]] = None
    file: Optional[str] = None
    primes: List[int] = Field(default_factory=list)
    tags: List[str] = Field(default_factory=list)
    # when set, only these suites run on the entry
    suites: List[str] = Field(default_factory=list)

    @model_validator(mode="after")
    def _one_source(self):
        sources = [s for s in (self.construct, self.group, self.matgroup, self.file) if s is not None]
        if len(sources) != 1:
            raise ValueError("exactly one of construct, group, matgroup or file is required")
        if self.matgroup is not None:
            self.kind = "matgroup"
        return self


class CorpusManifest(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    schema_tag: str = Field(default=SCHEMA_TAGS["manifest"], alias="schema")
    version: str
    entries: List[CorpusEntry]

    @field_validator("entries")
    @classmethod
    def _unique_ids(cls, entries: List[CorpusEntry]) -> List[CorpusEntry]:
        seen = set()
        for entry in entries:
            if entry.id in seen:
                raise ValueError(f"duplicate corpus id '{entry.id}'")
            seen.add(entry.id)
        return entries

    def get(self, entry_id: str) -> Optional[CorpusEntry]:
        return next((e for e in self.entries if e.id == entry_id), None)


class EntryResult(BaseModel):
    id: str
    suite: str
    status: Literal["pass", "fail", "skip", "error", "flag"]
    fingerprint: Optional[str] = None
    checks: List[CheckReport] = Field(default_factory=list)
    details: Dict[str, Any] = Field(default_factory=dict)
    message: Optional[str] = None


class RunReport(Report):
    schema_tag: str = Field(default=SCHEMA_TAGS["run"], alias="schema")
    tool_version: str = TOOL_VERSION
    manifest_version: str
    suites: List[str]
    results: List[EntryResult] = Field(default_factory=list)
    failures: List[str] = Field(default_factory=list)
    flagged: List[str] = Field(default_factory=list)
