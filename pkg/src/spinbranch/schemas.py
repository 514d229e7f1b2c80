"""Request and response models shared by the HTTP service and the CLI.
Half-integers travel as strings such as "3/2"."""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

Sign = Literal["+", "-"]
RepKind = Literal["ds", "pij", "ps", "aq"]


class Check(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    name: str
    passed: bool = Field(alias="pass")
    residual: Optional[float] = None


class RepSpec(BaseModel):
    """A representation label: ds (gamma, sign), pij (gamma, j), ps (mu, nu)
    or aq (j, lam)."""

    m: int = Field(gt=1)
    rep: RepKind
    gamma: Optional[list[str]] = None
    sign: Optional[Sign] = None
    j: Optional[int] = None
    mu: Optional[list[str]] = None
    nu: Optional[str] = None
    lam: Optional[list[str]] = None


class ClassifyRequest(BaseModel):
    m: int = Field(gt=1)
    gamma: list[str]


class BranchRequest(RepSpec):
    pass


class OrbitImageRequest(BaseModel):
    m: int = Field(gt=1)
    kind: str
    a: list[str]
    sign: Sign = "+"
    b: Optional[list[float]] = None
    tol: float = 1e-9


class DufloRequest(RepSpec):
    bound: str
    singleton_samples: int = Field(default=0, ge=0)
    seed: int = 0


class AnalysisRequest(BaseModel):
    checks: Optional[list[str]] = None
    side: int = 64
    half_width: float = 12.0
    seed: int = 0
    tolerances: dict[str, float] = Field(default_factory=dict)


class SelfTestRequest(BaseModel):
    seed: int = 0


class Irreducible(BaseModel):
    label: str
    unitarizable: bool


class ClassifyResult(BaseModel):
    gamma: list[str]
    infl_class: str = Field(alias="class")
    j: Optional[int] = None
    irreducibles: list[Irreducible]

    model_config = ConfigDict(populate_by_name=True)


class Component(BaseModel):
    tau: list[str]


class BranchResult(BaseModel):
    rep: str
    components: list[Component]


class OrbitImageResult(BaseModel):
    """Slot intervals appear as extra keys x1, x2, ... holding [lo, hi]."""

    model_config = ConfigDict(extra="allow")

    orbit: str
    family: str
    pf: str
    open: dict[str, list[bool]] = Field(default_factory=dict)
    depth0: list[str] = Field(default_factory=list)
    point: Optional[dict] = None


class OrbitSpec(BaseModel):
    kind: str
    a: list[str]
    sign: int = 1
    tag: str


class Mismatch(BaseModel):
    tau: list[str]
    in_branch: bool
    in_image: bool


class DufloResult(BaseModel):
    rep: str
    orbit: OrbitSpec
    matched: bool
    candidates: int
    branch_set: list[list[str]]
    orbit_set: list[list[str]]
    mismatches: list[Mismatch]
    singleton: Optional[bool] = None


class BatteryResult(BaseModel):
    passed: int
    failed: int


REQUESTS = {
    "classify": ClassifyRequest,
    "branch": BranchRequest,
    "orbit-image": OrbitImageRequest,
    "duflo-verify": DufloRequest,
    "analysis-verify": AnalysisRequest,
    "self-test": SelfTestRequest,
}

RESULTS = {
    "classify": ClassifyResult,
    "branch": BranchResult,
    "orbit-image": OrbitImageResult,
    "duflo-verify": DufloResult,
    "analysis-verify": BatteryResult,
    "self-test": BatteryResult,
}


class Report(BaseModel):
    """Top-level envelope {"request", "result", "checks"}."""

    command: str
    request: dict
    result: dict
    checks: list[Check] = Field(default_factory=list)
    ok: bool = True

    def typed(self) -> tuple[BaseModel, BaseModel]:
        """Re-parse request and result into their per-command models."""
        return REQUESTS[self.command].model_validate(self.request), RESULTS[self.command].model_validate(self.result)
