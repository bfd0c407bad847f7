"""
DefCoh - Scenario Parameters

A Scenario names one verification and carries every parameter it reads.
Unset bounds and orders fall back to the per-scenario defaults below, so
two scenarios with the same fields always run the same computation.
"""

from enum import Enum
from typing import Dict, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..core import scalars
from ..core.eulerpoincare import DEFAULT_FUZZ_COUNT, DEFAULT_MAX_DIM, DEFAULT_MAX_LENGTH, DEFAULT_SEED
from ..core.exceptions import InvalidParameters
from ..core.hochschild import CochainWindow


class ScenarioName(str, Enum):
    SRIDHARAN = "sridharan"
    QP_COHOMOLOGY = "qp-cohomology"
    QWEYL_CENTER = "qweyl-center"
    QWEYL_INFINITESIMAL = "qweyl-infinitesimal"
    QWEYL_DERIVATIONS = "qweyl-derivations"
    QWEYL_H2 = "qweyl-h2"
    EP_FUZZ = "ep-fuzz"
    CHI_TABLE = "chi-table"
    STAR_ASSOC = "star-assoc"


DEFAULT_BOUNDS: Dict[ScenarioName, Tuple[int, int]] = {
    ScenarioName.SRIDHARAN: (4, 4),
    ScenarioName.QP_COHOMOLOGY: (6, 6),
    ScenarioName.QWEYL_CENTER: (10, 10),
    ScenarioName.QWEYL_INFINITESIMAL: (5, 5),
    ScenarioName.QWEYL_DERIVATIONS: (6, 6),
    ScenarioName.QWEYL_H2: (5, 5),
    ScenarioName.EP_FUZZ: (0, 0),
    ScenarioName.CHI_TABLE: (4, 4),
    ScenarioName.STAR_ASSOC: (4, 4),
}

# Truncation order K per scenario
DEFAULT_ORDERS: Dict[ScenarioName, int] = {
    ScenarioName.SRIDHARAN: 4,
    ScenarioName.QP_COHOMOLOGY: 2,
    ScenarioName.QWEYL_CENTER: 0,
    ScenarioName.QWEYL_INFINITESIMAL: 1,
    ScenarioName.QWEYL_DERIVATIONS: 2,
    ScenarioName.QWEYL_H2: 0,
    ScenarioName.EP_FUZZ: 0,
    ScenarioName.CHI_TABLE: 0,
    ScenarioName.STAR_ASSOC: 6,
}

# Scenarios that need q to be symbolic or a root of unity of order >= 2
ROOT_OR_SYMBOLIC = {
    ScenarioName.QP_COHOMOLOGY,
    ScenarioName.QWEYL_CENTER,
    ScenarioName.QWEYL_DERIVATIONS,
}

MAX_ORDER = 12


class Scenario(BaseModel):
    """Validated parameters of one scenario run."""

    model_config = ConfigDict(frozen=True, extra="forbid", use_enum_values=False)

    name: ScenarioName
    q: str = "symbolic"
    hbar: str = "symbolic"
    bound: Optional[Tuple[int, int]] = None
    order: Optional[int] = Field(default=None, ge=0, le=MAX_ORDER)
    window: Optional[str] = None
    seed: int = Field(default=DEFAULT_SEED, ge=0)
    count: int = Field(default=DEFAULT_FUZZ_COUNT, ge=1)
    max_dim: int = Field(default=DEFAULT_MAX_DIM, ge=1)
    max_len: int = Field(default=DEFAULT_MAX_LENGTH, ge=2)
    workers: int = Field(default=1, ge=1)

    @field_validator("q", "hbar")
    @classmethod
    def _descriptor(cls, value: str) -> str:
        scalars.parse_descriptor(value)
        return value.strip()

    @field_validator("bound", mode="before")
    @classmethod
    def _bound(cls, value):
        if isinstance(value, str):
            parts = value.split(",")
            if len(parts) != 2:
                raise InvalidParameters(f"bound must look like Dx,Dy, got {value!r}")
            value = tuple(int(p) for p in parts)
        if value is not None and min(value) < 0:
            raise InvalidParameters(f"bounds must be nonnegative, got {value}")
        return value

    @field_validator("window")
    @classmethod
    def _window(cls, value: Optional[str]) -> Optional[str]:
        if value is not None:
            CochainWindow.parse(value, 0, (0, 0))
        return value

    @model_validator(mode="after")
    def _requirements(self) -> "Scenario":
        kind, value = scalars.parse_descriptor(self.q)
        if self.name in ROOT_OR_SYMBOLIC and not (kind == "symbolic" or (kind == "zeta" and value >= 2)):
            raise InvalidParameters(f"{self.name.value} needs q = symbolic or zeta:N with N >= 2, got {self.q}")
        if self.name == ScenarioName.QWEYL_H2 and not (kind == "zeta" and value >= 2):
            raise InvalidParameters(f"qweyl-h2 needs q = zeta:N with N >= 2, got {self.q}")
        if self.max_dim < 1 or self.max_len < 2:
            raise InvalidParameters("random complexes need max_dim >= 1 and max_len >= 2")
        return self

    @property
    def resolved_bound(self) -> Tuple[int, int]:
        return self.bound or DEFAULT_BOUNDS[self.name]

    @property
    def resolved_order(self) -> int:
        return DEFAULT_ORDERS[self.name] if self.order is None else self.order

    @property
    def root_order(self) -> Optional[int]:
        kind, value = scalars.parse_descriptor(self.q)
        return value if kind == "zeta" else None

    def echo(self) -> Dict[str, object]:
        """Parameters as they were used, defaults filled in; worker count is left out."""
        data = self.model_dump(mode="json")
        data["bound"] = list(self.resolved_bound)
        data["order"] = self.resolved_order
        data.pop("workers", None)
        return data
