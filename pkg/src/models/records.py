from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from typing import Optional, List, Dict, Tuple
from datetime import datetime
from enum import Enum

from src.errors import DuplicateName, Overflow, UnknownName
from src.funcfile.polynomial import Point, VectorField

INT64_MAX = 2 ** 63 - 1
INT64_MIN = -(2 ** 63)


class ScheduleEntry(BaseModel):
    """One published partial derivative: label = d function / d variable."""
    model_config = ConfigDict(frozen=True)

    label: str
    function: str
    variable: str


class Schedule(BaseModel):
    """Which (function, variable) partial derivatives are published, in order."""
    model_config = ConfigDict(frozen=True)

    entries: Tuple[ScheduleEntry, ...] = ()

    @field_validator("entries")
    @classmethod
    def labels_distinct(cls, entries):
        seen = set()
        for entry in entries:
            if entry.label in seen:
                raise DuplicateName(entry.label)
            seen.add(entry.label)
        return entries

    @property
    def labels(self) -> List[str]:
        return [entry.label for entry in self.entries]

    def __len__(self) -> int:
        return len(self.entries)

    def validate_against(self, field: VectorField) -> "Schedule":
        """Check every entry names a declared function and variable."""
        for entry in self.entries:
            if entry.function not in field.function_names:
                raise UnknownName(f"schedule entry '{entry.label}' references unknown function '{entry.function}'")
            if entry.variable not in field.variables:
                raise UnknownName(f"schedule entry '{entry.label}' references unknown variable '{entry.variable}'")
        return self


class PerturbedRecord(BaseModel):
    """Published derivative values keyed by schedule label, in schedule order."""
    model_config = ConfigDict(frozen=True)

    values: Dict[str, float] = {}

    def vector(self, schedule: Schedule) -> List[float]:
        if list(self.values) != schedule.labels:
            raise UnknownName(f"record labels {list(self.values)} do not match schedule {schedule.labels}")
        return [self.values[label] for label in schedule.labels]


class ReconstructionMethod(str, Enum):
    AFFINE = "affine"
    NEWTON = "newton"


class ReconstructionReport(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    point: Point
    residual: float = Field(ge=0.0)  # infinity norm of the derivative-map mismatch
    iterations: int = Field(ge=0)
    method: ReconstructionMethod

    @model_validator(mode="after")
    def affine_has_no_iterations(self):
        if self.method == ReconstructionMethod.AFFINE and self.iterations != 0:
            raise ValueError("affine reconstruction performs no iterations")
        return self


class KeyScalar(BaseModel):
    """Quantized eigenvalue: the key is value / scale."""
    model_config = ConfigDict(frozen=True)

    value: int
    scale: int = Field(default=1000, gt=0)

    @field_validator("value")
    @classmethod
    def fits_int64(cls, value):
        if not INT64_MIN <= value <= INT64_MAX:
            raise Overflow(f"key value {value} does not fit in a signed 64-bit integer")
        return value

    def to_text(self) -> str:
        return f"{self.value}/{self.scale}"

    def as_real(self) -> float:
        return self.value / self.scale


class SpectrumValue(BaseModel):
    re: float
    im: float = 0.0


class KeygenReport(BaseModel):
    """Everything computed on the way from a point to a key."""
    row_labels: List[str]
    col_labels: List[str]
    matrix: List[List[float]]
    det: float
    invertible: bool
    spectrum: List[SpectrumValue]
    chosen_lambda: float
    policy: str
    key: KeyScalar


class PipelineLogEntry(BaseModel):
    """Represents a log entry for pipeline execution."""
    timestamp: datetime = Field(default_factory=datetime.utcnow)
    step: str  # e.g. 'perturb', 'eigenvalues', 'encrypt'
    action: str  # 'started', 'completed', 'failed'
    details: Optional[str] = None


class PipelineReport(BaseModel):
    row_index: int
    perturbed: PerturbedRecord
    keygen: KeygenReport
    message_length: int
    ciphertext_length: int
    verified: bool
    duration_seconds: float  # informational only
    files: Dict[str, str] = {}
    log: List[PipelineLogEntry] = []
    created_at: datetime = Field(default_factory=datetime.utcnow)


class TimingSample(BaseModel):
    size_bytes: int
    seconds: float
