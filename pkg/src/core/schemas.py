"""Wire formats (JSON) for scalars, classes, tuples, reports and law-suite results."""

import json
import re
from pathlib import Path
from typing import Any, List, Literal, Optional, Tuple, Type, TypeVar, Union

from pydantic import BaseModel, Field, ValidationError, model_validator

from .errors import InputError

ModelT = TypeVar("ModelT", bound=BaseModel)

Entry = Tuple[float, float]
MatrixRows = List[List[Entry]]

_ALEPH_SHORTHAND = re.compile(r"aleph_?(\d+)")


class ScalarModel(BaseModel):
    """Extended scalar: {"type":"rational","num":N,"den":D} or {"type":"aleph","index":k}."""
    type: Literal["rational", "aleph"] = Field(..., description="Scalar kind")
    num: Optional[int] = Field(None, ge=0, description="Numerator (rational only)")
    den: Optional[int] = Field(None, gt=0, description="Denominator (rational only)")
    index: Optional[int] = Field(None, ge=0, description="Aleph index (aleph only)")

    @model_validator(mode="before")
    @classmethod
    def accept_shorthand(cls, data: Any) -> Any:
        """Allow "aleph0", plain integers and "p/q" strings in hand-written files."""
        if isinstance(data, bool):
            return data
        if isinstance(data, int):
            return {"type": "rational", "num": data, "den": 1}
        if isinstance(data, str):
            text = data.strip().lower()
            match = _ALEPH_SHORTHAND.fullmatch(text)
            if match:
                return {"type": "aleph", "index": int(match.group(1))}
            num, _, den = text.partition("/")
            try:
                return {"type": "rational", "num": int(num), "den": int(den or 1)}
            except ValueError:
                return data
        return data

    @model_validator(mode="after")
    def check_fields(self) -> "ScalarModel":
        if self.type == "rational" and (self.num is None or self.den is None):
            raise ValueError("rational scalars need num and den")
        if self.type == "aleph" and self.index is None:
            raise ValueError("aleph scalars need index")
        return self


class LabelModel(BaseModel):
    """One prime label and its multiplicity inside a class file."""
    id: str = Field(..., min_length=1, description="Label identifier")
    kind: Literal["atom", "semiprime-ii1", "semiprime-ii-inf", "fractal"]
    dim: Union[int, Literal["omega"]] = Field(..., description="Atom dimension or 'omega'")
    mult: ScalarModel


class ClassModel(BaseModel):
    """Multiplicity function over prime labels."""
    labels: List[LabelModel] = Field(default_factory=list)


class TupleModel(BaseModel):
    """N complex d x d matrices, row-major, entries as [re, im]."""
    n: int = Field(..., ge=1, description="Tuple length N")
    dim: int = Field(..., ge=0, description="Matrix size d")
    matrices: List[MatrixRows] = Field(default_factory=list)

    @model_validator(mode="after")
    def check_shapes(self) -> "TupleModel":
        if len(self.matrices) != self.n:
            raise ValueError(f"expected {self.n} matrices, found {len(self.matrices)}")
        for j, rows in enumerate(self.matrices):
            if len(rows) != self.dim or any(len(row) != self.dim for row in rows):
                raise ValueError(f"matrix {j} is not {self.dim}x{self.dim}")
        return self


class BlockModel(BaseModel):
    """One isotypic block of a decomposition report."""
    atom: TupleModel
    multiplicity: int = Field(..., ge=1)
    isometry: MatrixRows = Field(..., description="d x (multiplicity * atom.dim) isometry")


class ReportModel(BaseModel):
    """Isotypic decomposition report."""
    n: int
    dim: int
    blocks: List[BlockModel] = Field(default_factory=list)
    residual: float = Field(..., ge=0)


class SplitModel(BaseModel):
    """Ideal-relative split of a tuple."""
    ideal: str
    part: TupleModel
    complement: TupleModel
    part_projection: MatrixRows
    complement_projection: MatrixRows


class PartitionPartModel(BaseModel):
    """E^type_level of a partition of unity."""
    type: Literal["I", "II", "III"]
    level: ScalarModel
    part: ClassModel


class PartitionModel(BaseModel):
    """Level sets of a class together with its semiminimal part."""
    e_sm: ClassModel
    parts: List[PartitionPartModel] = Field(default_factory=list)


class FlagsModel(BaseModel):
    """Type and structure flags of a class."""
    flags: List[str] = Field(default_factory=list)


class LawResultModel(BaseModel):
    """Outcome of one algebraic law over the enumerated cases."""
    law: str
    cases: int = Field(..., ge=0)
    failures: List[str] = Field(default_factory=list)
    expected_failure: bool = Field(False, description="Law is a documented counterexample")


class LawReportModel(BaseModel):
    """Outcome of the exhaustive law suite."""
    registry_size: int
    mult_set: List[str]
    laws: List[LawResultModel] = Field(default_factory=list)

    def unexpected_failures(self) -> List[LawResultModel]:
        return [r for r in self.laws if bool(r.failures) != r.expected_failure]


class RegistryEntryModel(BaseModel):
    """Index row for one stored atom."""
    id: str
    n: int
    dim: int
    bucket: str = Field(..., description="Hash of the rounded invariant key")
    file: str


class RegistryIndexModel(BaseModel):
    """registry/index.json"""
    next_id: int = 0
    atoms: List[RegistryEntryModel] = Field(default_factory=list)


def parse_json(model_cls: Type[ModelT], text: str, source: str = "<input>") -> ModelT:
    """Parse and validate JSON, converting every failure into InputError."""
    try:
        return model_cls.model_validate(json.loads(text))
    except json.JSONDecodeError as e:
        raise InputError(f"{source}: invalid JSON: {e}") from e
    except ValidationError as e:
        raise InputError(f"{source}: {e.error_count()} validation error(s): {e}") from e


def load_json(model_cls: Type[ModelT], path: Path) -> ModelT:
    """Read a JSON file into a model."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InputError(f"Cannot read {path}: {e}") from e
    return parse_json(model_cls, text, source=str(path))


def _float_text(x: float) -> str:
    text = format(x, ".17g")
    return text if any(c in text for c in ".en") else text + ".0"


def _canonical(value: Any) -> str:
    if isinstance(value, float):
        return _float_text(value)
    if isinstance(value, dict):
        items = (
            f"{json.dumps(k, ensure_ascii=False)}: {_canonical(v)}"
            for k, v in sorted(value.items())
        )
        return "{" + ", ".join(items) + "}"
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_canonical(v) for v in value) + "]"
    return json.dumps(value, ensure_ascii=False)


def to_canonical_json(model: BaseModel) -> str:
    """Deterministic JSON: sorted keys, no None fields, floats to 17 significant digits."""
    return _canonical(model.model_dump(mode="json", exclude_none=True))
