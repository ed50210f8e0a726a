"""
Dataset configuration: which function file, schedule and CSV columns make
up a dataset, and how keys are derived from it.

The config file is line based, `key = value`, `#` starts a comment:

    function_file = funcs.pvf
    schedule_file = schedule.txt
    column.x1 = Girls
    percent.x5 = true
    policy = max-abs-real
    key_scale = 1
    submatrix_vars = x1,x2,x3

Relative file paths resolve against the directory holding the config file.
"""
import logging
from enum import Enum
from pathlib import Path
from typing import Dict, FrozenSet, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from src.config.environment import ENV_CONFIG
from src.errors import ConfigError, UnknownVariable, WrongCount
from src.funcfile.polynomial import VectorField
from src.keying.policies import MaxAbsReal, SelectionPolicy, parse_policy
from src.utils.file_utils import PathLike, read_text

logger = logging.getLogger(__name__)

SCALAR_KEYS = {"function_file", "schedule_file", "policy", "key_scale", "imag_tol", "det_tol", "submatrix_vars", "layout"}
BOOLEAN_TEXT = {"true": True, "yes": True, "1": True, "false": False, "no": False, "0": False}


class TableLayout(str, Enum):
    ROWS = "rows"  # one record per CSV row
    COLUMNS = "columns"  # one record per CSV column, first column holds labels


class DatasetConfig(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    function_file: Path
    schedule_file: Path
    column_map: Dict[str, str]  # variable -> CSV column name
    percent_columns: FrozenSet[str] = frozenset()
    policy: SelectionPolicy = Field(default_factory=MaxAbsReal)
    key_scale: int = Field(default_factory=lambda: ENV_CONFIG["key_scale"], gt=0)
    imag_tol: float = Field(default_factory=lambda: ENV_CONFIG["imag_tol"], ge=0.0)
    det_tol: float = Field(default_factory=lambda: ENV_CONFIG["det_tolerance"], ge=0.0)
    submatrix_vars: Optional[Tuple[str, ...]] = None
    layout: TableLayout = TableLayout.ROWS

    @field_validator("column_map")
    @classmethod
    def columns_distinct(cls, column_map):
        names = list(column_map.values())
        duplicated = sorted({n for n in names if names.count(n) > 1})
        if duplicated:
            raise ConfigError(f"CSV column(s) {duplicated} mapped to more than one variable")
        return column_map

    def validate_against(self, field: VectorField) -> "DatasetConfig":
        """
        Check the config against the parsed function file.

        Returns:
            The config, with submatrix_vars defaulted to the first m variables when unset
        """
        unmapped = [v for v in field.variables if v not in self.column_map]
        if unmapped:
            raise ConfigError(f"no CSV column mapped for variable(s) {unmapped}")
        for name in list(self.column_map) + sorted(self.percent_columns):
            if name not in field.variables:
                raise UnknownVariable(name)

        submatrix_vars = self.submatrix_vars or field.variables[: field.m]
        if len(submatrix_vars) != field.m:
            raise WrongCount(f"submatrix_vars needs {field.m} variables, got {len(submatrix_vars)}")
        for var in submatrix_vars:
            if var not in field.variables:
                raise UnknownVariable(var)
        # column_map is reordered to declaration order
        column_map = {v: self.column_map[v] for v in field.variables}
        return self.model_copy(update={"submatrix_vars": tuple(submatrix_vars), "column_map": column_map})


def _parse_bool(key: str, text: str) -> bool:
    try:
        return BOOLEAN_TEXT[text.lower()]
    except KeyError:
        raise ConfigError(f"'{key}' expects true or false, got '{text}'") from None


def parse_dataset_config(text: str, base_dir: PathLike = ".") -> DatasetConfig:
    """
    Parse config file text.

    Args:
        text: Config file contents
        base_dir: Directory that relative file paths resolve against

    Returns:
        DatasetConfig (not yet validated against a function file)
    """
    base_dir = Path(base_dir)
    values: Dict[str, object] = {}
    column_map: Dict[str, str] = {}
    percent = set()

    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = (part.strip() for part in line.partition("="))
        if not sep or not key or not value:
            raise ConfigError(f"line {number}: expected 'key = value', got '{line}'")
        prefix, dot, var = key.partition(".")
        if dot and not var:
            raise ConfigError(f"line {number}: missing variable name in '{key}'")

        if dot and prefix == "column":
            if var in column_map:
                raise ConfigError(f"line {number}: column for '{var}' given twice")
            column_map[var] = value
        elif dot and prefix == "percent":
            if _parse_bool(key, value):
                percent.add(var)
        elif key in SCALAR_KEYS:
            if key in values:
                raise ConfigError(f"line {number}: '{key}' given twice")
            values[key] = value
        else:
            raise ConfigError(f"line {number}: unknown key '{key}'")

    for required in ("function_file", "schedule_file"):
        if required not in values:
            raise ConfigError(f"missing required key '{required}'")
    if not column_map:
        raise ConfigError("no column.<var> entries")

    if "policy" in values:
        values["policy"] = parse_policy(values["policy"])
    if "submatrix_vars" in values:
        values["submatrix_vars"] = tuple(v.strip() for v in values["submatrix_vars"].split(",") if v.strip())
    if "layout" in values:
        try:
            values["layout"] = TableLayout(values["layout"])
        except ValueError:
            raise ConfigError(f"layout must be 'rows' or 'columns', got '{values['layout']}'") from None
    for key in ("function_file", "schedule_file"):
        values[key] = base_dir / values[key]

    try:
        return DatasetConfig(column_map=column_map, percent_columns=frozenset(percent), **values)
    except ValidationError as e:
        problems = "; ".join(f"{'.'.join(map(str, err['loc']))}: {err['msg']}" for err in e.errors())
        raise ConfigError(f"invalid config: {problems}") from None


def load_dataset_config(path: PathLike) -> DatasetConfig:
    path = Path(path)
    config = parse_dataset_config(read_text(path), base_dir=path.parent)
    logger.info(f"Loaded dataset config from {path} (policy {config.policy}, scale {config.key_scale})")
    return config
