"""
Tabular ingestion and export.

CSV files are read with pandas as plain strings; every cell is then parsed
as a decimal so failures can name their row and column. Percent columns are
scaled with decimal arithmetic, so writing a table back out and reloading
it reproduces identical floats.
"""
import io
import logging
import math
import re
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from typing import List, Sequence, Tuple

import pandas as pd

from src.config.dataset_config import DatasetConfig, TableLayout
from src.errors import (
    ArityMismatch,
    EmptyTable,
    MalformedTable,
    MissingColumn,
    NonFiniteValue,
    NonNumericCell,
    WrongCount,
)
from src.funcfile.polynomial import Point
from src.linalg.matrix import format_real

logger = logging.getLogger(__name__)

HUNDRED = Decimal(100)
PARSER_LINE_RE = re.compile(r"line (\d+)")


@dataclass(frozen=True)
class TableDocument:
    """Records after normalization: one row per record, columns are variable names."""

    columns: Tuple[str, ...]
    rows: Tuple[Tuple[float, ...], ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "columns", tuple(self.columns))
        object.__setattr__(self, "rows", tuple(tuple(float(v) for v in row) for row in self.rows))
        for number, row in enumerate(self.rows, start=1):
            if len(row) != len(self.columns):
                raise ArityMismatch(f"row {number} has {len(row)} values for {len(self.columns)} columns")
            for column, value in zip(self.columns, row):
                if not math.isfinite(value):
                    raise NonFiniteValue(f"row {number}, column '{column}': value is not finite")

    def __len__(self) -> int:
        return len(self.rows)

    def row_mapping(self, index: int) -> dict:
        """Column name -> value for a 0-based row index."""
        if not 0 <= index < len(self.rows):
            raise WrongCount(f"row {index} is out of range for a table of {len(self.rows)} rows")
        return dict(zip(self.columns, self.rows[index]))

    def row_point(self, index: int, variables: Sequence[str]) -> Point:
        return Point.for_variables(variables, self.row_mapping(index))


def _parse_cell(text: str, row: int, column: str, percent: bool) -> float:
    try:
        value = Decimal(text.strip())
    except InvalidOperation:
        raise NonNumericCell(row, column, text) from None
    if not value.is_finite():
        raise NonNumericCell(row, column, text)
    return float(value / HUNDRED) if percent else float(value)


def _physical_lines(csv_text: str) -> List[int]:
    return [number for number, line in enumerate(csv_text.splitlines(), start=1) if line.strip()]


def read_csv_frame(csv_text: str, what: str = "table") -> pd.DataFrame:
    """
    Read CSV text as strings, taking the first line as the header.

    Every record must have exactly as many fields as the header.

    Raises:
        EmptyTable: the text has no header line
        MalformedTable: a record has more or fewer fields than the header,
            or the header repeats a name
    """
    if not csv_text.strip():
        raise EmptyTable(f"{what} has no header line")
    try:
        raw = pd.read_csv(
            io.StringIO(csv_text),
            header=None,
            index_col=False,
            dtype=str,
            keep_default_na=False,
            skipinitialspace=True,
            skip_blank_lines=True,
        )
    except pd.errors.ParserError as e:
        found = PARSER_LINE_RE.search(str(e))
        raise MalformedTable(f"{what}: {str(e).strip()}", int(found.group(1)) if found else None) from None

    width = raw.shape[1]
    short = raw.isna().any(axis=1)
    if short.any():
        index = int(short.to_numpy().argmax())
        lines = _physical_lines(csv_text)
        line = lines[index] if len(lines) == len(raw) else index + 1
        fields = int(raw.iloc[index].notna().sum())
        raise MalformedTable(f"{what}: expected {width} fields, saw {fields}", line)

    header = [str(c).strip() for c in raw.iloc[0]]
    repeated = sorted({c for c in header if header.count(c) > 1})
    if repeated:
        raise MalformedTable(f"{what}: header repeats {repeated}", 1)
    frame = raw.iloc[1:].reset_index(drop=True)
    frame.columns = header
    return frame


def _read_frame(csv_text: str, layout: TableLayout) -> pd.DataFrame:
    frame = read_csv_frame(csv_text)
    if layout == TableLayout.COLUMNS:
        # first column holds the labels; every other column is one record
        frame = frame.set_index(frame.columns[0])
        frame.index = [str(label).strip() for label in frame.index]
        frame = frame.T.reset_index(drop=True)
    return frame


def load_table(csv_text: str, config: DatasetConfig) -> TableDocument:
    """
    Parse CSV text into a TableDocument over the config's variables.

    Args:
        csv_text: CSV with a header naming every mapped column
        config: Dataset config supplying the column map, percent columns and layout

    Returns:
        TableDocument with variables (declaration order of the column map) as columns

    Raises:
        MissingColumn: a mapped CSV column is absent
        NonNumericCell: a cell is not a decimal number (row is 1-based)
        EmptyTable: no header or no records
    """
    frame = _read_frame(csv_text, config.layout)
    for variable, column in config.column_map.items():
        if column not in frame.columns:
            raise MissingColumn(column)
    if frame.empty:
        raise EmptyTable("table has no records")

    variables = tuple(config.column_map)
    rows: List[Tuple[float, ...]] = []
    for number, record in enumerate(frame.itertuples(index=False), start=1):
        cells = dict(zip(frame.columns, record))
        rows.append(tuple(
            _parse_cell(str(cells[config.column_map[v]]), number, config.column_map[v], v in config.percent_columns)
            for v in variables
        ))
    logger.info(f"Loaded {len(rows)} record(s) over {len(variables)} variables")
    return TableDocument(variables, tuple(rows))


def _format_cell(value: float, percent: bool) -> str:
    if percent:
        scaled = Decimal(repr(value)) * HUNDRED
        return format(scaled.normalize(), "f") if scaled == scaled.to_integral_value() else str(scaled)
    return format_real(value)


def write_table(doc: TableDocument, config: DatasetConfig) -> str:
    """
    Render a TableDocument as CSV in the config's column names and layout.

    Percent columns are multiplied back by 100.
    """
    header = [config.column_map.get(c, c) for c in doc.columns]
    cells = [
        [_format_cell(value, column in config.percent_columns) for column, value in zip(doc.columns, row)]
        for row in doc.rows
    ]
    frame = pd.DataFrame(cells, columns=header, dtype=str)
    if config.layout == TableLayout.COLUMNS:
        frame = frame.T
        frame.columns = [f"record{i}" for i in range(1, len(doc.rows) + 1)]
        frame.index.name = "variable"
        return frame.to_csv(lineterminator="\n")
    return frame.to_csv(index=False, lineterminator="\n")
