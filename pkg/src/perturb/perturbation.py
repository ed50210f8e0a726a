"""
Perturbation: publish partial-derivative values of the field at a record
instead of the record itself.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional

from src.config.environment import ENV_CONFIG
from src.core.table import TableDocument, read_csv_frame
from src.errors import DerivkeyError, MissingColumn, NonNumericCell, RowError, ScheduleError
from src.funcfile.polynomial import Point, VectorField, partial_derivative
from src.linalg.matrix import format_real
from src.models.records import PerturbedRecord, Schedule

logger = logging.getLogger(__name__)


def perturb_point(field: VectorField, point: Point, schedule: Schedule) -> PerturbedRecord:
    """
    Evaluate every scheduled partial derivative at the point.

    Args:
        field: The vector field
        point: One record, covering exactly the field's variables
        schedule: Which (function, variable) partials to publish

    Returns:
        PerturbedRecord with values in schedule order
    """
    schedule.validate_against(field)
    values = point.vector(field.variables)
    record = {
        entry.label: partial_derivative(field.function(entry.function), entry.variable).evaluate_values(values)
        for entry in schedule.entries
    }
    return PerturbedRecord(values=record)


def perturb_table(
    field: VectorField,
    table: TableDocument,
    schedule: Schedule,
    max_workers: Optional[int] = None,
) -> List[PerturbedRecord]:
    """
    Perturb every row of a table; output order equals input order.

    Raises:
        RowError: wraps the first failing row's error with its 1-based row number
    """
    schedule.validate_against(field)
    if len(table) == 0:
        return []

    def perturb_row(index: int) -> PerturbedRecord:
        try:
            return perturb_point(field, table.row_point(index, field.variables), schedule)
        except DerivkeyError as e:
            raise RowError(index + 1, e) from e

    workers = max_workers or ENV_CONFIG["max_workers"]
    with ThreadPoolExecutor(max_workers=workers) as executor:
        records = list(executor.map(perturb_row, range(len(table))))
    logger.info(f"Perturbed {len(records)} record(s) with {len(schedule)} scheduled partials")
    return records


def records_to_csv(records: List[PerturbedRecord], schedule: Schedule) -> str:
    """Perturbed CSV: a header of schedule labels, one record per row."""
    lines = [",".join(schedule.labels)]
    for record in records:
        lines.append(",".join(format_real(v) for v in record.vector(schedule)))
    return "\n".join(lines) + "\n"


def records_from_csv(csv_text: str, schedule: Schedule) -> List[PerturbedRecord]:
    """Read a perturbed CSV; its header must be exactly the schedule labels."""
    frame = read_csv_frame(csv_text, "perturbed file")
    header = list(frame.columns)
    for label in schedule.labels:
        if label not in header:
            raise MissingColumn(label)
    if header != schedule.labels:
        raise ScheduleError(f"perturbed header {header} does not match schedule labels {schedule.labels}")

    records = []
    for number, row in enumerate(frame.itertuples(index=False), start=1):
        values = {}
        for label, text in zip(header, row):
            try:
                values[label] = float(text)
            except ValueError:
                raise NonNumericCell(number, label, text) from None
            if not math.isfinite(values[label]):
                raise NonNumericCell(number, label, text)
        records.append(PerturbedRecord(values=values))
    return records
