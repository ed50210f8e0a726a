"""
Schedule file parsing.

One entry per non-comment line, `label,function,variable` (e.g. `g11,f1,x1`).
"""
import logging
import re
from typing import Iterable, Optional, Tuple

from src.errors import DuplicateName, ScheduleError
from src.funcfile.polynomial import VectorField
from src.models.records import Schedule, ScheduleEntry

logger = logging.getLogger(__name__)

IDENT_RE = re.compile(r"^[A-Za-z][A-Za-z0-9_]*$")


def parse_schedule_text(text: str, field: Optional[VectorField] = None) -> Schedule:
    """
    Parse a schedule file.

    Args:
        text: Schedule file contents
        field: When given, every entry is checked against its declared names

    Returns:
        The Schedule, entries in file order
    """
    entries = []
    seen = set()
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = [part.strip() for part in line.split(",")]
        if len(parts) != 3:
            raise ScheduleError(f"line {number}: expected 'label,function,variable', got '{line}'")
        for part in parts:
            if not IDENT_RE.match(part):
                raise ScheduleError(f"line {number}: '{part}' is not an identifier")
        label, function, variable = parts
        if label in seen:
            raise DuplicateName(label, line=number)
        seen.add(label)
        entries.append(ScheduleEntry(label=label, function=function, variable=variable))

    schedule = Schedule(entries=tuple(entries))
    if field is not None:
        schedule.validate_against(field)
    logger.debug(f"Parsed schedule with {len(schedule)} entries")
    return schedule


def schedule_from_pairs(pairs: Iterable[Tuple[str, str, str]]) -> Schedule:
    return Schedule(entries=tuple(ScheduleEntry(label=l, function=f, variable=v) for l, f, v in pairs))


def full_schedule(field: VectorField) -> Schedule:
    """Every (function, variable) pair, variable-major, labelled `d_<function>_<variable>`."""
    return schedule_from_pairs(
        (f"d_{name}_{var}", name, var) for var in field.variables for name in field.function_names
    )


def schedule_text(schedule: Schedule) -> str:
    return "".join(f"{e.label},{e.function},{e.variable}\n" for e in schedule.entries)
