from pathlib import Path

import pytest

from src.config.dataset_config import TableLayout, load_dataset_config, parse_dataset_config
from src.core.table import TableDocument, load_table, write_table
from src.errors import (
    ArityMismatch,
    ConfigError,
    EmptyTable,
    MalformedTable,
    MissingColumn,
    NonFiniteValue,
    NonNumericCell,
    UnknownVariable,
    WrongCount,
)
from src.keying.policies import Index, MaxAbsReal
from tests.conftest import UNIVERSITY_CONFIG, UNIVERSITY_CSV

COLUMNS_CSV = """\
variable,record1,record2
Girls,300,250
Boys,1500,1450
Total,1800,1700
Placements,1600,1500
Pass,97,96
"""


@pytest.fixture
def config(university_field):
    return parse_dataset_config(UNIVERSITY_CONFIG, "/data").validate_against(university_field)


def test_parse_config(config):
    assert config.function_file == Path("/data/funcs.pvf")
    assert config.schedule_file == Path("/data/schedule.txt")
    assert config.column_map["x1"] == "Girls"
    assert config.percent_columns == frozenset({"x5"})
    assert config.policy == MaxAbsReal()
    assert config.key_scale == 1
    assert config.submatrix_vars == ("x1", "x2", "x3")
    assert config.layout == TableLayout.ROWS


def test_load_config_resolves_relative_paths(dataset_dir):
    config = load_dataset_config(dataset_dir / "dataset.cfg")
    assert config.function_file == dataset_dir / "funcs.pvf"


def test_submatrix_defaults_to_leading_variables(university_field):
    text = "\n".join(line for line in UNIVERSITY_CONFIG.splitlines() if not line.startswith("submatrix_vars"))
    config = parse_dataset_config(text).validate_against(university_field)
    assert config.submatrix_vars == ("x1", "x2", "x3")


def test_config_overrides():
    config = parse_dataset_config(UNIVERSITY_CONFIG.replace("max-abs-real", "index:1") + "layout = columns\nimag_tol = 1e-6\n")
    assert config.policy == Index(1)
    assert config.layout == TableLayout.COLUMNS
    assert config.imag_tol == 1e-6


@pytest.mark.parametrize(
    "edit",
    [
        lambda t: t + "colour = blue\n",
        lambda t: t + "key_scale = 2\n",
        lambda t: t + "column.x1 = Other\n",
        lambda t: t.replace("function_file = funcs.pvf\n", ""),
        lambda t: t.replace("key_scale = 1", "key_scale = 0"),
        lambda t: t.replace("key_scale = 1", "key_scale = many"),
        lambda t: t.replace("max-abs-real", "biggest"),
        lambda t: t.replace("percent.x5 = true", "percent.x5 = maybe"),
        lambda t: t.replace("column.x2 = Boys", "column.x2 = Girls"),
        lambda t: t + "layout = diagonal\n",
        lambda t: t + "just some words\n",
    ],
)
def test_config_errors(edit):
    with pytest.raises(ConfigError):
        parse_dataset_config(edit(UNIVERSITY_CONFIG))


def test_config_must_map_every_variable(university_field):
    text = UNIVERSITY_CONFIG.replace("column.x4 = Placements\n", "")
    with pytest.raises(ConfigError):
        parse_dataset_config(text).validate_against(university_field)


@pytest.mark.parametrize(
    "extra, error",
    [
        ("column.x9 = Extra\n", UnknownVariable),
        ("percent.x9 = true\n", UnknownVariable),
    ],
)
def test_config_unknown_variables(university_field, extra, error):
    with pytest.raises(error):
        parse_dataset_config(UNIVERSITY_CONFIG + extra).validate_against(university_field)


@pytest.mark.parametrize("vars_text, error", [("x1,x2", WrongCount), ("x1,x2,x7", UnknownVariable)])
def test_config_submatrix_errors(university_field, vars_text, error):
    text = UNIVERSITY_CONFIG.replace("submatrix_vars = x1,x2,x3", f"submatrix_vars = {vars_text}")
    with pytest.raises(error):
        parse_dataset_config(text).validate_against(university_field)


def test_load_university_table(config):
    table = load_table(UNIVERSITY_CSV, config)
    assert table.columns == ("x1", "x2", "x3", "x4", "x5")
    assert len(table) == 1
    assert table.row_mapping(0) == {"x1": 300.0, "x2": 1500.0, "x3": 1800.0, "x4": 1600.0, "x5": 0.97}


def test_percent_column_scaling(config):
    table = load_table("Girls,Boys,Total,Placements,Pass\n1,2,3,4,100\n5,6,7,8,12.5\n", config)
    assert table.row_mapping(0)["x5"] == 1.0
    assert table.row_mapping(1)["x5"] == 0.125


def test_column_order_in_csv_does_not_matter(config):
    table = load_table("Pass,Total,Girls,Boys,Placements,Notes\n97,1800,300,1500,1600,ignored\n", config)
    assert table.rows[0] == (300.0, 1500.0, 1800.0, 1600.0, 0.97)


def test_non_numeric_cell_names_row_and_column(config):
    with pytest.raises(NonNumericCell) as excinfo:
        load_table("Girls,Boys,Total,Placements,Pass\n1,2,3,4,5\n1,abc,3,4,5\n", config)
    assert excinfo.value.row == 2
    assert excinfo.value.column == "Boys"
    assert excinfo.value.exit_code == 2


def test_missing_column(config):
    with pytest.raises(MissingColumn) as excinfo:
        load_table("Girls,Boys,Total,Pass\n1,2,3,4\n", config)
    assert excinfo.value.column == "Placements"


@pytest.mark.parametrize("text", ["", "Girls,Boys,Total,Placements,Pass\n"])
def test_empty_table(config, text):
    with pytest.raises(EmptyTable):
        load_table(text, config)


@pytest.mark.parametrize(
    "text, line",
    [
        ("Girls,Boys,Total,Placements,Pass\n300,1500,1800,1600,97,5\n", 2),
        ("Girls,Boys,Total,Placements,Pass\n1,2,3,4,5\n1,2,3,4,5,6,7\n", 3),
        ("Girls,Boys,Total,Placements,Pass\n1,2,3,4,5\n1,2,3,4\n", 3),
        ("Girls,Boys,Total,Placements,Pass\n1,2,3,4,5\n\n1,2,3\n", 4),
    ],
)
def test_records_must_match_header_width(config, text, line):
    with pytest.raises(MalformedTable) as excinfo:
        load_table(text, config)
    assert excinfo.value.line == line
    assert excinfo.value.exit_code == 2


def test_repeated_header_name(config):
    with pytest.raises(MalformedTable):
        load_table("Girls,Boys,Total,Placements,Pass,Boys\n1,2,3,4,5,6\n", config)


def test_write_table_round_trip(config):
    table = load_table(UNIVERSITY_CSV, config)
    assert write_table(table, config) == UNIVERSITY_CSV
    assert load_table(write_table(table, config), config) == table


def test_columns_layout(config):
    columns = config.model_copy(update={"layout": TableLayout.COLUMNS})
    table = load_table(COLUMNS_CSV, columns)
    assert len(table) == 2
    assert table.row_mapping(1) == {"x1": 250.0, "x2": 1450.0, "x3": 1700.0, "x4": 1500.0, "x5": 0.96}
    assert write_table(table, columns) == COLUMNS_CSV


def test_table_document_validation():
    with pytest.raises(ArityMismatch):
        TableDocument(("x1", "x2"), [[1.0]])
    with pytest.raises(NonFiniteValue):
        TableDocument(("x1",), [[float("nan")]])
    with pytest.raises(WrongCount):
        TableDocument(("x1",), [[1.0]]).row_mapping(1)
