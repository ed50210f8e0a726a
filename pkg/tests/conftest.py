import pytest

from src.funcfile.parser import parse_function_file
from src.perturb.schedule import parse_schedule_text

UNIVERSITY_SYSTEM = """\
# university records, year 2011
vars: x1 x2 x3 x4 x5
f1 = x1^2 + 2*x1*x2 + 4*x3*x4 + 5
f2 = x2^2 + 4*x2*x3 + 6*x1*x5 + 10
f3 = x3^2 + 2*x1*x4 + 5*x2*x5 + 4
"""

# variable-major: every function differentiated by x1, then x2, then x3
UNIVERSITY_SCHEDULE = """\
g11,f1,x1
g21,f2,x1
g31,f3,x1
g12,f1,x2
g22,f2,x2
g32,f3,x2
g13,f1,x3
g23,f2,x3
g33,f3,x3
"""

UNIVERSITY_CSV = """\
Girls,Boys,Total,Placements,Pass
300,1500,1800,1600,97
"""

UNIVERSITY_CONFIG = """\
function_file = funcs.pvf
schedule_file = schedule.txt
column.x1 = Girls
column.x2 = Boys
column.x3 = Total
column.x4 = Placements
column.x5 = Pass
percent.x5 = true
policy = max-abs-real
key_scale = 1
submatrix_vars = x1,x2,x3
"""

PUBLISHED_MATRIX = [
    [3600, 5.82, 3200],
    [600, 10200, 4.85],
    [6400, 6000, 3600],
]

PUBLISHED_VALUES = (3600, 5.82, 3200, 600, 10200, 4.85, 6400, 6000, 3600)

RECORD_2011 = {"x1": 300.0, "x2": 1500.0, "x3": 1800.0, "x4": 1600.0, "x5": 0.97}

PLAINTEXT = (
    "An institution contains 2000 students in that there are 600 female\n"
    "students, 1400 male students. In that 500 female students are post\n"
    "graduate students, 100 male students are graduate students and 100 female\n"
    "students are graduates, 1300 male students are graduates. In that 1200\n"
    "graduate students are placed in companies and 400 post graduate students\n"
    "are placed in companies. Pass percentage of graduate students are 95\n"
    "percentage and pass percentage of post graduate students are 90\n"
    "percentage.\n"
).encode("utf-8")


@pytest.fixture
def university_field():
    return parse_function_file(UNIVERSITY_SYSTEM)


@pytest.fixture
def record_2011(university_field):
    return university_field.point(RECORD_2011)


@pytest.fixture
def university_schedule(university_field):
    return parse_schedule_text(UNIVERSITY_SCHEDULE, university_field)


@pytest.fixture
def plaintext():
    return PLAINTEXT


@pytest.fixture
def dataset_dir(tmp_path):
    """A directory holding the university function file, schedule, data and config."""
    (tmp_path / "funcs.pvf").write_text(UNIVERSITY_SYSTEM)
    (tmp_path / "schedule.txt").write_text(UNIVERSITY_SCHEDULE)
    (tmp_path / "data.csv").write_text(UNIVERSITY_CSV)
    (tmp_path / "dataset.cfg").write_text(UNIVERSITY_CONFIG)
    (tmp_path / "message.txt").write_bytes(PLAINTEXT)
    return tmp_path
