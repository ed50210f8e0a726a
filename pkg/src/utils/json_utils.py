import json
from datetime import datetime
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Any

import numpy as np


class ReportEncoder(json.JSONEncoder):
    """JSON encoder for report values: datetimes, paths, numpy scalars and arrays, exact and complex numbers."""
    def default(self, obj: Any) -> Any:
        if isinstance(obj, datetime):
            return obj.isoformat()
        if isinstance(obj, (Path, Enum)):
            return str(obj.value if isinstance(obj, Enum) else obj)
        if isinstance(obj, np.ndarray):
            return obj.tolist()
        if isinstance(obj, np.generic):
            return obj.item()
        if isinstance(obj, Fraction):
            return str(obj)
        if isinstance(obj, complex):
            return {"re": obj.real, "im": obj.imag}
        return super().default(obj)

def dumps(obj: Any, indent: int = None) -> str:
    """Serialize obj to a JSON formatted string with report type support."""
    return json.dumps(obj, cls=ReportEncoder, indent=indent)

def loads(s: str) -> Any:
    """Deserialize s to a Python object."""
    return json.loads(s)
