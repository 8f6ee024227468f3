"""Serialization helpers shared by reports and the command line."""

from __future__ import annotations

import json
import math
import os
import tempfile

import numpy as np

SCHEMA_VERSION = 1


def fmt(x) -> str:
    """Deterministic text for a scalar: integers verbatim, floats with 17 significant digits."""
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isnan(x) or math.isinf(x):
            return repr(x)
        return format(x, ".17g")
    return str(x)


def csv_text(schema: str, columns, rows) -> str:
    """CSV with a versioned schema comment line followed by a header row."""
    lines = [f"# fracchain-schema v{SCHEMA_VERSION} {schema}: {','.join(columns)}", ",".join(columns)]
    lines.extend(",".join(fmt(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, np.ndarray)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        # round-trip through 17 significant digits for byte stability
        return float(format(float(x), ".17g"))
    return x


def json_text(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2, sort_keys=False) + "\n"


def atomic_write(path, text: str) -> None:
    """Write via a temporary file in the target directory, then rename."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".tmp-", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
