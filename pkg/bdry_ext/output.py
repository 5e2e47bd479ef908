from typing import Dict, List, Sequence
import os
import json
import time
import numpy as np


def _format(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def csv_lines(header: Sequence[str], rows: Sequence[Sequence], timestamp: bool = True) -> List[str]:
    """CSV lines with '.' decimals and 17 significant digits; optional `# generated` header line."""
    lines = []
    if timestamp:
        lines.append("# generated " + time.strftime("%Y-%m-%d %H:%M:%S", time.localtime()))
    lines.append(",".join(header))
    lines.extend(",".join(_format(x) for x in row) for row in rows)
    return lines


def save_csv(path: str, header: Sequence[str], rows: Sequence[Sequence], timestamp: bool = True):
    _make_parent(path)
    # newline="" keeps LF line endings on every platform.
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write("\n".join(csv_lines(header, rows, timestamp)) + "\n")


def to_jsonable(obj):
    """Convert numpy values; complex numbers become [re, im] pairs."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        if np.iscomplexobj(obj):
            return np.stack([obj.real, obj.imag], axis=-1).tolist()
        return obj.tolist()
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    return obj


def json_text(data: Dict) -> str:
    return json.dumps(to_jsonable(data), indent=2)


def save_json(path: str, data: Dict):
    _make_parent(path)
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(json_text(data) + "\n")


def _make_parent(path: str):
    parent = os.path.dirname(os.path.abspath(path))
    os.makedirs(parent, exist_ok=True)


SPECTRUM_HEADER = ("index", "eigenvalue", "multiplicity", "residual")
ORACLE_HEADER = ("index", "secular", "fem", "abs_dev")
