"""Deterministic JSON/CSV emission.

Machine reports must be byte-identical for identical scene + seed, so all
floats go through a fixed 17-significant-digit formatter and keys are sorted.
Human summaries use 6 significant digits.
"""

import hashlib
import json

import numpy as np

MACHINE_DIGITS = 17
HUMAN_DIGITS = 6


def _convert(obj, digits):
    if isinstance(obj, dict):
        return {str(k): _convert(obj[k], digits) for k in sorted(obj, key=str)}
    if isinstance(obj, (list, tuple)):
        return [_convert(v, digits) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_convert(v, digits) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        f = float(obj)
        if f != f:
            return "nan"
        if f in (float("inf"), float("-inf")):
            return "inf" if f > 0 else "-inf"
        return RawFloat(f"{f:.{digits}g}")
    return obj


class RawFloat(str):
    """Pre-formatted float carried verbatim into the JSON output."""


class _Encoder(json.JSONEncoder):
    def default(self, o):
        raise TypeError(f"not serializable: {type(o)}")

    def iterencode(self, o, _one_shot=False):
        for chunk in super().iterencode(o, _one_shot=_one_shot):
            yield chunk


def canonical_json(obj, digits=MACHINE_DIGITS):
    """Serialize with sorted keys and fixed float formatting."""
    converted = _convert(obj, digits)

    def encode(o):
        if isinstance(o, RawFloat):
            return str(o)
        if isinstance(o, dict):
            items = ",".join(f"{json.dumps(k)}:{encode(v)}" for k, v in o.items())
            return "{" + items + "}"
        if isinstance(o, list):
            return "[" + ",".join(encode(v) for v in o) + "]"
        return json.dumps(o)

    return encode(converted)


def dump_json(obj, path, digits=MACHINE_DIGITS):
    text = canonical_json(obj, digits=digits)
    with open(path, "w") as fh:
        fh.write(text)
        fh.write("\n")


def sha256_of(obj):
    return hashlib.sha256(canonical_json(obj).encode()).hexdigest()


def dump_csv(path, header, rows, digits=MACHINE_DIGITS):
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            cells = []
            for v in row:
                if isinstance(v, (float, np.floating)):
                    cells.append(f"{float(v):.{digits}g}")
                else:
                    cells.append(str(v))
            fh.write(",".join(cells) + "\n")


def fmt6(x):
    return f"{float(x):.{HUMAN_DIGITS}g}"
