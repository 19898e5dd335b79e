"""SampledCurve serialization: JSON (lossless) and CSV (plot-ready).

JSON floats are written with 17 significant digits and keys in a fixed
order, so identical inputs give byte-identical files.
"""

import csv
import io as _io
import json
import math

import jsonschema
import numpy as np

from .errors import ValidationError
from .flat import SampledCurve
from .geometry import Signature

_NUM = {"type": "number"}
_VEC = {"type": "array", "items": _NUM}

CURVE_SCHEMA = {
    "type": "object",
    "required": ["space", "n", "signature", "grid", "samples"],
    "properties": {
        "space": {"enum": ["r21", "r22", "r2n"]},
        "n": {"type": "integer", "minimum": 1},
        "signature": {
            "type": "object",
            "required": ["p", "q"],
            "properties": {"p": {"type": "integer"}, "q": {"type": "integer"}},
        },
        "grid": {"type": "array", "items": _NUM, "minItems": 3, "maxItems": 3},
        "samples": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["tau", "x", "residual"],
                "properties": {
                    "tau": _NUM,
                    "x": _VEC,
                    "xdot": {"anyOf": [_VEC, {"type": "null"}]},
                    "residual": _NUM,
                },
            },
        },
    },
}


def _fmt_float(v):
    v = float(v)
    if not math.isfinite(v):
        return "null"
    s = format(v, ".17g")
    if "e" not in s and "." not in s and "n" not in s:
        s += ".0"
    return s


def dumps(obj):
    """Deterministic JSON with 17-significant-digit floats."""
    if isinstance(obj, dict):
        return "{" + ",".join(f"{json.dumps(str(k))}:{dumps(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(dumps(v) for v in obj) + "]"
    if isinstance(obj, np.ndarray):
        return dumps(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(obj)
    if obj is None:
        return "null"
    return json.dumps(str(obj))


def curve_to_dict(curve):
    t0, t1, count = curve.grid
    samples = []
    for i in range(len(curve)):
        samples.append({
            "tau": float(curve.tau[i]),
            "x": [float(v) for v in curve.x[i]],
            "xdot": None if curve.xdot is None else [float(v) for v in curve.xdot[i]],
            "residual": float(curve.residual[i]),
        })
    return {
        "space": curve.space,
        "n": int(curve.n),
        "signature": curve.signature.to_dict(),
        "grid": [float(t0), float(t1), int(count)],
        "samples": samples,
    }


def _field_path(err):
    path = "/".join(str(p) for p in err.absolute_path)
    return path or "<root>"


def curve_from_dict(data):
    """Validate against the schema and build a :class:`SampledCurve`."""
    try:
        jsonschema.validate(data, CURVE_SCHEMA)
    except jsonschema.ValidationError as exc:
        field = _field_path(exc)
        raise ValidationError(f"{field}: {exc.message}", field=field) from None
    n = data["n"]
    sig = Signature.from_dict(data["signature"])
    if sig != Signature(2, n):
        raise ValidationError(f"signature {sig} does not match n={n}", field="signature")
    m = n + 2
    samples = data["samples"]
    for i, s in enumerate(samples):
        if len(s["x"]) != m:
            raise ValidationError(f"samples/{i}/x: expected {m} components", field=f"samples/{i}/x")
        if s.get("xdot") is not None and len(s["xdot"]) != m:
            raise ValidationError(f"samples/{i}/xdot: expected {m} components", field=f"samples/{i}/xdot")
    has_v = [s.get("xdot") is not None for s in samples]
    if any(has_v) and not all(has_v):
        raise ValidationError("samples/xdot: present on some samples only", field="samples/xdot")
    t0, t1, count = data["grid"]
    return SampledCurve(
        data["space"], n,
        np.array([s["tau"] for s in samples]),
        np.array([s["x"] for s in samples], dtype=float),
        np.array([s["xdot"] for s in samples], dtype=float) if all(has_v) else None,
        np.array([s["residual"] for s in samples]),
        (float(t0), float(t1), int(count)),
        sig,
    )


def csv_header(n):
    return ["tau"] + [f"x{i}" for i in range(1, n + 3)] + ["residual"]


def curve_to_csv(curve):
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(csv_header(curve.n))
    for i in range(len(curve)):
        w.writerow([_fmt_float(curve.tau[i])] + [_fmt_float(v) for v in curve.x[i]]
                   + [_fmt_float(curve.residual[i])])
    return buf.getvalue()


def curve_from_csv(text, space=None):
    rows = list(csv.reader(_io.StringIO(text)))
    if not rows:
        raise ValidationError("empty CSV", field="header")
    header = [h.strip() for h in rows[0]]
    m = len(header) - 2
    if m < 3 or header != csv_header(m - 2):
        raise ValidationError(f"CSV header must be tau,x1..x_m,residual; got {','.join(header)}", field="header")
    n = m - 2
    try:
        data = np.array([[float(v) for v in r] for r in rows[1:] if r], dtype=float)
    except ValueError as exc:
        raise ValidationError(f"non-numeric CSV cell: {exc}", field="rows") from None
    if data.ndim != 2 or data.shape[0] == 0:
        raise ValidationError("CSV has no data rows", field="rows")
    if space is None:
        space = "r21" if n == 1 else "r2n"
    return SampledCurve(space, n, data[:, 0], data[:, 1:-1], None, data[:, -1])


def save_curve(curve, path, format="json"):
    """Write a curve to ``path`` (``"-"`` for standard output)."""
    if format == "json":
        text = dumps(curve_to_dict(curve)) + "\n"
    elif format == "csv":
        text = curve_to_csv(curve)
    else:
        raise ValidationError(f"unknown format {format!r}", field="format")
    write_text(text, path)
    return text


def write_text(text, path):
    if path in (None, "-"):
        import sys
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def load_curve(path, space=None):
    """Read a curve from a JSON or CSV file (chosen by extension, JSON otherwise)."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if str(path).endswith(".csv"):
        return curve_from_csv(text, space)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"invalid JSON: {exc}", field="<root>") from None
    return curve_from_dict(data)
