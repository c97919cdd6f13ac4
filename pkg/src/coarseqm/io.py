"""JSON interchange formats and report emission.

Every loader names the file and the offending field in its error
message.  Report writers produce stable field ordering (insertion
order, schema version first) so identical runs emit identical bytes.
"""

from __future__ import annotations

import csv
import json
from fractions import Fraction

import numpy as np

from .algebra import MatrixState, ProbState
from .constructions import ClassicalComponent, MatrixComponent, UnionSpace
from .exceptions import UsageError
from .linalg import Operator
from .metric import Cover, MetricSpace, validate_metric
from .spectral import FourierProfile

SCHEMA_VERSION = 1


def _read_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise UsageError(f"{path}: file not found")
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON ({exc})")


def _field(doc: dict, path: str, name: str, kind=None):
    if name not in doc:
        raise UsageError(f"{path}: missing field '{name}'")
    val = doc[name]
    if kind is not None and not isinstance(val, kind):
        raise UsageError(f"{path}: field '{name}' has wrong type "
                         f"(expected {getattr(kind, '__name__', kind)})")
    return val


def load_matrix(path: str) -> Operator:
    """{"rows": n, "cols": n, "re": [[...]], "im": [[...]], "hermitian": bool}"""
    doc = _read_json(path)
    rows = _field(doc, path, "rows", int)
    cols = _field(doc, path, "cols", int)
    re = np.asarray(_field(doc, path, "re", list), dtype=float)
    im = np.asarray(doc.get("im", np.zeros_like(re).tolist()), dtype=float)
    if re.shape != (rows, cols) or im.shape != (rows, cols):
        raise UsageError(f"{path}: field 're'/'im' shape {re.shape} does not match "
                         f"rows={rows}, cols={cols}")
    try:
        return Operator(re + 1j * im, hermitian=bool(doc.get("hermitian", False)))
    except Exception as exc:
        raise UsageError(f"{path}: field 'hermitian' inconsistent with entries ({exc})")


def save_matrix(path: str, mat, hermitian: bool = False) -> None:
    m = np.asarray(mat, dtype=complex)
    doc = {
        "rows": int(m.shape[0]),
        "cols": int(m.shape[1]),
        "re": m.real.tolist(),
        "im": m.imag.tolist(),
        "hermitian": bool(hermitian),
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def load_metric(path: str) -> MetricSpace:
    """{"labels": [...], "dist": [[...]]}; axioms validated on load."""
    doc = _read_json(path)
    dist = np.asarray(_field(doc, path, "dist", list), dtype=float)
    labels = tuple(str(x) for x in doc.get("labels", ()))
    try:
        return validate_metric(dist, labels)
    except Exception as exc:
        raise UsageError(f"{path}: field 'dist' is not a metric ({exc})")


def save_metric(path: str, space: MetricSpace) -> None:
    doc = {"labels": list(space.labels), "dist": space.dist.tolist()}
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def load_state(path: str):
    """{"probs": [...]} -> ProbState;  {"block": i, "density": {...}} -> (i, MatrixState)."""
    doc = _read_json(path)
    if "probs" in doc:
        try:
            return ProbState(np.asarray(doc["probs"], dtype=float))
        except Exception as exc:
            raise UsageError(f"{path}: field 'probs' is not a probability vector ({exc})")
    if "density" in doc:
        block = int(doc.get("block", 0))
        dm = doc["density"]
        re = np.asarray(_field(dm, path, "re", list), dtype=float)
        im = np.asarray(dm.get("im", np.zeros_like(re).tolist()), dtype=float)
        try:
            return block, MatrixState(re + 1j * im)
        except Exception as exc:
            raise UsageError(f"{path}: field 'density' is not a density matrix ({exc})")
    raise UsageError(f"{path}: expected field 'probs' or 'density'")


def load_cover(path: str, space: MetricSpace) -> Cover:
    """{"sets": [[indices] ...], "colors": [...]}; bounds recomputed exactly."""
    doc = _read_json(path)
    sets = tuple(tuple(int(i) for i in s) for s in _field(doc, path, "sets", list))
    colors = tuple(int(c) for c in _field(doc, path, "colors", list))
    if len(sets) != len(colors):
        raise UsageError(f"{path}: fields 'sets' and 'colors' have different lengths")
    diam = max((space.set_diameter(s) for s in sets), default=0.0)
    sep = float("inf")
    for i in range(len(sets)):
        for j in range(i + 1, len(sets)):
            if colors[i] == colors[j]:
                sep = min(sep, space.set_distance(sets[i], sets[j]))
    separation = np.nextafter(sep, -np.inf) if np.isfinite(sep) else space.scale
    try:
        cover = Cover(sets, colors, diam, float(separation))
        cover.check(space)
    except Exception as exc:
        raise UsageError(f"{path}: field 'sets' is not a valid cover ({exc})")
    return cover


def _parse_number(x):
    if isinstance(x, str) and "/" in x:
        return Fraction(x)
    return x


def load_union(path: str) -> UnionSpace:
    """{"components": [...], "gaps": [...]}.

    Component entries: {"type": "classical", "dist": [[...]], "anchor": [...]}
    or {"type": "matrix", "dim": k, "anchor": {"re": ..., "im": ...}}.
    Gaps may be JSON numbers or exact fraction strings like "5/2".
    """
    doc = _read_json(path)
    comps = []
    for idx, entry in enumerate(_field(doc, path, "components", list)):
        kind = _field(entry, path, "type", str)
        if kind == "classical":
            space = validate_metric(np.asarray(_field(entry, path, "dist", list), dtype=float))
            anchor_raw = [_parse_number(v) for v in _field(entry, path, "anchor", list)]
            exact = any(isinstance(v, Fraction) for v in anchor_raw)
            anchor = ProbState(np.array(anchor_raw, dtype=object) if exact
                               else np.asarray(anchor_raw, dtype=float))
            comps.append(ClassicalComponent(space, anchor))
        elif kind == "matrix":
            dim = _field(entry, path, "dim", int)
            dm = _field(entry, path, "anchor", dict)
            re = np.asarray(_field(dm, path, "re", list), dtype=float)
            im = np.asarray(dm.get("im", np.zeros_like(re).tolist()), dtype=float)
            comps.append(MatrixComponent(dim, MatrixState(re + 1j * im)))
        else:
            raise UsageError(f"{path}: components[{idx}].type '{kind}' unknown")
    gaps = tuple(_parse_number(g) for g in _field(doc, path, "gaps", list))
    try:
        return UnionSpace(tuple(comps), gaps)
    except Exception as exc:
        raise UsageError(f"{path}: field 'gaps' invalid ({exc})")


def load_profile(path: str) -> FourierProfile:
    """{"tmax": T, "values_re": [...], "values_im": [...]}"""
    doc = _read_json(path)
    tmax = float(_field(doc, path, "tmax", (int, float)))
    re = np.asarray(_field(doc, path, "values_re", list), dtype=float)
    im = np.asarray(doc.get("values_im", np.zeros_like(re).tolist()), dtype=float)
    try:
        return FourierProfile(tmax, re + 1j * im,
                              closed_support=bool(doc.get("closed_support", False)))
    except Exception as exc:
        raise UsageError(f"{path}: field 'values_re' invalid profile ({exc})")


def report_json(payload: dict) -> str:
    """Versioned report with stable key order (schema first, then insertion)."""
    doc = {"schema": SCHEMA_VERSION}
    doc.update(payload)
    return json.dumps(doc, indent=1, allow_nan=True) + "\n"


def report_csv(rows: list[dict], header: list[str] | None = None) -> str:
    """RFC-4180-style CSV, UTF-8, LF line endings, header always present."""
    if header is None:
        header = list(rows[0].keys()) if rows else []
    out = []

    class _LF:
        def __init__(self):
            self.chunks = []

        def write(self, s):
            self.chunks.append(s)

    buf = _LF()
    writer = csv.writer(buf, lineterminator="\n", quoting=csv.QUOTE_MINIMAL)
    writer.writerow(header)
    for row in rows:
        writer.writerow([row.get(k, "") for k in header])
    return "".join(buf.chunks)


def emit_report(payload, path: str | None, fmt: str = "json") -> str:
    """Render and optionally write a report; returns the rendered text."""
    if fmt == "json":
        if not isinstance(payload, dict):
            payload = {"rows": payload}
        text = report_json(payload)
    elif fmt == "csv":
        rows = payload["rows"] if isinstance(payload, dict) else payload
        text = report_csv(rows)
    else:
        raise UsageError(f"unknown report format '{fmt}' (expected json or csv)")
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return text
