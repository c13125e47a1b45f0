"""JSON, CSV and OBJ interchange.

Floats are written with 17 significant digits so that a value read back is
bit-identical.  Non-finite numbers are never written; they become null.
"""

import csv
import io
import json
import math

import numpy as np

from .errors import InputError
from .linegeom import PluckerLine, PVLine
from .spheres import RULED, CommonCircle, CommonPoint, Sphere
from .symqr import ProjQuadric


def _num(x) -> str:
    x = float(x)
    if not math.isfinite(x):
        return "null"
    s = format(x, ".17g")
    return s


def dumps(obj, indent: int = 2) -> str:
    """json.dumps with fixed 17-digit floats and null for non-finite values."""
    return _encode(obj, indent, 0)


def _encode(obj, indent: int, level: int) -> str:
    pad = "\n" + " " * (indent * (level + 1))
    end = "\n" + " " * (indent * level)
    if obj is None or isinstance(obj, (bool, np.bool_)):
        return json.dumps(None if obj is None else bool(obj))
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _num(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [json.dumps(str(k)) + ": " + _encode(v, indent, level + 1) for k, v in obj.items()]
        return "{" + pad + ("," + pad).join(items) + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return "[]"
        items = [_encode(v, indent, level + 1) for v in obj]
        if all(isinstance(v, (int, float, np.integer, np.floating)) for v in obj):
            return "[" + ", ".join(items) + "]"
        return "[" + pad + ("," + pad).join(items) + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def complex_pairs(z) -> list:
    return [[float(np.real(c)), float(np.imag(c))] for c in np.ravel(z)]


def _from_pairs(data) -> np.ndarray:
    return np.array([complex(a, b) for a, b in data])


# ---------------------------------------------------------------------------
# quadrics and lines


def quadric_to_json(q) -> list:
    """Upper triangle in row-major order (m11, m12, ..., m44) as [re, im] pairs."""
    m = ProjQuadric(q).m
    iu = np.triu_indices(m.shape[0])
    return complex_pairs(m[iu])


def quadric_from_json(data) -> ProjQuadric:
    vals = _from_pairs(data)
    n = int(round((np.sqrt(8 * len(vals) + 1) - 1) / 2))
    if n * (n + 1) // 2 != len(vals) or n < 2:
        raise InputError(f"{len(vals)} entries do not fill an upper triangle")
    m = np.zeros((n, n), dtype=complex)
    m[np.triu_indices(n)] = vals
    return ProjQuadric(m + np.triu(m, 1).T)


def line_to_json(line) -> dict:
    if isinstance(line, PVLine):
        return {"pv": {"p": complex_pairs(line.p), "v": complex_pairs(line.v)}}
    if not isinstance(line, PluckerLine):
        line = PluckerLine(line)
    return {"plucker": complex_pairs(line.x)}


def line_from_json(data):
    if "plucker" in data:
        return PluckerLine(_from_pairs(data["plucker"]))
    if "pv" not in data:
        raise InputError("a line needs 'plucker' or 'pv'")
    return PVLine(_from_pairs(data["pv"]["p"]), _from_pairs(data["pv"]["v"]))


def configuration_to_json(named: dict) -> dict:
    """Named lists of quadrics."""
    return {k: [quadric_to_json(q) for q in v] for k, v in named.items()}


# ---------------------------------------------------------------------------
# sphere problems


def parse_sphere(data) -> Sphere:
    try:
        return Sphere(tuple(float(x) for x in data["center"]), float(data["radius"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad sphere entry {data!r}: {exc}") from None


def parse_instances(doc) -> list:
    """A single problem object or a list of them, as a list of dicts.

    Each dict has "spheres" (four Sphere) and optional "seed" and "tol".
    """
    items = doc if isinstance(doc, list) else [doc]
    out = []
    for k, item in enumerate(items):
        if not isinstance(item, dict) or "spheres" not in item:
            raise InputError(f"instance {k} has no 'spheres' list")
        sph = item["spheres"]
        if not isinstance(sph, list) or len(sph) != 4:
            raise InputError(f"instance {k} needs exactly four spheres")
        inst = {"spheres": [parse_sphere(s) for s in sph]}
        if item.get("seed") is not None:
            inst["seed"] = int(item["seed"])
        if item.get("tol") is not None:
            inst["tol"] = float(item["tol"])
        out.append(inst)
    return out


def _complex_vec(key: str, z) -> dict:
    z = np.asarray(z, dtype=complex)
    return {key: [float(x) for x in z.real], key + "_imag": [float(x) for x in z.imag]}


def _line_record(p, v) -> dict:
    return {"p": [float(x) for x in np.real(p)], "v": [float(x) for x in np.real(v)]}


def degenerate_to_json(report) -> dict:
    classes = []
    for c in report.classes:
        entry = {"class": c.name}
        if isinstance(c, CommonCircle):
            entry.update(center_x=float(c.center_x), rho=float(c.rho))
        elif isinstance(c, CommonPoint):
            entry.update(x=float(c.x))
        else:
            entry.update(A=float(c.A), B=float(c.B), C=float(c.C), ruled=isinstance(c, RULED))
        classes.append(entry)
    return {
        "classes": classes,
        "sample_tangents": [_line_record(t.p, t.v) for t in report.sample_tangents],
        "axis_point": [float(x) for x in report.axis_point],
        "axis_direction": [float(x) for x in report.axis_direction],
        "abscissae": [float(x) for x in report.abscissae],
        "consistency": float(report.consistency),
        "notes": list(report.notes),
    }


def result_to_json(result) -> dict:
    tangents = []
    for t in result.tangents:
        rec = _complex_vec("p", t.p)
        rec.update(_complex_vec("v", t.v))
        rec.update(real=bool(t.is_real), multiplicity=int(t.multiplicity),
                   residual=float(max(t.residuals)))
        tangents.append(rec)
    return {
        "regime": result.regime,
        "complex_count": int(result.complex_count),
        "real_count": int(result.real_count),
        "at_infinity": int(result.at_infinity),
        "seed": int(result.seed),
        "tol": float(result.tol),
        "tol_cluster": float(result.tol_cluster),
        "tangents": tangents,
        "degenerate": None if result.degenerate is None else degenerate_to_json(result.degenerate),
        "warnings": list(result.warnings),
    }


CSV_COLUMNS = [
    "instance", "regime", "complex_count", "real_count", "at_infinity", "kind", "index",
    "p_x", "p_y", "p_z", "v_x", "v_y", "v_z",
    "p_imag_x", "p_imag_y", "p_imag_z", "v_imag_x", "v_imag_y", "v_imag_z",
    "real", "multiplicity", "residual", "classes", "error",
]


def _cell(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return "" if not math.isfinite(x) else format(x, ".17g")
    return "" if x is None else str(x)


def results_to_csv(records: list) -> str:
    """One row per tangent or sample tangent; one bare row for empty results.

    ``records`` are the JSON dicts of :func:`result_to_json`, optionally
    carrying an "error" key.
    """
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for k, rec in enumerate(records):
        head = [k, rec.get("regime", ""), rec.get("complex_count", ""),
                rec.get("real_count", ""), rec.get("at_infinity", "")]
        deg = rec.get("degenerate") or {}
        names = ";".join(c["class"] for c in deg.get("classes", []))
        rows = []
        for i, t in enumerate(rec.get("tangents", [])):
            rows.append(["tangent", i, *t["p"], *t["v"], *t["p_imag"], *t["v_imag"],
                         t["real"], t["multiplicity"], t["residual"]])
        for i, t in enumerate(deg.get("sample_tangents", [])):
            rows.append(["sample", i, *t["p"], *t["v"], 0.0, 0.0, 0.0, 0.0, 0.0, 0.0,
                         True, 1, None])
        if not rows:
            rows.append(["none", None] + [None] * 15)
        for r in rows:
            w.writerow([_cell(x) for x in head + r + [names, rec.get("error")]])
    return buf.getvalue()


def rows_to_csv(columns: list, rows: list) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_cell(r.get(c)) for c in columns])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# OBJ geometry


def icosphere(level: int = 2):
    """Unit icosphere as (vertices, triangles)."""
    t = (1 + 5 ** 0.5) / 2
    verts = [(-1, t, 0), (1, t, 0), (-1, -t, 0), (1, -t, 0), (0, -1, t), (0, 1, t),
             (0, -1, -t), (0, 1, -t), (t, 0, -1), (t, 0, 1), (-t, 0, -1), (-t, 0, 1)]
    verts = [np.array(v) / np.linalg.norm(v) for v in verts]
    faces = [(0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11), (1, 5, 9),
             (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8), (3, 9, 4), (3, 4, 2),
             (3, 2, 6), (3, 6, 8), (3, 8, 9), (4, 9, 5), (2, 4, 11), (6, 2, 10),
             (8, 6, 7), (9, 8, 1)]
    for _ in range(level):
        cache = {}

        def mid(a, b):
            key = (min(a, b), max(a, b))
            if key not in cache:
                m = verts[a] + verts[b]
                verts.append(m / np.linalg.norm(m))
                cache[key] = len(verts) - 1
            return cache[key]

        new = []
        for a, b, c in faces:
            ab, bc, ca = mid(a, b), mid(b, c), mid(c, a)
            new += [(a, ab, ca), (b, bc, ab), (c, ca, bc), (ab, bc, ca)]
        faces = new
    return np.array(verts), faces


def clip_line(p, v, lo, hi):
    """Parameter interval of p + t v inside the box [lo, hi], or None."""
    t0, t1 = -np.inf, np.inf
    for k in range(3):
        if abs(v[k]) < 1e-300:
            if not lo[k] <= p[k] <= hi[k]:
                return None
            continue
        a, b = (lo[k] - p[k]) / v[k], (hi[k] - p[k]) / v[k]
        t0, t1 = max(t0, min(a, b)), min(t1, max(a, b))
    return (t0, t1) if t0 < t1 else None


def configuration_box(spheres, factor: float = 3.0):
    cs = np.array([s.c for s in spheres])
    mid = cs.mean(0)
    radius = max(np.linalg.norm(c - mid) + s.radius for c, s in zip(cs, spheres))
    return mid - factor * radius, mid + factor * radius


def to_obj(spheres, lines, level: int = 2) -> str:
    """Spheres as icosphere meshes and real lines as clipped segments."""
    unit, faces = icosphere(level)
    lo, hi = configuration_box(spheres)
    out = ["# spheres and common tangents"]
    base = 1
    for k, s in enumerate(spheres):
        out.append(f"o sphere_{k}")
        for x in s.c + s.radius * unit:
            out.append("v " + " ".join(format(float(c), ".17g") for c in x))
        for a, b, c in faces:
            out.append(f"f {a + base} {b + base} {c + base}")
        base += len(unit)
    for k, (p, v) in enumerate(lines):
        p, v = np.real(p), np.real(v)
        span = clip_line(p, v, lo, hi)
        if span is None:
            continue
        out.append(f"o tangent_{k}")
        for t in span:
            out.append("v " + " ".join(format(float(c), ".17g") for c in p + t * v))
        out.append(f"l {base} {base + 1}")
        base += 2
    return "\n".join(out) + "\n"


def real_lines(result) -> list:
    lines = [(t.p, t.v) for t in result.tangents if t.is_real]
    if result.degenerate is not None:
        lines += [(t.p, t.v) for t in result.degenerate.sample_tangents]
    return lines
