"""File formats: point-cloud CSV, hull JSON, symbol JSON and report documents."""

from __future__ import annotations

import base64
import csv
import io
import json

import numpy as np

from .cplane import CompactSetEstimate, HullRegion
from .errors import ValidationError
from .operators import parse_symbol, symbol_doc

CSV_HEADER = ["kind", "re", "im"]


def points_to_csv(S):
    """``kind,re,im`` rows; an empty set is a header-only file."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for z in S.points:
        w.writerow([S.kind, repr(float(z.real)), repr(float(z.imag))])
    return buf.getvalue()


def points_from_csv(text, resolution=0.0):
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or rows[0] != CSV_HEADER:
        raise ValidationError("csv", f"header must be {','.join(CSV_HEADER)}")
    body = rows[1:]
    if not body:
        return CompactSetEstimate(np.empty(0, complex), "empty")
    kinds = {r[0] for r in body}
    if len(kinds) != 1:
        raise ValidationError("csv.kind", "mixed kinds in one file")
    try:
        pts = np.array([complex(float(r[1]), float(r[2])) for r in body])
    except (ValueError, IndexError) as exc:
        raise ValidationError("csv", f"bad row: {exc}") from None
    kind = kinds.pop()
    if kind == "exact-curve" and not resolution > 0:
        resolution = _spacing(pts)
    return CompactSetEstimate(pts, kind, resolution)


def _spacing(pts):
    if pts.size < 2:
        return np.finfo(float).eps
    gaps = np.abs(np.diff(np.concatenate([pts, pts[:1]])))
    return max(float(gaps.max()) / 2, np.finfo(float).eps)


def write_points_csv(S, path):
    with open(path, "w", newline="") as fh:
        fh.write(points_to_csv(S))


def hull_to_dict(H):
    rows, cols = H.shape
    packed = np.packbits(H.mask.astype(np.uint8).ravel(order="C")) if H.mask.size else b""
    return {
        "origin_re": H.origin.real,
        "origin_im": H.origin.imag,
        "cell_size": H.cell_size,
        "rows": int(rows),
        "cols": int(cols),
        "mask_base64": base64.b64encode(bytes(packed)).decode("ascii"),
    }


def hull_from_dict(doc):
    try:
        rows, cols = int(doc["rows"]), int(doc["cols"])
        raw = np.frombuffer(base64.b64decode(doc["mask_base64"]), dtype=np.uint8)
        origin = complex(doc["origin_re"], doc["origin_im"])
        cell = float(doc["cell_size"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError("hull", f"malformed hull document: {exc}") from None
    bits = np.unpackbits(raw)[: rows * cols] if rows * cols else np.zeros(0, np.uint8)
    if bits.size != rows * cols:
        raise ValidationError("hull.mask_base64", "too few bits for the declared grid")
    return HullRegion(origin, cell, bits.reshape(rows, cols).astype(bool))


def symbol_to_json(a):
    return json.dumps(symbol_doc(a), sort_keys=True)


def symbol_from_json(text):
    return parse_symbol(json.loads(text))


def coefficients_to_dict(coeffs):
    return {"coeffs": {str(m): [c.real, c.imag] for m, c in sorted(coeffs.items())}}


def spectral_report_to_dict(report, spectrum_ref, essential_ref):
    return {
        "spectrum": spectrum_ref,
        "essential": essential_ref,
        "essential_radius": report.essential_radius,
        "method": report.method,
        "exact": bool(report.spectrum.exact and report.essential.exact),
    }


def matrix_to_csv(M):
    """Rows of ``re,im`` pairs flattened: ``re00,im00,re01,im01,...``."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for row in np.asarray(M, complex):
        w.writerow([repr(float(v)) for z in row for v in (z.real, z.imag)])
    return buf.getvalue()


def dump_json(doc, path):
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True, allow_nan=False, default=_default)
        fh.write("\n")


def _default(x):
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, complex):
        return [x.real, x.imag]
    raise TypeError(f"cannot serialize {type(x).__name__}")

