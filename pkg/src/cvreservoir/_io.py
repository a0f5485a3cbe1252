"""Atomic file output and fixed-precision CSV formatting."""

import csv
import io
import json
import os
import tempfile

import numpy as np

CSV_DIGITS = 17


def fmt(v):
    """Format a float with 17 significant digits (lossless for binary64)."""
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, str):
        return v
    return f"{float(v):.{CSV_DIGITS - 1}e}"


def atomic_write_text(path, text):
    """Write ``text`` to ``path`` through a temporary file and a rename."""
    path = os.fspath(path)
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".tmp-", dir=d)
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def csv_text(header, columns):
    """Render equal-length columns as CSV text with a header row."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    n = len(columns[0]) if columns else 0
    for i in range(n):
        w.writerow([fmt(c[i]) for c in columns])
    return buf.getvalue()


def write_csv(path, header, columns):
    atomic_write_text(path, csv_text(header, columns))


def read_csv(path):
    """Read a CSV written by :func:`write_csv` into a dict of float arrays."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    out = {}
    for j, name in enumerate(header):
        col = [r[j] for r in body]
        try:
            out[name] = np.array([float(v) for v in col])
        except ValueError:
            out[name] = np.array(col)
    return out


def _default(o):
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, (np.floating, np.integer, np.bool_)):
        return o.item()
    raise TypeError(f"not JSON serialisable: {type(o).__name__}")


def json_text(obj):
    return json.dumps(obj, indent=2, sort_keys=True, default=_default) + "\n"


def write_json(path, obj):
    atomic_write_text(path, json_text(obj))
