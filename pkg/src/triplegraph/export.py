"""CSV and JSON writers for analysis results, plus atomic file output."""
from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from fractions import Fraction

import numpy as np

from .netkit import GeodesicSummary, Graph


def _num(x):
    if isinstance(x, Fraction):
        return float(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    return x


def _cell(x) -> str:
    if x is None:
        return ""
    x = _num(x)
    return repr(x) if isinstance(x, float) else str(x)


def rank_vector_csv(g: Graph, values, header: str = "value") -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["vertex", header])
    for label, v in zip(g.vertex_ids, values):
        w.writerow([_label(label), _cell(v)])
    return buf.getvalue()


def rank_vector_json(g: Graph, values, metric: str) -> str:
    data = {"metric": metric, "values": {_label(label): _num(v) for label, v in zip(g.vertex_ids, values)}}
    return dumps(data)


def geodesic_summary_csv(g: Graph, summary: GeodesicSummary) -> str:
    return rank_vector_csv(g, summary.eccentricities, header="eccentricity")


def geodesic_summary_json(g: Graph, summary: GeodesicSummary) -> str:
    return dumps(
        {
            "radius": summary.radius,
            "diameter": summary.diameter,
            "eccentricities": {_label(v): e for v, e in zip(g.vertex_ids, summary.eccentricities)},
        }
    )


def scalar_csv(name: str, value) -> str:
    return f"metric,value\n{name},{_cell(value)}\n"


def dumps(data) -> str:
    return json.dumps(data, indent=2, ensure_ascii=False, sort_keys=False) + "\n"


def _label(v) -> str:
    return v.n3() if hasattr(v, "n3") else str(v)


def atomic_write(path: str, text: str) -> None:
    """Write ``text`` to a temp file in the target directory, then rename."""
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
