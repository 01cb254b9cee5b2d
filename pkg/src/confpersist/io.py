"""File formats: distance CSV, weighted-graph JSON, map CSV, and JSON/JSONL output."""

from __future__ import annotations

import csv
import hashlib
import json
import math
from pathlib import Path
from typing import Any, Iterable

import numpy as np

from . import __version__
from .errors import InvalidMetric
from .metric import FiniteMetricSpace, WeightedGraph
from .regular import SampledMap

SCHEMA_VERSION = 1


def _parse_number(text: str) -> float:
    t = text.strip().lower()
    if t in ("inf", "+inf"):
        return math.inf
    value = float(t)
    if not math.isfinite(value):
        raise InvalidMetric(f"unsupported entry {text!r}")
    return value


def read_distance_csv(path: str | Path) -> FiniteMetricSpace:
    """First row: point ids. Following rows: the distance matrix (``inf`` allowed)."""
    with open(path, newline="") as fh:
        rows = [row for row in csv.reader(fh) if row and any(cell.strip() for cell in row)]
    if not rows:
        raise InvalidMetric(f"{path} is empty")
    ids = [cell.strip() for cell in rows[0]]
    body = rows[1:]
    if len(body) != len(ids):
        raise InvalidMetric(f"expected {len(ids)} matrix rows, found {len(body)}")
    D = [[_parse_number(cell) for cell in row] for row in body]
    return FiniteMetricSpace(ids, D)


def read_graph_json(path: str | Path) -> WeightedGraph:
    """``{"vertices": [...], "edges": [{"u": .., "v": .., "w": ..}, ...]}``; ``w`` defaults to 1."""
    with open(path) as fh:
        data = json.load(fh)
    edges = [(e["u"], e["v"], e.get("w", 1)) for e in data.get("edges", [])]
    return WeightedGraph.from_edges(data["vertices"], edges)


def read_map_csv(path: str | Path, domain: FiniteMetricSpace, field: str = "real") -> SampledMap:
    """Rows ``id, x1, ..., xN``; complex maps interleave real and imaginary parts."""
    values: dict[str, np.ndarray] = {}
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or not row[0].strip():
                continue
            coords = np.array([float(c) for c in row[1:]])
            if field == "complex":
                if len(coords) % 2:
                    raise ValueError(f"row {row[0]}: complex maps need an even number of columns")
                coords = coords[0::2] + 1j * coords[1::2]
            values[row[0].strip()] = coords
    missing = [p for p in domain.points if p not in values]
    if missing:
        raise ValueError(f"map has no values for {missing[:5]}")
    return SampledMap.from_mapping(domain, values, field)


def number(x: float) -> float | str:
    """12 significant digits; infinities become the strings ``"inf"`` / ``"-inf"``."""
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return float(f"{x:.12g}")


def normalize(obj: Any) -> Any:
    """Recursively round floats and turn tuples/arrays into lists."""
    if isinstance(obj, dict):
        return {str(k): normalize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [normalize(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [normalize(v) for v in obj.tolist()]
    if isinstance(obj, (float, int, np.floating, np.integer, bool, np.bool_)):
        return number(obj)
    return obj


def config_hash(config: dict) -> str:
    blob = json.dumps(normalize(config), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def file_digest(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def header(kind: str, chash: str) -> dict:
    return {"schema_version": SCHEMA_VERSION, "kind": kind, "config_hash": chash, "tool_version": __version__}


def write_json(path: str | Path, kind: str, chash: str, payload: dict) -> Path:
    path = Path(path)
    doc = {**header(kind, chash), **normalize(payload)}
    path.write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n")
    return path


def write_jsonl(path: str | Path, kind: str, chash: str, records: Iterable[dict]) -> Path:
    """First line is a header record; one data record per following line."""
    path = Path(path)
    with open(path, "w") as fh:
        fh.write(json.dumps({"header": True, **header(kind, chash)}, sort_keys=True) + "\n")
        for rec in records:
            fh.write(json.dumps(normalize(rec), sort_keys=True) + "\n")
    return path
