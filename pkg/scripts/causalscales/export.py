"""
File formats: TPM interchange, result bundles, DOT diagrams, tidy CSV tables.

- TPM CSV: headerless, one row per cause state, n inferred from the row count;
  numbers written with 17 significant digits so a round trip is exact
- TPM JSON: {"n": ..., "rows": [[...]], "labels": [...] | null}
- bundle.json: CP and delta CP per scale, emergent members and metrics, keyed
  by block notation, with sorted keys so identical runs give identical bytes
- manifest.json: command, config snapshot, input digest, version, timestamp
"""

import hashlib
import json
import logging
import re
from dataclasses import dataclass, field, asdict
from datetime import datetime
from pathlib import Path

import numpy as np
import pandas as pd
from graphviz import Digraph

from .config import DOT_MAX_WIDTH, DOT_MIN_WIDTH, SCHEMA_ID, TOOL_VERSION
from .errors import ParseError
from .lattice import HasseDiagram
from .tpm import validate_tpm

log = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"
PANDAS_LINE_RE = re.compile(r"line (\d+)")

BUNDLE_FILE = "bundle.json"
DOT_FILE = "hierarchy.dot"
LEVELS_FILE = "levels.csv"
METRICS_FILE = "metrics.csv"
MANIFEST_FILE = "manifest.json"


# ============================================================================
# TPM FILES
# ============================================================================

def read_tpm_csv(path):
    """
    Load and validate a headerless CSV TPM.

    Raises:
        ParseError: unreadable file, ragged rows or non-numeric cells, with the
            offending line when known
    """
    path = Path(path)
    if not path.exists():
        raise ParseError(path, "no such file")
    try:
        df = pd.read_csv(path, header=None, dtype=str, skip_blank_lines=True)
    except pd.errors.EmptyDataError:
        raise ParseError(path, "file is empty")
    except pd.errors.ParserError as e:
        found = PANDAS_LINE_RE.search(str(e))
        raise ParseError(path, "rows have different lengths", line=int(found.group(1)) if found else None)

    # python float() rounds correctly, so 17 significant digits round-trip exactly
    values = np.vectorize(_cell_value, otypes=[float])(df.to_numpy(dtype=object))
    bad = np.isnan(values)
    if bad.any():
        row, col = np.argwhere(bad)[0]
        raise ParseError(path, f"missing or non-numeric entry in column {col + 1}", line=int(row) + 1)
    return validate_tpm(values)


def _cell_value(cell):
    try:
        return float(str(cell).strip())
    except ValueError:
        return np.nan


def write_tpm_csv(t, path):
    pd.DataFrame(t.rows).to_csv(path, header=False, index=False, float_format=FLOAT_FORMAT)
    return Path(path)


def read_tpm_json(path):
    path = Path(path)
    try:
        payload = json.loads(path.read_text())
    except FileNotFoundError:
        raise ParseError(path, "no such file")
    except json.JSONDecodeError as e:
        raise ParseError(path, e.msg, line=e.lineno)
    if "rows" not in payload:
        raise ParseError(path, "missing 'rows'")
    t = validate_tpm(payload["rows"], labels=payload.get("labels"))
    if "n" in payload and payload["n"] != t.n:
        raise ParseError(path, f"declared n={payload['n']} but found {t.n} rows")
    return t


def write_tpm_json(t, path):
    payload = {
        "n": t.n,
        "rows": t.rows.tolist(),
        "labels": list(t.labels) if t.labels is not None else None,
    }
    Path(path).write_text(json.dumps(payload, indent=2) + "\n")
    return Path(path)


def read_tpm(path):
    """Dispatch on suffix: .json for JSON, anything else as CSV."""
    path = Path(path)
    if path.suffix.lower() == ".json":
        return read_tpm_json(path)
    return read_tpm_csv(path)


def write_tpm(t, path):
    path = Path(path)
    if path.suffix.lower() == ".json":
        return write_tpm_json(t, path)
    return write_tpm_csv(t, path)


def file_digest(path):
    return "sha256:" + hashlib.sha256(Path(path).read_bytes()).hexdigest()


# ============================================================================
# MANIFEST
# ============================================================================

@dataclass
class RunManifest:
    command: str
    config: dict = field(default_factory=dict)
    input_digest: str = None
    tool_version: str = TOOL_VERSION
    timestamp: str = field(default_factory=lambda: datetime.now().isoformat(timespec="seconds"))

    def to_json(self):
        return json.dumps(asdict(self), indent=2, sort_keys=True, default=str) + "\n"

    def write(self, out_dir, filename=MANIFEST_FILE):
        path = Path(out_dir) / filename
        path.write_text(self.to_json())
        return path


# ============================================================================
# BUNDLES
# ============================================================================

def _keyed(values):
    return {p.render_blocks(): float(v) for p, v in sorted(values.items())}


def bundle_payload(result, report):
    h = result.hierarchy
    return {
        "schema": SCHEMA_ID,
        "method": result.method,
        "manifest": MANIFEST_FILE,
        "n": h.micro_dim,
        "anchor": h.anchor.render_blocks(),
        "cp": _keyed(result.cps),
        "delta_cp": _keyed(result.delta),
        "emergent_members": [p.render_blocks() for p in h.members],
        "metrics": report.as_dict(),
    }


def bundle_json(result, report):
    return json.dumps(bundle_payload(result, report), indent=2, sort_keys=True) + "\n"


def levels_table(h):
    """Per-level mean delta CP of the members (anchor excluded), levels 1..L."""
    profile = h.level_profile()
    per_level = h.per_level
    rows = []
    for level in range(1, h.micro_dim + 1):
        values = [d for p, d in per_level.get(level, []) if p != h.anchor]
        rows.append({
            "level": level,
            "n_members": len(values),
            "mean_delta_cp": float(profile[level - 1]),
            "max_delta_cp": float(max(values)) if values else 0.0,
        })
    return pd.DataFrame(rows)


def with_manifest(frame, manifest=MANIFEST_FILE):
    """Copy of a table with a trailing column naming the run manifest."""
    return frame.assign(manifest=manifest)


def metrics_row(report, method):
    row = {k: v for k, v in report.as_dict().items() if k != "level_profile"}
    row["method"] = method
    return with_manifest(pd.DataFrame([row]))


def write_bundle(result, report, out_dir, manifest):
    """
    Write bundle.json, hierarchy.dot, levels.csv, metrics.csv and manifest.json.

    Returns:
        list of Path written
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    written = [manifest.write(out_dir)]
    bundle_path = out_dir / BUNDLE_FILE
    bundle_path.write_text(bundle_json(result, report))
    written.append(bundle_path)

    dot_path = out_dir / DOT_FILE
    dot_path.write_text(export_dot(result.hierarchy, manifest=MANIFEST_FILE))
    written.append(dot_path)

    levels_path = out_dir / LEVELS_FILE
    with_manifest(levels_table(result.hierarchy)).to_csv(levels_path, index=False, float_format=FLOAT_FORMAT)
    written.append(levels_path)

    metrics_path = out_dir / METRICS_FILE
    metrics_row(report, result.method).to_csv(metrics_path, index=False, float_format=FLOAT_FORMAT)
    written.append(metrics_path)

    log.info("bundle written to %s", out_dir)
    return written


def read_bundle(path):
    path = Path(path)
    if path.is_dir():
        path = path / BUNDLE_FILE
    try:
        return json.loads(path.read_text())
    except json.JSONDecodeError as e:
        raise ParseError(path, e.msg, line=e.lineno)


# ============================================================================
# DOT
# ============================================================================

def _node_widths(delta):
    if not delta:
        return {}
    lo, hi = min(delta.values()), max(delta.values())
    span = hi - lo
    return {
        p: DOT_MIN_WIDTH if span <= 0 else DOT_MIN_WIDTH + (d - lo) / span * (DOT_MAX_WIDTH - DOT_MIN_WIDTH)
        for p, d in delta.items()
    }


def export_dot(h, style=None, delta=None, manifest=None):
    """
    DOT source of an emergent hierarchy or a bare Hasse diagram.

    Node width grows linearly with delta CP from DOT_MIN_WIDTH (smallest value
    in the diagram) to DOT_MAX_WIDTH (largest). Nodes and edges are emitted in
    canonical partition order, so the text is deterministic.

    Args:
        h: EmergentHierarchy or HasseDiagram
        style: extra graph attributes, e.g. {"rankdir": "LR"}
        delta: delta CP per node, for a bare HasseDiagram
        manifest: run manifest file named in the header comment

    Returns:
        str
    """
    if isinstance(h, HasseDiagram):
        diagram, delta = h, delta or {}
    else:
        diagram, delta = h.diagram, h.delta

    nodes = sorted(diagram.graph.nodes)
    widths = _node_widths({p: delta.get(p, 0.0) for p in nodes})

    comment = "covering edges point from finer to coarser scales"
    if manifest:
        comment = f"{comment}; manifest: {manifest}"
    dot = Digraph(name="hierarchy", comment=comment)
    dot.attr(**{"rankdir": "BT", **(style or {})})
    dot.attr("node", shape="circle", fixedsize="true", fontsize="8")
    for p in nodes:
        label = p.render_blocks()
        if p in delta:
            label = f"{label} {delta[p]:.4f}"
        dot.node(p.render_rgs(), label=label, width=f"{widths[p]:.4f}")
    for a, b in diagram.covering_edges:
        dot.edge(a.render_rgs(), b.render_rgs())
    return dot.source
