"""Network CSV input, result JSON output and Q-Q plot files.

Network CSV
-----------
Triadic files have the header ``i,j,k,y`` followed by zero or more covariate
columns ``x1..xP``; dyadic files drop ``k``. Indices are 1-based. Each row is one
triad (dyad); ``y`` must be 0 or 1. Triads that never appear are treated as
absent links with unknown covariates. In compact files the ``y`` column is
left out and every row is a formed link. Reading the covariates of a triad
that was never listed raises :class:`DataError`, so estimation needs every
triad of the informative subgraphs to be present in the file. Blank lines and
lines starting with ``#`` are skipped.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from .errors import DataError, HexLogitError, InvalidArgumentError
from .network import TriadicNetwork, bipartite_network
from .results import EstimationResult

SCHEMA_VERSION = 1


class OutputError(HexLogitError, OSError):
    exit_code = 3


def _parse_header(fields: list[str]) -> tuple[int, bool, int]:
    """Return ``(number of index columns, has y column, P)``."""
    names = [f.strip().lower() for f in fields]
    if names[:3] == ["i", "j", "k"]:
        idx = 3
    elif names[:2] == ["i", "j"]:
        idx = 2
    else:
        raise DataError("header must start with i,j,k or i,j", line=1)
    has_y = names[idx:idx + 1] == ["y"]
    xs = names[idx + has_y:]
    if xs != [f"x{q}" for q in range(1, len(xs) + 1)]:
        raise DataError("covariate columns must be named x1..xP in order", line=1)
    return idx, has_y, len(xs)


def parse_network_csv(path, n: int | None = None) -> TriadicNetwork:
    """Read a triadic (``i,j,k,y,x...``) or dyadic (``i,j,y,x...``) network.

    Parameters
    ----------
    path : str or Path
    n : int, optional
        Part size. Defaults to the largest index in the file.

    Raises
    ------
    DataError
        On malformed rows, ``y`` outside ``{0, 1}``, bad indices, duplicate
        triads or ragged covariate columns; the message carries the line number.
    """
    path = Path(path)
    try:
        fh = open(path, newline="")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror}") from exc
    with fh:
        reader = csv.reader(fh)
        header = None
        rows = []
        for lineno, fields in enumerate(reader, start=1):
            if not fields or not "".join(fields).strip() or fields[0].lstrip().startswith("#"):
                continue
            if header is None:
                header = _parse_header(fields)
                idx, has_y, p = header
                width = idx + has_y + p
                continue
            if len(fields) != width:
                raise DataError(f"expected {width} fields, got {len(fields)}", line=lineno)
            try:
                ids = [int(f) for f in fields[:idx]]
            except ValueError:
                raise DataError("node indices must be integers", line=lineno) from None
            y = fields[idx].strip() if has_y else "1"
            if y not in ("0", "1"):
                raise DataError(f"y must be 0 or 1, got {y!r}", line=lineno)
            try:
                x = [float(f) for f in fields[idx + has_y:]]
            except ValueError:
                raise DataError("covariates must be numeric", line=lineno) from None
            if not all(math.isfinite(v) for v in x):
                raise DataError("covariates must be finite", line=lineno)
            if min(ids) < 1:
                raise DataError("node indices are 1-based", line=lineno)
            rows.append((lineno, ids, y == "1", x))
    if header is None:
        raise DataError(f"{path} has no header")
    idx, _, p = header
    top = max((max(ids) for _, ids, _, _ in rows), default=0)
    if n is None:
        n = max(top, 1)
    elif n < top:
        raise DataError(f"index {top} exceeds --n {n}")
    dims = (n,) * idx
    seen = np.zeros(dims, dtype=np.int64)
    cov = np.full(dims + (p,), np.nan) if p else None
    links = []
    for lineno, ids, y, x in rows:
        at = tuple(v - 1 for v in ids)
        if seen[at]:
            raise DataError(f"duplicate {'triad' if idx == 3 else 'dyad'} {tuple(ids)} (first on line {seen[at]})",
                            line=lineno)
        seen[at] = lineno
        if p:
            cov[at] = x
        if y:
            links.append(at)
    edges = np.array(links, dtype=np.int64).reshape(-1, idx)
    if idx == 2:
        return bipartite_network(n, edges, covariates=cov, missing_ok=True)
    return TriadicNetwork(n, edges, covariates=cov, p=p, missing_ok=True)


def write_network_csv(net: TriadicNetwork, path, dyadic: bool | None = None) -> None:
    """Write every triad (dyad) with its outcome and covariates."""
    dyadic = net.n3 == 1 if dyadic is None else dyadic
    y = net.adjacency
    cov = net.covariate_cube
    p = net.p if cov is not None else 0
    head = ["i", "j"] + ([] if dyadic else ["k"]) + ["y"] + [f"x{q + 1}" for q in range(p)]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(head)
        for idx in np.ndindex(y.shape):
            ids = [v + 1 for v in (idx[:2] if dyadic else idx)]
            xs = [repr(float(v)) for v in cov[idx]] if p else []
            w.writerow(ids + [int(y[idx])] + xs)


# -- JSON ----------------------------------------------------------------------


def _clean(obj):
    """Plain JSON types; non-finite floats become null."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else None
    return obj


def result_payload(res: EstimationResult, level: float = 0.95, timing: bool = False) -> dict:
    """Ordered dictionary for an estimate, with intervals and Wald p-values."""
    from .inference import wald_and_ci

    out = {"schema": SCHEMA_VERSION, "kind": "estimate"}
    body = res.to_dict()
    if not timing:
        body.pop("timing", None)
    out.update(body)
    se = np.asarray(res.se, dtype=float)
    if np.all(se > 0) and np.all(np.isfinite(se)):
        w95 = wald_and_ci(res.beta_hat, se, 0.95)
        wl = wald_and_ci(res.beta_hat, se, level)
        out["ci95"] = w95["ci"]
        out["level"] = level
        out["ci"] = wl["ci"]
        out["wald_p"] = w95["wald_p"]
    else:
        out.update({"ci95": None, "level": level, "ci": None, "wald_p": None})
    return out


def dumps(payload: dict) -> str:
    """Deterministic JSON text; floats use the shortest repr that round-trips."""
    return json.dumps(_clean(payload), indent=2, allow_nan=False) + "\n"


def write_json(payload: dict, path) -> None:
    path = Path(path)
    try:
        path.write_text(dumps(payload))
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc.strerror}") from exc


def write_result_json(obj, path, level: float = 0.95, timing: bool = False) -> None:
    """Write an :class:`EstimationResult` or a Monte Carlo summary."""
    if isinstance(obj, EstimationResult):
        payload = result_payload(obj, level, timing)
    elif hasattr(obj, "to_dict"):
        payload = {"schema": SCHEMA_VERSION, "kind": "summary", **obj.to_dict()}
    else:
        payload = dict(obj)
    write_json(payload, path)


def read_json(path) -> dict:
    path = Path(path)
    try:
        return json.loads(path.read_text())
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise DataError(f"{path} is not valid JSON: {exc.msg}", line=exc.lineno) from exc


def read_result_json(path) -> EstimationResult:
    data = read_json(path)
    if data.get("kind") != "estimate":
        raise InvalidArgumentError(f"{path} does not hold an estimate")
    for key in ("vcov", "se", "beta_hat"):
        data[key] = np.array(data[key], dtype=float) if data[key] is not None else np.nan
    return EstimationResult.from_dict(data)


# -- Q-Q output ----------------------------------------------------------------


def write_qq_csv(points: np.ndarray, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["theoretical", "empirical"])
        for t, e in points:
            w.writerow([repr(float(t)), repr(float(e))])


def read_qq_csv(path) -> np.ndarray:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return np.array(rows[1:], dtype=float).reshape(-1, 2)


def write_qq_svg(points: np.ndarray, path, size: int = 400, title: str = "") -> None:
    """Scatter of ``points`` with the 45-degree reference line."""
    pts = np.asarray(points, dtype=float)
    lo = float(pts.min())
    hi = float(pts.max())
    if hi == lo:
        hi = lo + 1.0
    pad = 40

    def sx(v):
        return pad + (v - lo) / (hi - lo) * (size - 2 * pad)

    def sy(v):
        return size - pad - (v - lo) / (hi - lo) * (size - 2 * pad)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
        f'<rect width="{size}" height="{size}" fill="white"/>',
        f'<line x1="{sx(lo):.2f}" y1="{sy(lo):.2f}" x2="{sx(hi):.2f}" y2="{sy(hi):.2f}" stroke="gray" stroke-dasharray="4 3"/>',
        f'<rect x="{pad}" y="{pad}" width="{size - 2 * pad}" height="{size - 2 * pad}" fill="none" stroke="black"/>',
    ]
    for t, e in pts:
        parts.append(f'<circle cx="{sx(t):.2f}" cy="{sy(e):.2f}" r="2" fill="steelblue"/>')
    parts.append(f'<text x="{size / 2}" y="{size - 8}" text-anchor="middle" font-size="12">theoretical</text>')
    parts.append(f'<text x="12" y="{size / 2}" text-anchor="middle" font-size="12" '
                 f'transform="rotate(-90 12 {size / 2})">empirical</text>')
    parts.append(f'<text x="{pad}" y="{pad - 8}" font-size="10">{lo:.4g}</text>')
    parts.append(f'<text x="{size - pad}" y="{pad - 8}" text-anchor="end" font-size="10">{hi:.4g}</text>')
    if title:
        parts.append(f'<text x="{size / 2}" y="20" text-anchor="middle" font-size="13">{title}</text>')
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts) + "\n")
