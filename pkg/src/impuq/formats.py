"""File formats: JSON for intervals, bundles, ellipsoids, and alpha weights;
two-column CSV for CDFs and gambles; line-delimited JSON for machine output.

All numeric output is printed with 9 significant digits so repeated runs are
byte-identical.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .core import Gamble, ParseError, TabulatedCDF, ValidationError
from .credal import ProbabilityIntervals
from .decomposition import AlphaEstimate, PredictionBundle
from .randomset import ClassEllipsoid


def format_float(x: float) -> str:
    return f"{float(x):.9g}"


def _round_floats(obj):
    """Round floats to 9 significant digits, recursively."""
    if isinstance(obj, float):
        return float(format_float(obj))
    if isinstance(obj, (np.floating,)):
        return float(format_float(float(obj)))
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return _round_floats(obj.tolist())
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    return obj


def write_ndjson(records: list[dict], path: str | Path) -> None:
    """Write one JSON object per line, keys in insertion order."""
    lines = [json.dumps(_round_floats(rec), ensure_ascii=True) for rec in records]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _load_json(path: str | Path) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror or exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}:{exc.lineno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise ParseError(f"{path}:1: expected a JSON object at the top level")
    return data


def _require(data: dict, key: str, path) -> object:
    if key not in data:
        raise ParseError(f"{path}: missing required field {key!r}")
    return data[key]


def load_probability_intervals(path: str | Path) -> ProbabilityIntervals:
    """JSON object with "lowers" and "uppers" arrays of equal length."""
    data = _load_json(path)
    lowers = _require(data, "lowers", path)
    uppers = _require(data, "uppers", path)
    try:
        return ProbabilityIntervals(np.asarray(lowers, float), np.asarray(uppers, float))
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{path}: lowers/uppers must be numeric arrays ({exc})") from exc


def load_bundle(path: str | Path) -> PredictionBundle:
    """JSON object with "kind" plus "samples" or "lowers"/"uppers" arrays."""
    data = _load_json(path)
    kind = _require(data, "kind", path)
    try:
        if "samples" in data:
            return PredictionBundle(kind=kind, samples=np.asarray(data["samples"], float))
        lowers = _require(data, "lowers", path)
        uppers = _require(data, "uppers", path)
        return PredictionBundle(
            kind=kind,
            lowers=np.asarray(lowers, float),
            uppers=np.asarray(uppers, float),
        )
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{path}: bundle payload must be numeric arrays ({exc})") from exc


def load_alphas(path: str | Path) -> AlphaEstimate:
    """JSON object with "alpha1" and "alpha2" (and optionally "method")."""
    data = _load_json(path)
    try:
        alpha1 = float(_require(data, "alpha1", path))
        alpha2 = float(_require(data, "alpha2", path))
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{path}: alpha1/alpha2 must be numbers") from exc
    return AlphaEstimate(
        alpha1=alpha1,
        alpha2=alpha2,
        method=str(data.get("method", "sensitivity")),
        evidence={"source": str(path)},
    )


def load_ellipsoids(path: str | Path) -> list[ClassEllipsoid]:
    """JSON object with an "ellipsoids" list of {"mean": [3], "covariance": [9]}.

    Covariances are row-major flat lists of 9 reals; "coverage" is optional
    and defaults to 0.95.
    """
    data = _load_json(path)
    entries = _require(data, "ellipsoids", path)
    if not isinstance(entries, list) or not entries:
        raise ParseError(f"{path}: 'ellipsoids' must be a non-empty list")
    out = []
    for idx, entry in enumerate(entries):
        if not isinstance(entry, dict):
            raise ParseError(f"{path}: ellipsoid {idx} must be an object")
        mean = entry.get("mean")
        cov = entry.get("covariance")
        if mean is None or cov is None:
            raise ParseError(f"{path}: ellipsoid {idx} needs 'mean' and 'covariance'")
        try:
            mean = np.asarray(mean, float)
            cov = np.asarray(cov, float)
        except (TypeError, ValueError) as exc:
            raise ParseError(f"{path}: ellipsoid {idx} has non-numeric entries") from exc
        if cov.shape == (9,):
            cov = cov.reshape(3, 3)
        try:
            out.append(
                ClassEllipsoid(
                    mean=mean, covariance=cov, coverage=float(entry.get("coverage", 0.95))
                )
            )
        except ValidationError as exc:
            raise ValidationError(f"{path}: ellipsoid {idx}: {exc}") from exc
    return out


def _load_two_column_csv(path: str | Path) -> tuple[np.ndarray, np.ndarray]:
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror or exc}") from exc
    xs: list[float] = []
    ys: list[float] = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = [p.strip() for p in line.split(",")]
        if len(parts) != 2:
            raise ParseError(f"{path}:{lineno}: expected two comma-separated columns")
        try:
            x, y = float(parts[0]), float(parts[1])
        except ValueError:
            if lineno == 1:
                continue  # header row
            raise ParseError(f"{path}:{lineno}: could not parse numbers from {line!r}")
        xs.append(x)
        ys.append(y)
    if len(xs) < 2:
        raise ParseError(f"{path}: need at least two data rows")
    return np.asarray(xs), np.asarray(ys)


def load_cdf(path: str | Path) -> TabulatedCDF:
    """Two-column CSV (abscissa, cumulative probability) with a header row."""
    xs, ps = _load_two_column_csv(path)
    return TabulatedCDF(xs=xs, ps=ps)


def load_gamble(path: str | Path) -> Gamble:
    """Two-column CSV (abscissa, payoff) with a header row."""
    xs, vals = _load_two_column_csv(path)
    return Gamble(values=vals, grid=xs)


def write_cdf(cdf: TabulatedCDF, path: str | Path) -> None:
    lines = ["x,p"] + [f"{format_float(x)},{format_float(p)}" for x, p in zip(cdf.xs, cdf.ps)]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_gamble(g: Gamble, path: str | Path) -> None:
    if g.domain_kind != "real-grid":
        raise ValidationError("only real-grid gambles have a CSV form")
    lines = ["x,value"] + [
        f"{format_float(x)},{format_float(v)}" for x, v in zip(g.grid, g.values)
    ]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
