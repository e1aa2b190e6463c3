"""Running sweeps and writing plot-ready tables plus a metadata sidecar.

Floats are written with ``repr`` so every exported value round-trips exactly.
"""
from __future__ import annotations

import ast
import csv
import json
import logging
import operator
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable, Mapping, Optional, Sequence

import numpy as np

from . import __version__
from .config import ExperimentConfig
from .ensembles import ensemble, sample_run
from .errors import ConfigError
from .measures import steady_state
from .presets import PRESETS, SeriesSpec, Sweep, get_preset

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1
FORMATS = ("csv", "json")
STEADY_STATE_FRACTION = 0.2


@dataclass(frozen=True, eq=False)
class SeriesResult:
    spec: SeriesSpec
    steps: np.ndarray
    columns: dict[str, np.ndarray]

    def column_names(self) -> list[str]:
        return ["step", *self.columns]

    def rows(self) -> Iterable[list]:
        for i, step in enumerate(self.steps):
            yield [int(step), *(float(v[i]) for v in self.columns.values())]

    def steady(self, column: str) -> float:
        return steady_state(self.columns[column], STEADY_STATE_FRACTION)


def run_series(spec: SeriesSpec, workers: Optional[int] = None) -> SeriesResult:
    if spec.is_ensemble:
        stats = ensemble(spec.config, spec.samples, workers=workers)
        cols = dict(stats.mean)
        cols.update({f"{k}_std": v for k, v in stats.std.items()})
        return SeriesResult(spec, stats.steps, cols)
    series = sample_run(spec.config, 0)
    return SeriesResult(spec, series.steps, series.as_arrays())


def run_sweep(sweep: Sweep, workers: Optional[int] = None) -> list[SeriesResult]:
    results = []
    for spec in sweep.series:
        log.info("running %s/%s (%d sample%s)", sweep.name, spec.name, spec.samples,
                 "" if spec.samples == 1 else "s")
        results.append(run_series(spec, workers))
    return results


def _fmt(v: Any) -> str:
    return repr(v) if isinstance(v, float) else str(v)


def write_table(result: SeriesResult, path: Path, fmt: str) -> None:
    if fmt == "csv":
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(result.column_names())
            for row in result.rows():
                w.writerow([_fmt(v) for v in row])
    elif fmt == "json":
        payload = {"columns": result.column_names(), "rows": list(result.rows())}
        path.write_text(json.dumps(payload, indent=1) + "\n")
    else:
        raise ConfigError(f"unknown format {fmt!r}", field="format")


def series_filename(sweep: Sweep, spec: SeriesSpec, fmt: str) -> str:
    return f"{sweep.name}_{spec.name}.{fmt}"


def metadata(sweep: Sweep, fmt: str) -> dict[str, Any]:
    return {
        "schema_version": SCHEMA_VERSION,
        "tool": "cmscramble",
        "tool_version": __version__,
        "sweep": sweep.name,
        "format": fmt,
        "units": "nats",
        "steady_state_fraction": STEADY_STATE_FRACTION,
        "conventions": {
            "quadrature_order": "interleaved x,p",
            "vacuum_variance": 0.5,
            "mode_indexing": "0-based; 0=S, 1=M1, 2..n_memory=M2, then environment",
        },
        "defaults_note": "xi defaults to 1.0 and steps to 100 where a figure does not state them",
        "notes": dict(sweep.notes),
        "series": [
            {**s.to_dict(), "file": series_filename(sweep, s, fmt)} for s in sweep.series
        ],
    }


def export(sweep: Sweep, results: Sequence[SeriesResult], out_dir: Path, fmt: str = "csv") -> list[Path]:
    """Write one table per series and ``<sweep>_metadata.json``; returns all paths."""
    if fmt not in FORMATS:
        raise ConfigError(f"unknown format {fmt!r}; expected one of {FORMATS}", field="format")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for res in results:
        p = out_dir / series_filename(sweep, res.spec, fmt)
        write_table(res, p, fmt)
        paths.append(p)
    meta = out_dir / f"{sweep.name}_metadata.json"
    meta.write_text(json.dumps(metadata(sweep, fmt), indent=2) + "\n")
    paths.append(meta)
    return paths


def read_table(path: Path) -> tuple[list[str], np.ndarray]:
    path = Path(path)
    if path.suffix == ".json":
        payload = json.loads(path.read_text())
        return payload["columns"], np.array(payload["rows"], dtype=float)
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], np.array(rows[1:], dtype=float)


# --- configuration loading -------------------------------------------------

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
           ast.Div: operator.truediv, ast.Pow: operator.pow}


def _arith(node):
    if isinstance(node, ast.Expression):
        return _arith(node.body)
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
        return node.value
    if isinstance(node, ast.Name) and node.id == "pi":
        return np.pi
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _arith(node.operand)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        return _BINOPS[type(node.op)](_arith(node.left), _arith(node.right))
    raise ValueError("not an arithmetic expression")


def parse_value(text: str) -> Any:
    """Override value: JSON literal, arithmetic with ``pi`` (``9*pi/20``), or a bare string."""
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        pass
    try:
        return float(_arith(ast.parse(text, mode="eval")))
    except (SyntaxError, ValueError, ZeroDivisionError):
        return text


def parse_overrides(items: Iterable[str]) -> list[tuple[str, Any]]:
    out = []
    for item in items:
        key, sep, value = item.partition("=")
        if not sep or not key.strip():
            raise ConfigError(f"override {item!r} is not of the form key=value", field=item)
        out.append((key.strip(), parse_value(value.strip())))
    return out


def _load_document(path: Path) -> Any:
    text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def sweep_from_document(doc: Any, default_name: str) -> Sweep:
    if not isinstance(doc, Mapping):
        raise ConfigError("config document must be a JSON object")
    if "series" in doc:
        series = doc["series"]
        if not isinstance(series, list):
            raise ConfigError("'series' must be a list", field="series")
        name = str(doc.get("sweep", doc.get("name", default_name)))
        notes = doc.get("notes", {})
        return Sweep(name, tuple(SeriesSpec.from_dict(s) for s in series), notes)
    doc = dict(doc)
    name = str(doc.pop("name", default_name))
    samples = int(doc.pop("samples", 1))
    return Sweep(name, (SeriesSpec("run", ExperimentConfig.from_dict(doc), samples),))


def load_config(
    source: str | Path,
    overrides: Sequence[tuple[str, Any]] = (),
    samples: Optional[int] = None,
) -> Sweep:
    """Resolve a preset name or a JSON file into a validated sweep.

    A file may hold a single flat config (optionally with ``name`` and
    ``samples``), a list of series under ``series``, or a metadata sidecar
    written by :func:`export`, which reproduces that run exactly.
    ``samples`` replaces the ensemble size of every stochastic series.
    """
    source_str = str(source)
    if source_str in PRESETS:
        sweep = get_preset(source_str)
    else:
        sweep = sweep_from_document(_load_document(Path(source_str)), Path(source_str).stem)
    for key, value in overrides:
        sweep = sweep.map_configs(lambda c, k=key, v=value: c.with_override(k, v))
    if samples is not None:
        if samples < 1:
            raise ConfigError("samples must be >= 1", field="samples")
        sweep = Sweep(sweep.name, tuple(
            SeriesSpec(s.name, s.config, samples if s.config.stochastic else s.samples) for s in sweep.series
        ), sweep.notes)
    return sweep
