"""TOML manifests describing a chart, frame, metric, structure and submanifolds."""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib

from .expr import Chart, DomainError, Expr, ExprSyntaxError
from .frame import Frame, Manifold, MetricFrame, VectorField
from .linalg import Vec
from .structure import StructureData, TransSasakianParams
from .submanifold import SubmanifoldSpec

__all__ = [
    "ManifestError",
    "Manifest",
    "ReferenceValues",
    "parse_manifest",
    "load_manifest",
    "E_SYNTAX",
    "E_EXPR",
    "E_SCHEMA",
    "E_DIMENSION",
    "E_SINGULAR_FRAME",
    "E_ASYMMETRIC_METRIC",
    "E_DEGENERATE_METRIC",
]

E_SYNTAX = "E_SYNTAX"
E_EXPR = "E_EXPR"
E_SCHEMA = "E_SCHEMA"
E_DIMENSION = "E_DIMENSION"
E_SINGULAR_FRAME = "E_SINGULAR_FRAME"
E_ASYMMETRIC_METRIC = "E_ASYMMETRIC_METRIC"
E_DEGENERATE_METRIC = "E_DEGENERATE_METRIC"


class ManifestError(ValueError):
    def __init__(self, code: str, message: str, line: int | None = None, column: int | None = None):
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(f"{code}: {message}{where}")
        self.code = code
        self.line = line
        self.column = column


@dataclass
class ReferenceValues:
    """Literature values to compare against; never used in computation."""

    params: TransSasakianParams | None = None
    connection: dict[tuple[int, int], Vec] = field(default_factory=dict)


@dataclass
class Manifest:
    name: str
    chart: Chart
    manifold: Manifold
    structure: StructureData | None
    submanifolds: dict[str, SubmanifoldSpec]
    seed: int = 0
    format: str = "human"
    reference: ReferenceValues = field(default_factory=ReferenceValues)

    @property
    def dim(self) -> int:
        return self.chart.dim


def _require(table: dict, key: str, kind: type | tuple, where: str) -> Any:
    if key not in table:
        raise ManifestError(E_SCHEMA, f"missing key {key!r} in [{where}]")
    value = table[key]
    if not isinstance(value, kind):
        raise ManifestError(E_SCHEMA, f"key {key!r} in [{where}] has the wrong type")
    return value


def _expr(chart: Chart, value: Any, where: str) -> Expr:
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise ManifestError(E_SCHEMA, f"{where}: expressions are strings or integers")
    try:
        return chart.expr(value)
    except ExprSyntaxError as exc:
        raise ManifestError(E_EXPR, f"{where}: {exc}") from exc
    except DomainError as exc:
        raise ManifestError(E_EXPR, f"{where}: {exc}") from exc


def _row(chart: Chart, row: Any, n: int, where: str) -> list[Expr]:
    if not isinstance(row, list):
        raise ManifestError(E_SCHEMA, f"{where} must be an array")
    if len(row) != n:
        raise ManifestError(E_DIMENSION, f"{where} has {len(row)} entries, expected {n}")
    return [_expr(chart, v, f"{where}[{k + 1}]") for k, v in enumerate(row)]


def _matrix(chart: Chart, rows: Any, n: int, where: str) -> list[list[Expr]]:
    if not isinstance(rows, list):
        raise ManifestError(E_SCHEMA, f"{where} must be an array of rows")
    if len(rows) != n:
        raise ManifestError(E_DIMENSION, f"{where} has {len(rows)} rows, expected {n}")
    return [_row(chart, r, n, f"{where} row {i + 1}") for i, r in enumerate(rows)]


def _syntax_error(exc: tomllib.TOMLDecodeError) -> ManifestError:
    line = getattr(exc, "lineno", None)
    col = getattr(exc, "colno", None)
    msg = getattr(exc, "msg", str(exc))
    if line is None:
        # older decoders only embed the position in the message
        import re

        m = re.search(r"line (\d+), column (\d+)", str(exc))
        if m:
            line, col = int(m.group(1)), int(m.group(2))
            msg = str(exc)[: m.start()].rstrip(" (")
    return ManifestError(E_SYNTAX, msg, line, col)


def parse_manifest(text: str) -> Manifest:
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise _syntax_error(exc) from exc

    meta = data.get("manifest", {})
    name = meta.get("name", "manifest") if isinstance(meta, dict) else "manifest"

    chart_t = _require(data, "chart", dict, "chart")
    coords = _require(chart_t, "coords", list, "chart")
    if not coords or not all(isinstance(c, str) for c in coords):
        raise ManifestError(E_SCHEMA, "chart.coords must be a nonempty array of names")
    try:
        chart = Chart(coords, chart_t.get("excluded", ""))
    except (DomainError, ValueError) as exc:
        raise ManifestError(E_SCHEMA, str(exc)) from exc
    n = chart.dim

    frame_t = _require(data, "frame", dict, "frame")
    fields_t = _require(frame_t, "fields", list, "frame")
    if len(fields_t) != n:
        raise ManifestError(E_DIMENSION, f"{len(fields_t)} frame fields on a {n}-coordinate chart")
    fields, names = [], []
    for k, f in enumerate(fields_t):
        if not isinstance(f, dict):
            raise ManifestError(E_SCHEMA, "each [[frame.fields]] entry must be a table")
        names.append(str(f.get("name", f"E{k + 1}")))
        coeffs = _row(chart, _require(f, "coeffs", list, "frame.fields"), n, f"frame field {names[-1]}")
        fields.append(VectorField(chart, coeffs))
    try:
        frame = Frame(chart, fields, names)
    except DomainError as exc:
        raise ManifestError(E_SINGULAR_FRAME, str(exc)) from exc

    metric_t = _require(data, "metric", dict, "metric")
    g = _matrix(chart, _require(metric_t, "rows", list, "metric"), n, "metric")
    for i in range(n):
        for j in range(i + 1, n):
            if g[i][j] != g[j][i]:
                raise ManifestError(E_ASYMMETRIC_METRIC, f"g[{i + 1}][{j + 1}] = {g[i][j]} but g[{j + 1}][{i + 1}] = {g[j][i]}")
    try:
        metric = MetricFrame(frame, g)
    except DomainError as exc:
        raise ManifestError(E_DEGENERATE_METRIC, str(exc)) from exc
    manifold = Manifold(chart, frame, metric, name)

    structure = None
    if "structure" in data:
        st = _require(data, "structure", dict, "structure")
        phi = _matrix(chart, _require(st, "phi", list, "structure"), n, "structure.phi")
        xi = _row(chart, _require(st, "xi", list, "structure"), n, "structure.xi")
        structure = StructureData(manifold, phi, xi)

    subs: dict[str, SubmanifoldSpec] = {}
    for k, s in enumerate(data.get("submanifold", [])):
        if not isinstance(s, dict):
            raise ManifestError(E_SCHEMA, "each [[submanifold]] entry must be a table")
        sname = _require(s, "name", str, "submanifold")
        if sname in subs:
            raise ManifestError(E_SCHEMA, f"duplicate submanifold {sname!r}")
        tangent = _require(s, "tangent", list, f"submanifold {sname}")
        vecs = [Vec(chart, _row(chart, t, n, f"submanifold {sname} field {j + 1}")) for j, t in enumerate(tangent)]
        fnames = s.get("names")
        subs[sname] = SubmanifoldSpec(sname, vecs, list(fnames) if fnames else None)

    options = data.get("options", {})
    seed = options.get("seed", 0)
    fmt = options.get("format", "human")
    if not isinstance(seed, int) or fmt not in ("human", "machine"):
        raise ManifestError(E_SCHEMA, "options.seed must be an integer and options.format human|machine")

    reference = ReferenceValues()
    ref_t = data.get("reference")
    if isinstance(ref_t, dict):
        keys = ("alpha", "beta", "xi_alpha", "xi_beta")
        if all(k in ref_t for k in keys):
            vals = [_expr(chart, ref_t[k], f"reference.{k}") for k in keys]
            reference.params = TransSasakianParams(*vals)
        for entry in ref_t.get("connection", []):
            i = _require(entry, "i", int, "reference.connection")
            j = _require(entry, "j", int, "reference.connection")
            comps = _row(chart, _require(entry, "components", list, "reference.connection"), n, "reference.connection")
            reference.connection[i - 1, j - 1] = Vec(chart, comps)

    return Manifest(name, chart, manifold, structure, subs, seed, fmt, reference)


def load_manifest(path: str | Path) -> Manifest:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ManifestError(E_SCHEMA, f"cannot read {p}: {exc.strerror}") from exc
    return parse_manifest(text)
