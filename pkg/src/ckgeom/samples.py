"""Sample tables and their JSON / CSV files (schema "ckgeom.v1")."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import jsonschema
import numpy as np

from . import compact as cp
from . import conformal as cf
from . import cycles as cy
from .errors import CKGeomError
from .motion import compose, one_param
from .space import Chart, ChartPoint, KappaPair, WeierstrassPoint, from_weierstrass, sigma_residual

SCHEMA_ID = "ckgeom.v1"


class MalformedSampleError(ValueError):
    """A sample file that cannot be read back as a table."""


@dataclass
class SampleTable:
    kp: KappaPair | None
    ell: float
    chart: str
    columns: list[str]
    rows: list[list] = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def column(self, name: str) -> np.ndarray:
        i = self.columns.index(name)
        return np.array([row[i] for row in self.rows], dtype=float)


def load_schema() -> dict:
    text = resources.files("ckgeom").joinpath("schema", f"{SCHEMA_ID}.json").read_text()
    return json.loads(text)


def _plain(value):
    """JSON-safe scalar: numpy types unwrapped, non-finite floats as null."""
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    return value


def to_document(table: SampleTable) -> dict:
    doc = {
        "schema": SCHEMA_ID,
        "space": {"k1": float(table.kp.k1), "k2": float(table.kp.k2)},
        "ell": float(table.ell),
        "chart": table.chart,
        "columns": list(table.columns),
        "rows": [[_plain(v) for v in row] for row in table.rows],
    }
    if table.meta:
        doc["meta"] = {k: _plain(v) for k, v in table.meta.items()}
    return doc


def dumps_json(table: SampleTable) -> str:
    # json uses repr() for floats, which is the shortest round-trip decimal
    return json.dumps(to_document(table), allow_nan=False, separators=(",", ":")) + "\n"


def _csv_cell(value) -> str:
    value = _plain(value)
    if value is None:
        return "nan"
    if isinstance(value, bool):
        return "1" if value else "0"
    return repr(value) if isinstance(value, float) else str(value)


def dumps_csv(table: SampleTable) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([_csv_cell(v) for v in row])
    return buf.getvalue()


def validate_document(doc) -> None:
    try:
        jsonschema.validate(doc, load_schema())
    except jsonschema.ValidationError as exc:
        raise MalformedSampleError(f"schema violation: {exc.message}") from exc
    width = len(doc["columns"])
    for i, row in enumerate(doc["rows"]):
        if len(row) != width:
            raise MalformedSampleError(f"row {i} has {len(row)} cells, expected {width}")


def _parse_cell(text: str):
    try:
        return float(text)
    except ValueError:
        return text


def read_table(path: str | Path) -> SampleTable:
    """Read a JSON or CSV sample file; raises MalformedSampleError or OSError."""
    path = Path(path)
    text = path.read_text()
    if path.suffix.lower() == ".csv":
        rows = list(csv.reader(io.StringIO(text)))
        if not rows or not rows[0]:
            raise MalformedSampleError("CSV file has no header row")
        header, body = rows[0], rows[1:]
        for i, row in enumerate(body):
            if len(row) != len(header):
                raise MalformedSampleError(f"row {i} has {len(row)} cells, expected {len(header)}")
        # CSV carries no space header; callers only use the columns
        return SampleTable(None, 1.0, "", header, [[_parse_cell(c) for c in row] for row in body])
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedSampleError(f"invalid JSON: {exc}") from exc
    validate_document(doc)
    kp = KappaPair(doc["space"]["k1"], doc["space"]["k2"])
    return SampleTable(kp, doc["ell"], doc["chart"], doc["columns"], doc["rows"], doc.get("meta", {}))


# ------------------------------------------------------------------ samplers

def _motion_and_conformal(kp: KappaPair, offset: float, angle: float):
    """The motion exp(offset P2) exp(angle J12) as a 3x3 and a 4x4 matrix."""
    g = compose(one_param(kp, "P2", offset), one_param(kp, "J12", angle))
    m4 = cp.conf_subgroup(kp, 1.0, "P2", offset).m @ cp.conf_subgroup(kp, 1.0, "J12", angle).m
    return g, m4


def sample_geodesic(kp: KappaPair, n: int = 200, offset: float = 0.3, angle: float = 0.4,
                    span: float = 1.0, chart: str = "parallel1") -> SampleTable:
    """Points g exp(t P1) O along a moved geodesic, with the moved cycle equation as residual.

    The points come from 3x3 motions and the cycle from the 4x4 conformal
    action, so the residual column compares two independent routes.
    """
    g, m4 = _motion_and_conformal(kp, offset, angle)
    line = cy.transform_conformal(cy.Cycle(0.0, 0.0, 1.0, 0.0), kp, 1.0, m4)
    origin = np.array([1.0, 0.0, 0.0])
    table = SampleTable(kp, 1.0, Chart.parse(chart).value,
                        ["t", "u1", "u2", "x0", "x1", "x2", "residual"])
    for t in np.linspace(-span, span, n):
        w = WeierstrassPoint.from_array(g.m @ one_param(kp, "P1", float(t)).m @ origin)
        p = from_weierstrass(kp, w, chart)
        residual = max(abs(cy.evaluate(line, kp, p)), abs(sigma_residual(kp, w)))
        table.rows.append([float(t), p.u1, p.u2, w.x0, w.x1, w.x2, residual])
    table.meta = {"cycle": ",".join(repr(v) for v in line.as_array())}
    return table


def sample_embedding(kp: KappaPair, ell: float = 1.0, grid: int = 21, span: float = 1.0,
                     chart: str = "parallel1") -> SampleTable:
    """Cone and compact images of a chart grid; points outside the chart are skipped."""
    table = SampleTable(kp, ell, Chart.parse(chart).value,
                        ["u1", "u2", "s_plus", "s_minus", "s1", "s2", "ts_plus", "ts1", "ts2", "at_infinity"])
    values = np.linspace(-span, span, grid)
    for u1 in values:
        for u2 in values:
            try:
                s, q = cp.embed_2d(kp, ell, ChartPoint(chart, float(u1), float(u2)))
            except CKGeomError:
                continue
            table.rows.append([float(u1), float(u2), *s.as_array().tolist(), q.ts_plus, q.ts1, q.ts2, q.at_infinity])
    return table


def line_span(k1: float) -> float:
    """Parameter half-range that shows the whole image of the line: up to the antipode when compact."""
    if k1 > 0:
        return math.pi / math.sqrt(k1) * (1 - 1e-3)
    if k1 < 0:
        return 6.0 / math.sqrt(-k1)
    return 20.0


def sample_embed1d(k1: float, ell: float = 1.0, n: int = 101, span: float | None = None) -> SampleTable:
    """Compact images (ts_plus, ts1) and angle of line points a."""
    span = line_span(k1) if span is None else span
    table = SampleTable(KappaPair(k1, 0.0), ell, "line", ["a", "ts_plus", "ts1", "angle"])
    for a in np.linspace(-span, span, n):
        tsp, ts1, angle = cp.embed_1d(k1, ell, float(a))
        table.rows.append([float(a), tsp, ts1, angle])
    return table


def sample_dilation_orbit(kp: KappaPair, n: int = 50, rho: float = 0.5,
                          center: tuple[float, float] = (0.1, 0.2), lam_span: float = 1.0) -> SampleTable:
    """Cycles fitted to dilated samples of a circle, one row per dilation parameter.

    ``closed_form_gap`` compares each fit with the image of the circle under
    the 4x4 dilation matrix.
    """
    base = cy.circle(kp, ChartPoint(Chart.PARALLEL_I, *center), rho)
    points = cy.sample_zero_set(base, kp, 60, 0.8)
    table = SampleTable(kp, 1.0, Chart.POLAR.value,
                        ["lambda", "c_xi", "alpha1", "alpha2", "c0", "kind", "kg", "fit_residual", "closed_form_gap"])
    for lam in np.linspace(-lam_span, lam_span, n):
        images = []
        for p in points:
            try:
                images.append(cf.dilation_flow(kp, float(lam), p))
            except (CKGeomError, ArithmeticError):
                continue
        fitted = cy.fit_cycle(kp, images)
        exact = cy.transform_conformal(base, kp, 1.0, cp.conf_subgroup(kp, 1.0, "D", float(lam)).m)
        kind = cy.classify(fitted, kp)
        try:
            kg = cy.geodesic_curvature(fitted, kp)
        except CKGeomError:
            kg = math.nan
        table.rows.append([float(lam), *fitted.as_array().tolist(), kind.value, kg,
                           cy.fit_residual(fitted, kp, images),
                           float(np.max(np.abs(fitted.as_array() - exact.as_array())))])
    return table


def sample_census(kp: KappaPair, ell: float = 1.0, grid: int = 200) -> SampleTable:
    """Boundary (infinity locus) points of the census, with summary numbers as metadata."""
    census = cp.completion_census(kp, ell, grid)
    table = SampleTable(kp, ell, "compact", ["ts_plus", "ts1", "ts2"],
                        [list(map(float, row)) for row in census["boundary"]])
    meta = {"grid": grid}
    for group in ("forward", "inverse", "coverage"):
        for key, value in census[group].items():
            meta[f"{group}.{key}"] = value
    table.meta = meta
    return table
