"""Deterministic SVG 1.1 figures: 1D embeddings, cycle galleries, census heatmaps, sample plots."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from xml.sax.saxutils import escape

import numpy as np

from . import compact as cp
from . import cycles as cy
from .errors import DegenerateMetricError
from .samples import MalformedSampleError, SampleTable, line_span
from .space import Chart, ChartPoint, KappaPair, convert
from .trig import ck, sk, tk

PANEL = 300.0
MARGIN = 20.0
STROKE = 1.5


def num(v: float) -> str:
    text = f"{v:.3f}"
    return "0.000" if text == "-0.000" else text


@dataclass
class Svg:
    width: float
    height: float
    body: list[str] = field(default_factory=list)
    defs: list[str] = field(default_factory=list)

    def add(self, element: str) -> None:
        self.body.append(element)

    def line(self, p, q, stroke="#000", width=STROKE, **attrs) -> None:
        self.add(f'<line x1="{num(p[0])}" y1="{num(p[1])}" x2="{num(q[0])}" y2="{num(q[1])}" '
                 f'stroke="{stroke}" stroke-width="{num(width)}"{_attrs(attrs)}/>')

    def polyline(self, pts, stroke="#000", width=STROKE, **attrs) -> None:
        coords = " ".join(f"{num(x)},{num(y)}" for x, y in pts)
        self.add(f'<polyline points="{coords}" fill="none" stroke="{stroke}" '
                 f'stroke-width="{num(width)}"{_attrs(attrs)}/>')

    def circle(self, c, r, stroke="#000", fill="none", width=STROKE, **attrs) -> None:
        self.add(f'<circle cx="{num(c[0])}" cy="{num(c[1])}" r="{num(r)}" fill="{fill}" '
                 f'stroke="{stroke}" stroke-width="{num(width)}"{_attrs(attrs)}/>')

    def rect(self, x, y, w, h, fill="#fff", stroke="none", **attrs) -> None:
        self.add(f'<rect x="{num(x)}" y="{num(y)}" width="{num(w)}" height="{num(h)}" '
                 f'fill="{fill}" stroke="{stroke}"{_attrs(attrs)}/>')

    def text(self, p, label: str, size: float = 12.0, anchor: str = "middle") -> None:
        self.add(f'<text x="{num(p[0])}" y="{num(p[1])}" font-family="sans-serif" '
                 f'font-size="{num(size)}" text-anchor="{anchor}">{escape(label)}</text>')

    def render(self) -> str:
        head = (f'<?xml version="1.0" encoding="UTF-8"?>\n'
                f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
                f'width="{num(self.width)}" height="{num(self.height)}" '
                f'viewBox="0 0 {num(self.width)} {num(self.height)}">\n')
        defs = "<defs>\n" + "\n".join(self.defs) + "\n</defs>\n" if self.defs else ""
        return head + defs + "\n".join(self.body) + "\n</svg>\n"


def _attrs(attrs: dict) -> str:
    return "".join(f' {k.rstrip("_").replace("_", "-")}="{escape(str(v))}"' for k, v in attrs.items())


@dataclass(frozen=True)
class Panel:
    """A square panel mapping the world window [-half, half]^2 onto the page, y up."""

    left: float
    top: float
    half: float
    size: float = PANEL

    @property
    def scale(self) -> float:
        return self.size / (2.0 * self.half)

    def page(self, x: float, y: float) -> tuple[float, float]:
        cx, cy_ = self.left + self.size / 2.0, self.top + self.size / 2.0
        return cx + self.scale * x, cy_ - self.scale * y

    def frame(self, svg: Svg, title: str) -> None:
        svg.rect(self.left, self.top, self.size, self.size, fill="#fff", stroke="#888")
        svg.text((self.left + self.size / 2.0, self.top - 6.0), title)


def _canvas(panels: int, width_per=PANEL) -> tuple[Svg, list[float]]:
    svg = Svg(panels * (width_per + MARGIN) + MARGIN, PANEL + 2 * MARGIN + 20.0)
    svg.rect(0, 0, svg.width, svg.height, fill="#fff")
    return svg, [MARGIN + i * (width_per + MARGIN) for i in range(panels)]


# ------------------------------------------------------------- 1D embeddings

def embed1d_figure(values=(1.0, 0.0, -1.0), ell: float = 1.0, samples: int = 201, rays: int = 9) -> str:
    """One panel per k1 l^2: the circle S^1, the projected line, the pole and sample rays.

    Horizontal axis ts1, vertical axis ts_plus; the pole sits at ts_plus = -1.
    """
    svg, lefts = _canvas(len(values))
    for left, k1l2 in zip(lefts, values):
        k1 = k1l2 / (ell * ell)
        panel = Panel(left, MARGIN + 20.0, 1.6)
        panel.frame(svg, f"k1 l^2 = {k1l2:g}")
        svg.circle(panel.page(0, 0), panel.scale, stroke="#999", width=1.0, class_="sphere")
        svg.line(panel.page(-1.6, 0), panel.page(1.6, 0), stroke="#2a7", width=1.0, class_="projected-line")
        span = line_span(k1) * ell
        image = [cp.embed_1d(k1, ell, float(a))[:2] for a in np.linspace(-span, span, samples)]
        for a in np.linspace(-span, span, rays + 2)[1:-1]:
            tsp, ts1, _ = cp.embed_1d(k1, ell, float(a))
            # the ray from the pole through the image meets ts_plus = 0 at ts1 / (1 + ts_plus)
            hit = ts1 / (1.0 + tsp)
            far = (hit, 0.0) if abs(hit) > math.hypot(ts1, tsp + 1.0) else (ts1, tsp)
            far = (max(-1.6, min(1.6, far[0])), far[1])
            svg.line(panel.page(0, -1), panel.page(*far), stroke="#c96", width=0.75, class_="ray")
        svg.polyline([panel.page(ts1, tsp) for tsp, ts1 in image], stroke="#15c", width=2.0,
                     class_="image", id=f"image-{k1l2:g}")
        svg.circle(panel.page(0, -1), 4.0, fill="#000", stroke="#000", width=1.0, class_="pole")
        svg.text(panel.page(0.12, -1.12), "P", anchor="start")
    return svg.render()


# ------------------------------------------------------------- cycle gallery

def projected_point(kp: KappaPair, p: ChartPoint) -> tuple[float, float]:
    """Stereographic image (X, Y) of a point, X = t ck(k2, phi), Y = sqrt(k2) t sk(k2, phi), t = tk(k1, r/2)."""
    r, phi = convert(kp, p, Chart.POLAR).as_array()
    t = tk(kp.k1, r / 2.0)
    return t * ck(kp.k2, phi), math.sqrt(kp.k2) * t * sk(kp.k2, phi)


def projected_cycle(c: cy.Cycle, kp: KappaPair) -> tuple:
    """The cycle as a Euclidean circle ("circle", cx, cy, r) or line ("line", nx, ny, d) in the projected plane.

    With t^2 = X^2 + Y^2 the cycle equation becomes
    (2 c_xi - k1 c0) t^2 + 2 alpha1 X + 2 alpha2 Y / sqrt(k2) - c0 = 0.
    """
    if kp.k2 <= 0:
        raise DegenerateMetricError("the projected plane is Euclidean only for k2 > 0")
    quad = 2.0 * c.c_xi - kp.k1 * c.c0
    bx, by = c.alpha1, c.alpha2 / math.sqrt(kp.k2)
    if abs(quad) < 1e-12:
        n = math.hypot(bx, by)
        return "line", bx / n, by / n, c.c0 / (2.0 * n)
    cx, cy_ = -bx / quad, -by / quad
    r2 = cx * cx + cy_ * cy_ + c.c0 / quad
    return "circle", cx, cy_, math.sqrt(max(r2, 0.0))


GALLERY_CURVATURES = (0.0, 0.5, 1.0, 2.0)


def cycle_gallery(kp: KappaPair, curvatures=GALLERY_CURVATURES) -> str:
    """One panel per geodesic curvature, drawn in the projected plane and clipped to the model."""
    svg, lefts = _canvas(len(curvatures))
    bounded = kp.k1 < 0
    half = 1.15 / math.sqrt(-kp.k1) if bounded else 2.5
    for i, (left, kg) in enumerate(zip(lefts, curvatures)):
        c = cy.cycle_with_curvature(kp, kg)
        kind = cy.classify(c, kp).value
        panel = Panel(left, MARGIN + 20.0, half)
        panel.frame(svg, f"kg = {kg:g} ({kind})")
        clip = f"clip-{i}"
        if bounded:
            boundary = 1.0 / math.sqrt(-kp.k1)
            svg.defs.append(f'<clipPath id="{clip}"><circle cx="{num(panel.page(0, 0)[0])}" '
                            f'cy="{num(panel.page(0, 0)[1])}" r="{num(boundary * panel.scale)}"/></clipPath>')
            svg.circle(panel.page(0, 0), boundary * panel.scale, stroke="#999", width=1.0, class_="absolute")
        else:
            svg.defs.append(f'<clipPath id="{clip}"><rect x="{num(panel.left)}" y="{num(panel.top)}" '
                            f'width="{num(panel.size)}" height="{num(panel.size)}"/></clipPath>')
        shape = projected_cycle(c, kp)
        if shape[0] == "circle":
            svg.circle(panel.page(shape[1], shape[2]), shape[3] * panel.scale, stroke="#c22", width=2.0,
                       class_="cycle", clip_path=f"url(#{clip})")
        else:
            _, nx, ny, d = shape
            p, q = (d * nx - 3 * half * ny, d * ny + 3 * half * nx), (d * nx + 3 * half * ny, d * ny - 3 * half * nx)
            svg.line(panel.page(*p), panel.page(*q), stroke="#c22", width=2.0, class_="cycle",
                     clip_path=f"url(#{clip})")
        svg.circle(panel.page(0, 0), 2.5, fill="#000", stroke="#000", width=1.0, class_="origin")
    return svg.render()


# ------------------------------------------------------------ census heatmap

def census_heatmap(kp: KappaPair, ell: float = 1.0, grid: int = 200, bins: int = 60) -> str:
    """Counts of forward images over the (A, ts2) parameters of the compact model, with the infinity locus."""
    census = cp.completion_census(kp, ell, grid)
    ts = census["forward_points"]
    half = cp.ts2_half_range(kp.k2)
    angle = np.arctan2(ts[1], ts[0])
    counts, _, _ = np.histogram2d(angle, ts[2], bins=bins, range=[[-math.pi, math.pi], [-half, half]])
    peak = math.log1p(counts.max()) if counts.size and counts.max() > 0 else 1.0
    width, height = 2 * PANEL, PANEL
    svg = Svg(width + 2 * MARGIN + 40.0, height + 2 * MARGIN + 40.0)
    svg.rect(0, 0, svg.width, svg.height, fill="#fff")
    left, top = MARGIN + 40.0, MARGIN + 20.0

    def page(a: float, z: float) -> tuple[float, float]:
        return left + (a + math.pi) / (2 * math.pi) * width, top + (half - z) / (2 * half) * height

    cw, ch = width / bins, height / bins
    for i in range(bins):
        for j in range(bins):
            level = int(round(255 * (1.0 - math.log1p(counts[i, j]) / peak)))
            # bin j counts ts2 upwards, the page y axis runs downwards
            svg.rect(left + i * cw, top + (bins - 1 - j) * ch, cw, ch,
                     fill=f"#{level:02x}{level:02x}{level:02x}")
    boundary = census["boundary"]
    for tsp, ts1, ts2 in boundary:
        if abs(ts2) <= half:
            svg.circle(page(math.atan2(ts1, tsp), ts2), 1.2, stroke="#d22", fill="#d22", width=0.5, class_="infinity")
    for a in (-math.pi, math.pi):
        svg.circle(page(a, 0.0), 4.0, stroke="#15c", fill="none", width=1.5, class_="pole")
    svg.rect(left, top, width, height, fill="none", stroke="#444")
    svg.text((left + width / 2, top - 6.0), f"forward images on the compact model, k1 = {kp.k1:g}, k2 = {kp.k2:g}")
    svg.text((left + width / 2, top + height + 18.0), "angle A = atan2(ts1, ts_plus)")
    svg.text((left - 16.0, top + height / 2), "ts2", anchor="end")
    return svg.render()


# --------------------------------------------------------------- sample file

def table_plot(table: SampleTable, xcol: str | None = None, ycol: str | None = None) -> str:
    """Polyline of two numeric columns of a sample table."""
    numeric = [c for i, c in enumerate(table.columns)
               if table.rows and all(isinstance(r[i], (int, float)) and not isinstance(r[i], bool) for r in table.rows)]
    if len(numeric) < 2:
        raise MalformedSampleError("a plot needs two numeric columns")
    xcol = xcol or numeric[0]
    ycol = ycol or numeric[1]
    for col in (xcol, ycol):
        if col not in numeric:
            raise MalformedSampleError(f"column {col!r} is missing or not numeric")
    xs, ys = table.column(xcol), table.column(ycol)
    ok = np.isfinite(xs) & np.isfinite(ys)
    xs, ys = xs[ok], ys[ok]
    if xs.size == 0:
        raise MalformedSampleError("no finite rows to plot")
    x0, x1 = float(xs.min()), float(xs.max())
    y0, y1 = float(ys.min()), float(ys.max())
    x1 = x1 if x1 > x0 else x0 + 1.0
    y1 = y1 if y1 > y0 else y0 + 1.0
    width, height = 2 * PANEL, PANEL
    svg = Svg(width + 2 * MARGIN + 40.0, height + 2 * MARGIN + 40.0)
    svg.rect(0, 0, svg.width, svg.height, fill="#fff")
    left, top = MARGIN + 40.0, MARGIN + 20.0
    pts = [(left + (x - x0) / (x1 - x0) * width, top + (y1 - y) / (y1 - y0) * height) for x, y in zip(xs, ys)]
    svg.rect(left, top, width, height, fill="none", stroke="#444")
    svg.polyline(pts, stroke="#15c", width=1.5, class_="data")
    svg.text((left + width / 2, top + height + 18.0), f"{xcol} [{x0:.6g}, {x1:.6g}]")
    svg.text((left - 8.0, top + height / 2), f"{ycol} [{y0:.6g}, {y1:.6g}]", anchor="end")
    return svg.render()
