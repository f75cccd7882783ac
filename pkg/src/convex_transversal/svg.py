"""SVG 1.1 rendering of instances, witnesses, and hardness scenes.

The viewBox is computed from the bounding box of everything drawn, padded by
5% per side.  The y axis is flipped (SVG y grows downward) so pictures read
like the mathematics.  Output is deterministic: exact rationals are converted
to floats once, and elements are emitted in input order.
"""

from __future__ import annotations

from typing import Iterable, List, Optional, Tuple

from .geom import Instance, Point, Transversal

_ARC_SAMPLES = 32

_ORIENTATION_COLOR = {
    "vertical": "#1f77b4",
    "plus45": "#2ca02c",
    "minus45": "#d62728",
}


def _fmt(value) -> str:
    text = f"{float(value):.6f}".rstrip("0").rstrip(".")
    return text if text not in ("", "-0") else "0"


class _Canvas:
    """Accumulates drawing extents and emits elements in flipped-y coords."""

    def __init__(self):
        self.elements: List[str] = []
        self._xs: List[float] = []
        self._ys: List[float] = []

    def _see(self, x, y) -> Tuple[float, float]:
        fx, fy = float(x), -float(y)
        self._xs.append(fx)
        self._ys.append(fy)
        return fx, fy

    def line(self, p: Point, q: Point, stroke: str, width: float, extra: str = "") -> None:
        x1, y1 = self._see(p.x, p.y)
        x2, y2 = self._see(q.x, q.y)
        self.elements.append(
            f'<line x1="{_fmt(x1)}" y1="{_fmt(y1)}" x2="{_fmt(x2)}" y2="{_fmt(y2)}"'
            f' stroke="{stroke}" stroke-width="{_fmt(width)}"'
            f' stroke-linecap="round"{extra}/>'
        )

    def polyline(self, points: Iterable[Point], stroke: str, width: float,
                 closed: bool = False, fill: str = "none") -> None:
        coords = " ".join(
            "{},{}".format(*map(_fmt, self._see(p.x, p.y))) for p in points
        )
        tag = "polygon" if closed else "polyline"
        self.elements.append(
            f'<{tag} points="{coords}" fill="{fill}" stroke="{stroke}"'
            f' stroke-width="{_fmt(width)}"/>'
        )

    def circle(self, p: Point, radius: float, fill: str) -> None:
        cx, cy = self._see(p.x, p.y)
        self.elements.append(
            f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="{_fmt(radius)}" fill="{fill}"/>'
        )

    def group(self, gid: str, body: List[str]) -> None:
        self.elements.append(f'<g id="{gid}">')
        self.elements.extend(body)
        self.elements.append("</g>")

    def document(self) -> str:
        if not self._xs:
            self._xs, self._ys = [0.0, 1.0], [0.0, 1.0]
        lo_x, hi_x = min(self._xs), max(self._xs)
        lo_y, hi_y = min(self._ys), max(self._ys)
        span_x = (hi_x - lo_x) or 1.0
        span_y = (hi_y - lo_y) or 1.0
        mx, my = 0.05 * span_x, 0.05 * span_y
        viewbox = " ".join(
            _fmt(v) for v in (lo_x - mx, lo_y - my, span_x + 2 * mx, span_y + 2 * my)
        )
        head = (
            '<svg xmlns="http://www.w3.org/2000/svg" version="1.1"'
            f' viewBox="{viewbox}">'
        )
        return "\n".join([head, *self.elements, "</svg>"]) + "\n"

    def scale(self) -> float:
        if not self._xs:
            return 1.0
        return max(max(self._xs) - min(self._xs), max(self._ys) - min(self._ys), 1e-9)


def _render_instance(instance: Instance, witness: Optional[Transversal]) -> str:
    canvas = _Canvas()
    for seg in instance.segments:
        canvas._see(seg.x, seg.y_lo)
        canvas._see(seg.x, seg.y_hi)
    if witness is not None:
        for p in witness.points:
            canvas._see(p.x, p.y)
    unit = canvas.scale()

    for seg in instance.segments:
        canvas.line(
            Point(seg.x, seg.y_lo), Point(seg.x, seg.y_hi),
            stroke="#1f77b4", width=0.006 * unit, extra=' class="segment"',
        )
    if witness is not None:
        body = _Canvas()
        body._xs, body._ys = canvas._xs, canvas._ys
        body.polyline(witness.points, stroke="#ff7f0e", width=0.004 * unit,
                      closed=len(witness.points) >= 3)
        for p in witness.points:
            body.circle(p, radius=0.012 * unit, fill="#ff7f0e")
        canvas.group("witness", body.elements)
    return canvas.document()


def _render_scene(scene, guides: bool) -> str:
    canvas = _Canvas()
    width, height = scene.crate
    canvas._see(0, 0)
    canvas._see(width, height)
    unit = canvas.scale()

    if guides:
        crate = _Canvas()
        crate._xs, crate._ys = canvas._xs, canvas._ys
        corners = [Point(0, 0), Point(width, 0), Point(width, height), Point(0, height)]
        crate.polyline(corners, stroke="#bbbbbb", width=0.001 * unit, closed=True)
        canvas.group("crate", crate.elements)

        banana = _Canvas()
        banana._xs, banana._ys = canvas._xs, canvas._ys
        for side in ("bottom", "right", "top", "left"):
            arc = scene.banana[side]
            points = [
                arc.point_at(arc.u_lo + (arc.u_hi - arc.u_lo) * t / _ARC_SAMPLES)
                for t in range(_ARC_SAMPLES + 1)
            ]
            banana.polyline(points, stroke="#dddd88", width=0.001 * unit)
        canvas.group("banana", banana.elements)

    for seg in scene.segments:
        canvas.line(
            seg.p, seg.q,
            stroke=_ORIENTATION_COLOR[seg.orientation],
            width=0.0008 * unit,
            extra=' class="segment"',
        )
    return canvas.document()


def render_svg(subject, witness: Optional[Transversal] = None, *, guides: bool = True) -> str:
    """Render an ``Instance`` (optionally with a witness transversal) or a
    ``GadgetScene`` (optionally with crate/banana guide layers) as SVG text.

    One visible element is emitted per segment; witness hulls are drawn
    closed with the transversal points marked."""
    if isinstance(subject, Instance):
        return _render_instance(subject, witness)
    if hasattr(subject, "segments") and hasattr(subject, "crate"):
        if witness is not None:
            raise ValueError("witnesses apply to instances, not gadget scenes")
        return _render_scene(subject, guides)
    raise TypeError(f"cannot render {type(subject).__name__}")
