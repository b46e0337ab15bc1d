"""Deterministic SVG output for webs, tiles and orbits."""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

INVERSE_BLUE = "#1f3fbf"
FORWARD_MAGENTA = "#c0209f"
FAMILY_MAGENTA = "#c0209f"
GENERATOR_BLACK = "#000000"


@dataclass(frozen=True)
class RenderSpec:
    window: tuple[float, float, float, float]  # xmin, ymin, xmax, ymax
    point_size: float = 0.5  # pixels
    width: int = 800
    path: str | None = None
    background: str = "#ffffff"

    def __post_init__(self):
        xmin, ymin, xmax, ymax = self.window
        if not (xmax > xmin and ymax > ymin):
            raise ValueError("window must have positive area")


@dataclass
class Layer:
    name: str
    color: str
    points: np.ndarray | None = None  # (m, 2)
    polygons: list[np.ndarray] = field(default_factory=list)  # outlines
    fill: bool = False


def _f(v: float) -> str:
    s = f"{v:.8f}"
    return "0.00000000" if s == "-0.00000000" else s


def fit_window(arrays: Sequence[np.ndarray], pad: float = 0.05) -> tuple[float, float, float, float]:
    pts = np.vstack([a for a in arrays if len(a)])
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    span = np.maximum(hi - lo, 1e-9)
    lo, hi = lo - pad * span, hi + pad * span
    return float(lo[0]), float(lo[1]), float(hi[0]), float(hi[1])


def svg_text(layers: Sequence[Layer], spec: RenderSpec) -> str:
    """SVG document as a string.  Identical inputs give identical bytes."""
    if not layers:
        raise ValueError("nothing to render")
    xmin, ymin, xmax, ymax = spec.window
    sx = spec.width / (xmax - xmin)
    height = (ymax - ymin) * sx

    def px(x, y):
        return (x - xmin) * sx, (ymax - y) * sx

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_f(spec.width)}" height="{_f(height)}" '
        f'viewBox="0 0 {_f(spec.width)} {_f(height)}">',
        f'<rect width="100%" height="100%" fill="{spec.background}"/>',
    ]
    for layer in layers:
        out.append(f'<g id="{layer.name}">')
        for poly in layer.polygons:
            coords = " ".join(f"{_f(a)},{_f(b)}" for a, b in (px(x, y) for x, y in poly))
            fill = layer.color if layer.fill else "none"
            out.append(f'<polygon points="{coords}" fill="{fill}" stroke="{layer.color}" stroke-width="1"/>')
        if layer.points is not None and len(layer.points):
            P = layer.points
            m = (P[:, 0] >= xmin) & (P[:, 0] <= xmax) & (P[:, 1] >= ymin) & (P[:, 1] <= ymax)
            r = _f(spec.point_size)
            for x, y in P[m]:
                u, v = px(x, y)
                out.append(f'<circle cx="{_f(u)}" cy="{_f(v)}" r="{r}" fill="{layer.color}"/>')
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_svg(layers: Sequence[Layer], spec: RenderSpec) -> str:
    text = svg_text(layers, spec)
    if spec.path:
        Path(spec.path).write_text(text)
    return text


def count_elements(svg: str) -> dict[str, int]:
    return {"circle": svg.count("<circle "), "polygon": svg.count("<polygon ")}
