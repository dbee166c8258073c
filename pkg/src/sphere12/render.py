"""Deterministic SVG drawings of configurations and their contact graphs."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import as_points, contact_graph, min_separation, rotate_to_pole
from .criticality import is_balanced
from .geometry import unit

ARC_SEGMENTS = 32


class RenderError(ValueError):
    pass


@dataclass(frozen=True)
class RenderSpec:
    """``projection`` is ``"orthographic"`` (viewed from ``axis``) or
    ``"stereographic"`` (projected from ``axis`` as the pole)."""

    projection: str = "orthographic"
    axis: tuple[float, float, float] = (0.0, 0.0, 1.0)
    size: int = 400
    show_labels: bool = True
    show_weights: bool = False
    theta: float | None = None

    def __post_init__(self):
        if self.projection not in ("orthographic", "stereographic"):
            raise RenderError(f"unknown projection {self.projection!r}")
        if self.size < 16:
            raise RenderError("size must be at least 16 pixels")
        if np.linalg.norm(self.axis) < 1e-12:
            raise RenderError("axis must be nonzero")


def _arc(u, v, k: int = ARC_SEGMENTS) -> np.ndarray:
    """Points along the minor great-circle arc from u to v."""
    w = np.arccos(np.clip(u @ v, -1.0, 1.0))
    t = np.linspace(0.0, 1.0, k + 1)[:, None]
    if w < 1e-12:
        return np.repeat(u[None, :], k + 1, axis=0)
    return (np.sin((1 - t) * w) * u + np.sin(t * w) * v) / math.sin(w)


def _fmt(x: float) -> str:
    s = f"{x:.2f}"
    return "0.00" if s == "-0.00" else s


def render_svg(U, spec: RenderSpec = RenderSpec()) -> str:
    X = as_points(U)
    R = rotate_to_pole(unit(np.asarray(spec.axis, float)))
    Y = X @ R.T
    theta = spec.theta if spec.theta is not None else min_separation(X)
    G = contact_graph(X, theta)
    weights = {}
    if spec.show_weights and G.edges:
        cert = is_balanced(X, theta)
        if cert.weights:
            weights = {(i, j): w for i, j, w in cert.weights}

    if spec.projection == "stereographic":
        if np.any(np.linalg.norm(Y - [0.0, 0.0, 1.0], axis=1) < 1e-6):
            raise RenderError("stereographic pole coincides with a configuration point")

        def proj(P):
            return P[..., :2] / (1.0 - P[..., 2:3])

        extent = max(1.0, float(np.abs(proj(Y)).max()) * 1.1)
    else:

        def proj(P):
            return P[..., :2]

        extent = 1.1

    half = spec.size / 2.0
    scale = half / extent

    def xy(p):
        return _fmt(half + scale * p[0]), _fmt(half - scale * p[1])

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{spec.size}" height="{spec.size}" '
        f'viewBox="0 0 {spec.size} {spec.size}">',
        f'<rect width="{spec.size}" height="{spec.size}" fill="white"/>',
    ]
    if spec.projection == "orthographic":
        out.append(
            f'<circle cx="{_fmt(half)}" cy="{_fmt(half)}" r="{_fmt(scale)}" '
            'fill="none" stroke="#bbbbbb"/>'
        )
    for i, j in G.edges:
        A = _arc(Y[i], Y[j])
        front = "back" if spec.projection == "orthographic" and A[:, 2].mean() < 0 else "front"
        pts = " ".join(",".join(xy(p)) for p in proj(A))
        stroke = "#999999" if front == "back" else "#1f4e9c"
        out.append(f'<polyline class="arc {front}" fill="none" stroke="{stroke}" points="{pts}"/>')
        if (i, j) in weights:
            mx, my = xy(proj(A[ARC_SEGMENTS // 2]))
            out.append(
                f'<text class="weight" x="{mx}" y="{my}" font-size="9" fill="#aa3300">'
                f"{weights[(i, j)]:.3f}</text>"
            )
    for k, p in enumerate(Y):
        cx, cy = xy(proj(p))
        hidden = spec.projection == "orthographic" and p[2] < 0
        fill = "white" if hidden else "black"
        out.append(f'<circle class="point" cx="{cx}" cy="{cy}" r="4" fill="{fill}" stroke="black"/>')
        if spec.show_labels:
            out.append(f'<text class="label" x="{cx}" y="{cy}" dx="5" dy="-5" font-size="11">{k}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
