"""
Static SVG pictures of normalized roots and limit roots.

Points are kept in barycentric coordinates over Delta-hat and embedded in
the plane: a segment in rank 2, an equilateral triangle in rank 3 and an
orthographic view of a regular tetrahedron in rank 4.
"""
from __future__ import annotations

import io
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import matplotlib
import numpy as np
from matplotlib.backends.backend_svg import FigureCanvasSVG
from matplotlib.figure import Figure

from ...config import settings
from .bilinear_core import GeometricModule
from .errors import EmptyQuadric, UnsupportedRank
from .limit_roots import LimitPoint, conic_sample
from .projective_normalization import TransverseHyperplane, normalize_many, simplex_coordinates_many
from .root_enumeration import RootTable

logger = logging.getLogger(__name__)

_TRIANGLE = np.array([[0.0, 0.0], [1.0, 0.0], [0.5, np.sqrt(3) / 2]])
_TETRAHEDRON = np.array([
    [0.0, 0.0, 0.0],
    [1.0, 0.0, 0.0],
    [0.5, np.sqrt(3) / 2, 0.0],
    [0.5, np.sqrt(3) / 6, np.sqrt(6) / 3],
])
_TETRAHEDRON = _TETRAHEDRON - _TETRAHEDRON.mean(axis=0)

_LAYER_STYLE = {
    "e2": {"color": "#d62728", "marker": "D", "size": 10.0},
    "e2circ": {"color": "#ff7f0e", "marker": "D", "size": 10.0},
    "f0": {"color": "#2ca02c", "marker": "o", "size": 4.0},
    "exact": {"color": "#9467bd", "marker": "*", "size": 60.0},
}


@dataclass
class Scene:
    """Everything drawn in one picture, in barycentric coordinates over Delta-hat."""

    rank: int
    roots: np.ndarray
    root_depths: np.ndarray
    limit_layers: Dict[str, np.ndarray] = field(default_factory=dict)
    conic: np.ndarray = field(default_factory=lambda: np.zeros((0, 0)))
    lines: List[Tuple[np.ndarray, np.ndarray]] = field(default_factory=list)
    vertex_labels: Optional[Sequence[str]] = None
    title: str = ""

    def check(self) -> None:
        """Every stored point must have barycentric coordinates summing to 1."""
        arrays = [self.roots, self.conic, *self.limit_layers.values()]
        arrays += [np.vstack(pair) for pair in self.lines]
        for arr in arrays:
            if arr.size and np.max(np.abs(arr.sum(axis=1) - 1.0)) > 1e-9:
                raise ValueError("scene points must have barycentric coordinates summing to 1")


@dataclass(frozen=True)
class RenderOptions:
    azimuth: float = 30.0
    elevation: float = 20.0
    size_inches: float = 6.0
    root_size: float = 3.0
    show_conic: bool = True


# ─── Scene construction ───────────────────────────────────────────────────────

def _bary(m: GeometricModule, h: TransverseHyperplane, points: Sequence[LimitPoint]) -> np.ndarray:
    if not points:
        return np.zeros((0, m.rank))
    return simplex_coordinates_many(m, h, np.vstack([p.coords for p in points]))


def build_scene(
    m: GeometricModule,
    h: TransverseHyperplane,
    table: RootTable,
    limit_sets: Optional[Mapping[str, Sequence[LimitPoint]]] = None,
    lines: Sequence[Tuple[int, int]] = (),
    seed: int = 0,
    title: str = "",
) -> Scene:
    """
    Collect normalized roots, limit point layers, a sample of Q-hat and
    optional lines through pairs of stored roots (by table index).
    """
    if table.rank != m.rank:
        raise ValueError("table and module ranks differ")
    coords = table.coords_matrix()
    ambient = normalize_many(h, m.to_ambient(coords))
    roots = simplex_coordinates_many(m, h, ambient)
    stored = table.up_to()
    depths = np.array([r.depth for r in stored], dtype=int)

    try:
        conic = _bary(m, h, conic_sample(m, h, settings.CONIC_SAMPLES, seed))
    except EmptyQuadric:
        conic = np.zeros((0, m.rank))

    index = {r.index: k for k, r in enumerate(stored)}
    scene_lines = [(roots[index[a]], roots[index[b]]) for a, b in lines]

    scene = Scene(
        rank=m.rank,
        roots=roots,
        root_depths=depths,
        limit_layers={name: _bary(m, h, pts) for name, pts in (limit_sets or {}).items()},
        conic=conic,
        lines=scene_lines,
        title=title,
    )
    scene.check()
    return scene


def scene_rows(scene: Scene) -> List[Tuple[str, Tuple[float, ...]]]:
    """(layer, barycentric coords) for every drawn point, in drawing order."""
    rows: List[Tuple[str, Tuple[float, ...]]] = []
    rows += [("root", tuple(p)) for p in scene.roots]
    rows += [("quadric", tuple(p)) for p in scene.conic]
    for name, arr in scene.limit_layers.items():
        rows += [(name, tuple(p)) for p in arr]
    return rows


# ─── Embedding ────────────────────────────────────────────────────────────────

def _camera(options: RenderOptions) -> np.ndarray:
    """Rotation taking world coordinates to (screen x, screen y, depth)."""
    az, el = np.radians(options.azimuth), np.radians(options.elevation)
    rz = np.array([[np.cos(az), -np.sin(az), 0.0], [np.sin(az), np.cos(az), 0.0], [0.0, 0.0, 1.0]])
    rx = np.array([[1.0, 0.0, 0.0], [0.0, np.cos(el), -np.sin(el)], [0.0, np.sin(el), np.cos(el)]])
    # look along -y after rotation: screen (x, z), depth y
    swap = np.array([[1.0, 0.0, 0.0], [0.0, 0.0, 1.0], [0.0, 1.0, 0.0]])
    return swap @ rx @ rz


def embed(rank: int, bary: np.ndarray, options: RenderOptions) -> Tuple[np.ndarray, np.ndarray]:
    """Planar coordinates and a depth value (larger is farther) for each row."""
    if bary.size == 0:
        return np.zeros((0, 2)), np.zeros(0)
    if rank == 2:
        xy = np.column_stack([bary[:, 1], np.zeros(len(bary))])
        return xy, np.zeros(len(bary))
    if rank == 3:
        return bary @ _TRIANGLE, np.zeros(len(bary))
    if rank == 4:
        view = (bary @ _TETRAHEDRON) @ _camera(options).T
        return view[:, :2], view[:, 2]
    raise UnsupportedRank(f"cannot draw rank {rank}; export CSV instead")


def _simplex_outline(rank: int, options: RenderOptions) -> List[np.ndarray]:
    vertices = np.eye(rank)
    edges = [np.vstack([vertices[i], vertices[j]]) for i in range(rank) for j in range(i + 1, rank)]
    return [embed(rank, e, options)[0] for e in edges]


# ─── SVG ──────────────────────────────────────────────────────────────────────

def render_svg(scene: Scene, options: Optional[RenderOptions] = None) -> str:
    """Draw the scene. Output depends only on the scene and options."""
    opts = options or RenderOptions()
    if scene.rank not in (2, 3, 4):
        raise UnsupportedRank(f"cannot draw rank {scene.rank}; export CSV instead")

    fig = Figure(figsize=(opts.size_inches, opts.size_inches))
    FigureCanvasSVG(fig)
    ax = fig.add_axes([0.02, 0.02, 0.96, 0.96])
    ax.set_aspect("equal")
    ax.axis("off")

    for edge in _simplex_outline(scene.rank, opts):
        ax.plot(edge[:, 0], edge[:, 1], color="black", linewidth=0.8)
    labels = scene.vertex_labels or [f"α{i}" for i in range(scene.rank)]
    corners, _ = embed(scene.rank, np.eye(scene.rank), opts)
    for label, (x, y) in zip(labels, corners):
        ax.annotate(label, (x, y), xytext=(4, 4), textcoords="offset points", fontsize=9)

    if opts.show_conic and scene.conic.size:
        # dense dots rather than a polyline: Q-hat may be a hyperbola on the cut
        xy, _ = embed(scene.rank, scene.conic, opts)
        ax.scatter(xy[:, 0], xy[:, 1], s=0.6, color="#1f77b4", linewidths=0)

    for a, b in scene.lines:
        xy, _ = embed(scene.rank, np.vstack([a, b]), opts)
        ax.plot(xy[:, 0], xy[:, 1], color="gray", linewidth=0.5, linestyle="--")

    xy, depth = embed(scene.rank, scene.roots, opts)
    if len(xy):
        order = np.argsort(-depth, kind="stable")
        shade = scene.root_depths[order]
        ax.scatter(
            xy[order, 0], xy[order, 1], s=opts.root_size, c=shade, cmap="viridis_r", linewidths=0,
        )

    for name, bary in scene.limit_layers.items():
        style = _LAYER_STYLE.get(name, {"color": "black", "marker": "x", "size": 8.0})
        pts, depth = embed(scene.rank, bary, opts)
        if not len(pts):
            continue
        order = np.argsort(-depth, kind="stable")
        ax.scatter(
            pts[order, 0], pts[order, 1], s=style["size"], color=style["color"],
            marker=style["marker"], linewidths=0, label=name,
        )

    if scene.title:
        ax.set_title(scene.title, fontsize=10)

    buffer = io.StringIO()
    with matplotlib.rc_context({"svg.hashsalt": "limitroots", "svg.fonttype": "path"}):
        fig.savefig(buffer, format="svg", metadata={"Date": None})
    logger.debug("Rendered rank %d scene with %d roots", scene.rank, len(scene.roots))
    return buffer.getvalue()
