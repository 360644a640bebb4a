"""CSV and JSON writers for roots, limit points and scenes."""
import csv
import logging
from typing import IO, List, Optional, Sequence

import numpy as np

from ..models.reports import LimitExport, LimitPointRecord
from .coxeter.bilinear_core import GeometricModule
from .coxeter.limit_roots import ConicProvenance, LimitPoint, PairProvenance, WordProvenance
from .coxeter.projective_normalization import TransverseHyperplane, normalize_many, simplex_coordinates_many
from .coxeter.render import Scene, scene_rows
from .coxeter.root_enumeration import RootTable

logger = logging.getLogger(__name__)


def write_roots_csv(m: GeometricModule, table: RootTable, stream: IO[str]) -> int:
    """One row per root: index, depth, coordinates over Delta, |rho|_1, q(rho) - 1."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(
        ["index", "depth"] + [f"c{i}" for i in range(m.rank)] + ["l1", "q_residual"]
    )
    coords = table.coords_matrix()
    q = np.einsum("ij,jk,ik->i", coords, m.gram, coords) if coords.size else []
    for root, q_value in zip(table.up_to(), q):
        writer.writerow(
            [root.index, root.depth]
            + [repr(float(c)) for c in root.coords]
            + [repr(root.l1), repr(float(q_value) - 1.0)]
        )
    return len(table)


def write_normalized_csv(
    m: GeometricModule, h: TransverseHyperplane, table: RootTable, stream: IO[str]
) -> int:
    """One row per normalized root: source index, depth, barycentric coordinates, |q(rho-hat)|."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["index", "depth"] + [f"b{i}" for i in range(m.rank)] + ["abs_q"])
    stored = table.up_to()
    if not stored:
        return 0
    points = normalize_many(h, m.to_ambient(table.coords_matrix()))
    bary = simplex_coordinates_many(m, h, points)
    q = np.abs(np.einsum("ij,jk,ik->i", points, m.form, points))
    for root, b, q_value in zip(stored, bary, q):
        writer.writerow([root.index, root.depth] + [repr(float(c)) for c in b] + [repr(float(q_value))])
    logger.debug("Wrote %d normalized roots", len(stored))
    return len(stored)


def _record(m: GeometricModule, point: LimitPoint, bary: np.ndarray) -> LimitPointRecord:
    prov = point.provenance
    if isinstance(prov, PairProvenance):
        fields = {"source": "pair", "root_a": prov.root_a, "root_b": prov.root_b}
    elif isinstance(prov, WordProvenance):
        fields = {"source": "word", "word": list(prov.word)}
        if isinstance(prov.base, PairProvenance):
            fields.update(root_a=prov.base.root_a, root_b=prov.base.root_b)
    elif isinstance(prov, ConicProvenance):
        fields = {"source": "conic"}
    else:
        fields = {"source": "unknown"}
    return LimitPointRecord(
        coords=[float(c) for c in point.coords],
        barycentric=[float(c) for c in bary],
        q=float(point.coords @ m.form @ point.coords),
        **fields,
    )


def limit_export(
    m: GeometricModule,
    h: TransverseHyperplane,
    points: Sequence[LimitPoint],
    mode: str,
    max_depth: int,
    system: Optional[str] = None,
    experimental: bool = False,
) -> LimitExport:
    coords = np.vstack([p.coords for p in points]) if points else np.zeros((0, m.dim))
    bary = simplex_coordinates_many(m, h, coords)
    return LimitExport(
        system=system,
        rank=m.rank,
        mode=mode,
        max_depth=max_depth,
        hyperplane=[float(v) for v in h.functional],
        experimental=experimental,
        count=len(points),
        points=[_record(m, p, b) for p, b in zip(points, bary)],
    )


def write_points_csv(export: LimitExport, stream: IO[str]) -> int:
    """Barycentric coordinates of exported limit points, one row each."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["mode"] + [f"b{i}" for i in range(export.rank)] + ["q", "source"])
    for record in export.points:
        writer.writerow(
            [export.mode] + [repr(b) for b in record.barycentric] + [repr(record.q), record.source]
        )
    return export.count


def write_scene_csv(scene: Scene, stream: IO[str]) -> int:
    """Every point drawn by render_svg, by layer."""
    rows: List = scene_rows(scene)
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["layer"] + [f"b{i}" for i in range(scene.rank)])
    for layer, bary in rows:
        writer.writerow([layer] + [repr(float(b)) for b in bary])
    return len(rows)
