"""
Invariant suites.

Each suite returns a report listing its violations instead of raising, so
the CLI can print everything it found and the tests can assert on counts.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

import numpy as np
from scipy.spatial import cKDTree

from ...config import settings
from .bilinear_core import FormType, GeometricModule, components, form_type, radical_cone_trivial
from .errors import KernelCrossing, LimitRootsError
from .limit_roots import (
    LimitPoint,
    PairProvenance,
    POINT_TOL,
    act,
    directed_hausdorff,
    e2_circ_points,
    line_quadric_intersect,
    visible,
)
from .projective_normalization import (
    TransverseHyperplane,
    normalize,
    normalize_many,
    simplex_coordinates_many,
)
from .root_enumeration import RootTable, apply_word, root_descent

logger = logging.getLogger(__name__)

# Floating point headroom for identities whose rounding error grows like |rho|_1^2
_ROUNDING_HEADROOM = 64.0 * np.finfo(float).eps


def _identity_tol(l1: float) -> float:
    return max(POINT_TOL, _ROUNDING_HEADROOM * l1 * l1)


# ─── Residual identity ────────────────────────────────────────────────────────

@dataclass(frozen=True)
class ResidualViolation:
    root_index: int
    residual: float
    tolerance: float


@dataclass
class ResidualReport:
    checked: int = 0
    max_residual: float = 0.0
    violations: List[ResidualViolation] = field(default_factory=list)


def residual_identity(m: GeometricModule, table: RootTable) -> ResidualReport:
    """
    q(rho-hat) * |rho|_1^2 = 1 for every stored root, rho-hat = rho / |rho|_1.

    The tolerance is 1e-9, widened by the rounding error carried by
    coordinates of size |rho|_1.
    """
    report = ResidualReport()
    coords = table.coords_matrix()
    if coords.size == 0:
        return report
    l1 = np.abs(coords).sum(axis=1)
    hat = coords / l1[:, None]
    q_hat = np.einsum("ij,jk,ik->i", hat, m.gram, hat)
    residuals = np.abs(q_hat * l1 * l1 - 1.0)

    report.checked = len(residuals)
    report.max_residual = float(residuals.max())
    for root, r, norm in zip(table.up_to(), residuals, l1):
        tol = _identity_tol(float(norm))
        if r > tol:
            report.violations.append(ResidualViolation(root.index, float(r), tol))
    if report.violations:
        logger.warning("Residual identity fails for %d roots", len(report.violations))
    return report


# ─── Convergence toward Q ─────────────────────────────────────────────────────

@dataclass(frozen=True)
class ConvergenceRow:
    depth: int
    count: int
    max_abs_q_hat: float
    min_l1: float


def convergence_proxy(m: GeometricModule, table: RootTable) -> List[ConvergenceRow]:
    """Per depth, the largest |q(rho-hat)| and the smallest |rho|_1."""
    rows: List[ConvergenceRow] = []
    for depth in range(1, table.max_depth + 1):
        roots = table.by_depth(depth)
        if not roots:
            rows.append(ConvergenceRow(depth, 0, float("nan"), float("nan")))
            continue
        coords = np.vstack([r.coords for r in roots])
        l1 = np.abs(coords).sum(axis=1)
        hat = coords / l1[:, None]
        q_hat = np.abs(np.einsum("ij,jk,ik->i", hat, m.gram, hat))
        rows.append(ConvergenceRow(depth, len(roots), float(q_hat.max()), float(l1.min())))
    return rows


# ─── Action invariants ────────────────────────────────────────────────────────

@dataclass
class ActionReport:
    trials: int = 0
    skipped: int = 0
    q_violations: int = 0
    line_violations: int = 0
    visibility_mismatches: int = 0
    max_abs_q: float = 0.0
    max_line_residual: float = 0.0

    @property
    def violations(self) -> int:
        return self.q_violations + self.line_violations + self.visibility_mismatches


def _line_residual(a: np.ndarray, b: np.ndarray, x: np.ndarray) -> float:
    """Distance from x to the line through a and b."""
    d = b - a
    norm = float(np.linalg.norm(d))
    if norm == 0.0:
        return float(np.linalg.norm(x - a))
    t = float((x - a) @ d) / (norm * norm)
    return float(np.linalg.norm(x - a - t * d))


def action_invariants(
    m: GeometricModule,
    h: TransverseHyperplane,
    table: RootTable,
    points: Sequence[LimitPoint],
    trials: int = 1000,
    max_word: int = 6,
    seed: int = 0,
    line_tol: float = 1e-8,
) -> ActionReport:
    """
    Random (word, E2 point) trials checking that w.x stays on Q, stays on
    the line through the images of its defining roots, and that visibility
    from rho matches visibility of w.x from w(rho) when w(rho) is positive.
    """
    report = ActionReport()
    if not points:
        return report
    rng = np.random.default_rng(seed)
    roots = table.roots
    eps = settings.CLASS_TOL

    for _ in range(trials):
        x = points[int(rng.integers(len(points)))]
        length = int(rng.integers(max_word + 1))
        word = tuple(int(s) for s in rng.integers(m.rank, size=length))
        report.trials += 1
        try:
            wx = act(m, h, word, x)
        except KernelCrossing:
            report.skipped += 1
            continue

        q = abs(float(wx.coords @ m.form @ wx.coords))
        report.max_abs_q = max(report.max_abs_q, q)
        if q > POINT_TOL:
            report.q_violations += 1

        prov = x.provenance
        if isinstance(prov, PairProvenance):
            ends = []
            for idx in (prov.root_a, prov.root_b):
                rho_hat = normalize(h, m.to_ambient(roots[idx].coords))
                ends.append(act(m, h, word, rho_hat).coords)
            residual = _line_residual(ends[0], ends[1], wx.coords)
            report.max_line_residual = max(report.max_line_residual, residual)
            if residual > line_tol:
                report.line_violations += 1

        rho = roots[int(rng.integers(len(roots)))]
        w_rho = apply_word(m, word, m.to_ambient(rho.coords))
        if m.to_delta(w_rho).min() < -settings.DEDUP_QUANTUM:
            continue
        # B(w rho, w.x) = B(rho, x) / f(w x)
        scale = abs(h.value(apply_word(m, word, x.coords)))
        before = visible(m, rho, x, eps)
        after = visible(m, w_rho, wx, eps / scale)
        if before != after:
            report.visibility_mismatches += 1

    logger.info(
        "Action invariants: %d trials, %d violations, %d skipped",
        report.trials, report.violations, report.skipped,
    )
    return report


# ─── Orbit identity ───────────────────────────────────────────────────────────

@dataclass
class OrbitReport:
    checked: int = 0
    misses: List[Tuple[int, int]] = field(default_factory=list)
    max_distance: float = 0.0


def orbit_identity(
    m: GeometricModule,
    h: TransverseHyperplane,
    table: RootTable,
    points: Sequence[LimitPoint],
    pair_depth: int,
    tol: float = 1e-8,
) -> OrbitReport:
    """
    Every E2 point from pairs of depth <= pair_depth is w.e for some e in
    E2-circ, w the witness word of the first root of its pair.

    E2-circ is built from the roots of depth <= 2 * pair_depth - 1, which
    holds every w^-1(rho_2).
    """
    report = OrbitReport()
    needed = 2 * pair_depth - 1
    if table.max_depth < needed:
        raise ValueError(f"orbit identity at pair depth {pair_depth} needs a table of depth {needed}")
    circ = e2_circ_points(m, h, table, needed)
    if not circ:
        return report
    tree = cKDTree(np.vstack([p.coords for p in circ]))

    for x in points:
        prov = x.provenance
        if not isinstance(prov, PairProvenance):
            continue
        rho_a, rho_b = table.roots[prov.root_a], table.roots[prov.root_b]
        if max(rho_a.depth, rho_b.depth) > pair_depth:
            continue
        report.checked += 1
        word, _ = table.witness(rho_a)
        try:
            e = act(m, h, tuple(reversed(word)), x)
            _, k = tree.query(e.coords)
            back = act(m, h, word, circ[int(k)])
        except KernelCrossing:
            report.misses.append((prov.root_a, prov.root_b))
            continue
        distance = float(np.linalg.norm(back.coords - x.coords))
        report.max_distance = max(report.max_distance, distance)
        if distance > tol:
            report.misses.append((prov.root_a, prov.root_b))

    if report.misses:
        logger.warning("Orbit identity misses %d of %d points", len(report.misses), report.checked)
    return report


# ─── Density trend ────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class DensityReport:
    pair_depths: Tuple[int, ...]
    distances: Tuple[float, ...]

    @property
    def nonincreasing(self) -> bool:
        d = self.distances
        return all(b <= a + settings.DEDUP_QUANTUM for a, b in zip(d, d[1:]))

    @property
    def ratio(self) -> float:
        """Last distance over first."""
        return self.distances[-1] / self.distances[0] if self.distances[0] > 0 else 0.0


def density_trend(
    m: GeometricModule,
    h: TransverseHyperplane,
    table: RootTable,
    sample_depths: Tuple[int, int],
    pair_depths: Sequence[int],
) -> DensityReport:
    """
    Directed Hausdorff distance from deep normalized roots to E2-circ built
    at each pair depth.
    """
    lo, hi = sample_depths
    deep = [r for d in range(lo, hi + 1) for r in table.by_depth(d)]
    sample = normalize_many(h, m.to_ambient(np.vstack([r.coords for r in deep])))
    distances = []
    for depth in pair_depths:
        circ = e2_circ_points(m, h, table, depth)
        distances.append(directed_hausdorff(sample, np.vstack([p.coords for p in circ])))
        logger.info("Density: pair depth %d -> %.6g", depth, distances[-1])
    return DensityReport(tuple(pair_depths), tuple(distances))


# ─── Containment ──────────────────────────────────────────────────────────────

@dataclass
class ContainmentReport:
    checked: int = 0
    off_quadric: List[int] = field(default_factory=list)
    outside_simplex: List[int] = field(default_factory=list)

    @property
    def violations(self) -> int:
        return len(self.off_quadric) + len(self.outside_simplex)


def simplex_containment(
    m: GeometricModule,
    h: TransverseHyperplane,
    points: Sequence[LimitPoint],
) -> ContainmentReport:
    """Each point must satisfy |q| <= 1e-9 and lie in conv(Delta-hat)."""
    report = ContainmentReport(checked=len(points))
    if not points:
        return report
    coords = np.vstack([p.coords for p in points])
    q = np.abs(np.einsum("ij,jk,ik->i", coords, m.form, coords))
    bary = simplex_coordinates_many(m, h, coords)
    report.off_quadric = [int(i) for i in np.flatnonzero(q > POINT_TOL)]
    report.outside_simplex = [int(i) for i in np.flatnonzero(bary.min(axis=1) < -POINT_TOL)]
    return report


# ─── Perron-Frobenius ─────────────────────────────────────────────────────────

@dataclass(frozen=True)
class PerronFrobeniusReport:
    irreducible: bool
    affine: bool
    radical_cone_trivial: bool

    @property
    def holds(self) -> bool:
        """For irreducible systems the radical meets cone(Delta) iff B is affine."""
        if not self.irreducible:
            return True
        return self.radical_cone_trivial != self.affine


def perron_frobenius_check(m: GeometricModule) -> PerronFrobeniusReport:
    return PerronFrobeniusReport(
        irreducible=len(components(m)) == 1,
        affine=form_type(m) is FormType.AFFINE,
        radical_cone_trivial=radical_cone_trivial(m),
    )


# ─── Rank 2 ordering ──────────────────────────────────────────────────────────

@dataclass(frozen=True)
class Rank2OrderingReport:
    alpha_coords: Tuple[float, ...]
    depths: Tuple[int, ...]
    limit_alpha: float
    monotone: bool
    depth_increasing: bool
    positive_pairing: bool

    @property
    def holds(self) -> bool:
        return self.monotone and self.depth_increasing and self.positive_pairing


def rank2_ordering(m: GeometricModule, h: TransverseHyperplane, length: int) -> Rank2OrderingReport:
    """
    alpha < s_alpha(beta) < s_alpha s_beta(alpha) < ... in an infinite
    dihedral system: alpha-coordinates of the normalized roots decrease
    strictly toward the limit point x nearest alpha, depth increases and B
    is positive between roots of [alpha, x).
    """
    if m.rank != 2:
        raise ValueError("rank 2 ordering needs a rank 2 system")
    if abs(m.gram[0, 1]) < 1.0 - settings.CLASS_TOL:
        raise LimitRootsError("rank 2 ordering needs an infinite dihedral system")

    alpha, beta = normalize(h, m.simple_root(0)), normalize(h, m.simple_root(1))
    limits = line_quadric_intersect(m, h, alpha, beta).points
    limit_alpha = float(max(m.to_delta(p.coords)[0] for p in limits))

    ambient: List[np.ndarray] = []
    for k in range(length):
        # prefix s_alpha s_beta ... of length k applied to alpha or beta
        word = tuple(i % 2 for i in range(k))
        base = m.simple_root(k % 2)
        ambient.append(apply_word(m, word, base))

    coords = [m.to_delta(v) for v in ambient]
    hats = [c / c.sum() for c in coords]
    alpha_coords = tuple(float(c[0]) for c in hats)
    depths = []
    for c in coords:
        found = root_descent(m, c)
        depths.append(found[0] if found is not None else -1)

    monotone = all(a > b for a, b in zip(alpha_coords, alpha_coords[1:])) and all(
        a > limit_alpha - POINT_TOL for a in alpha_coords
    )
    depth_increasing = all(b > a for a, b in zip(depths, depths[1:])) and min(depths) > 0
    pairings = np.array([[float(u @ m.form @ v) for v in ambient] for u in ambient])
    positive = bool(np.all(pairings > 0.0))

    return Rank2OrderingReport(
        alpha_coords=alpha_coords,
        depths=tuple(depths),
        limit_alpha=limit_alpha,
        monotone=monotone,
        depth_increasing=depth_increasing,
        positive_pairing=positive,
    )
