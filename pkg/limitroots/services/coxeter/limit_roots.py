"""
Limit roots: points of the normalized isotropic cone reached by roots.

The dense subsets computed here are built from dihedral reflection
subgroups. For two positive roots with |B(rho_1, rho_2)| >= 1 the line
through their normalized images meets Q in one or two limit roots. E2 takes
all such pairs, E2-circ only the pairs containing a simple root.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Any, List, Optional, Sequence, Tuple, Union

import numpy as np
from numpy.typing import ArrayLike
from scipy.linalg import null_space
from scipy.spatial import cKDTree
from scipy.spatial.distance import directed_hausdorff as _scipy_directed_hausdorff

from ...config import settings
from .bilinear_core import GeometricModule, Vector, _readonly, bilinear, quadratic, signature
from .errors import CoincidentPoints, EmptyQuadric, EmptySet, KernelCrossing, OnKernel
from .projective_normalization import (
    NormalizedPoint,
    TransverseHyperplane,
    as_coords,
    default_hyperplane,
    normalize_many,
)
from .root_enumeration import Root, RootTable, words_up_to

logger = logging.getLogger(__name__)

# |q| and barycentric slack accepted on returned limit points
POINT_TOL = 1e-9

# Pairs processed per block when scanning all root pairs
_BLOCK = 1024

Word = Tuple[int, ...]


# ─── Types ────────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class PairProvenance:
    """Limit point on the line through two normalized roots (table indices)."""
    root_a: int
    root_b: int


@dataclass(frozen=True)
class WordProvenance:
    """Image w . x of another point."""
    word: Word
    base: Any


@dataclass(frozen=True)
class ConicProvenance:
    """Sample of the normalized isotropic cone, optionally restricted to a face."""
    index: int
    face: Tuple[int, ...] = ()


Provenance = Union[PairProvenance, WordProvenance, ConicProvenance, None]


@dataclass(frozen=True, eq=False)
class LimitPoint:
    """A point of Q-hat on the cut hyperplane."""

    coords: Vector
    provenance: Provenance = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "coords", _readonly(self.coords))

    def __repr__(self) -> str:
        coords = ", ".join(f"{c:.6g}" for c in self.coords)
        return f"LimitPoint([{coords}])"


@dataclass(frozen=True)
class IntersectionResult:
    """Points of a line on Q, ordered by the line parameter lambda."""

    points: Tuple[LimitPoint, ...]
    lambdas: Tuple[float, ...]
    tangent: bool

    @property
    def count(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class F0Sample:
    """Orbit images of generating faces' isotropic samples. Experimental."""

    points: Tuple[LimitPoint, ...]
    generating_faces: Tuple[Tuple[int, ...], ...]
    experimental: bool = True


# ─── Helpers ──────────────────────────────────────────────────────────────────

def dedup_points(points: Sequence[LimitPoint], radius: Optional[float] = None) -> List[LimitPoint]:
    """Keep the first point of every cluster closer than radius."""
    if not points:
        return []
    r = settings.DEDUP_QUANTUM if radius is None else radius
    coords = np.vstack([p.coords for p in points])
    tree = cKDTree(coords)
    neighbours = tree.query_ball_point(coords, r)
    kept = np.zeros(len(points), dtype=bool)
    for i, ball in enumerate(neighbours):
        if not any(kept[j] for j in ball if j < i):
            kept[i] = True
    return [p for p, keep in zip(points, kept) if keep]


def _solve_pairs(
    m: GeometricModule,
    h: TransverseHyperplane,
    a_pts: np.ndarray,
    x_pts: np.ndarray,
    provenance: List[Provenance],
) -> List[LimitPoint]:
    """Vectorized line-quadric intersection for matched rows of a_pts / x_pts."""
    eps = settings.CLASS_TOL
    if a_pts.size == 0:
        return []
    G = m.form
    d = a_pts - x_pts
    A = np.einsum("ij,jk,ik->i", d, G, d)
    Bh = np.einsum("ij,jk,ik->i", x_pts, G, d)
    C = np.einsum("ij,jk,ik->i", x_pts, G, x_pts)

    out: List[LimitPoint] = []
    for k in range(a_pts.shape[0]):
        if abs(A[k]) <= eps:
            # Degenerate leading coefficient: fall back to the scalar routine
            res = line_quadric_intersect(m, h, a_pts[k], x_pts[k], provenance[k])
            out.extend(res.points)
            continue
        disc = Bh[k] * Bh[k] - A[k] * C[k]
        if disc < -eps:
            continue
        if disc <= eps:
            lams = (-Bh[k] / A[k],)
        else:
            root = np.sqrt(disc)
            lams = tuple(sorted(((-Bh[k] - root) / A[k], (-Bh[k] + root) / A[k])))
        for lam in lams:
            u = x_pts[k] + lam * d[k]
            out.append(LimitPoint(u / h.value(u), provenance[k]))
    return out


def _check_limit_points(
    m: GeometricModule,
    h: TransverseHyperplane,
    points: Sequence[LimitPoint],
) -> List[LimitPoint]:
    """Drop (and log) points off Q or outside conv(Delta-hat)."""
    from .projective_normalization import simplex_coordinates_many

    if not points:
        return []
    coords = np.vstack([p.coords for p in points])
    q = np.einsum("ij,jk,ik->i", coords, m.form, coords)
    bary = simplex_coordinates_many(m, h, coords)
    ok = (np.abs(q) <= POINT_TOL) & (bary.min(axis=1) >= -POINT_TOL)
    if not ok.all():
        logger.warning("Dropped %d limit points failing |q| / simplex checks", int((~ok).sum()))
    return [p for p, keep in zip(points, ok) if keep]


# ─── Public API ───────────────────────────────────────────────────────────────

def line_quadric_intersect(
    m: GeometricModule,
    h: TransverseHyperplane,
    a: Any,
    x: Any,
    provenance: Provenance = None,
) -> IntersectionResult:
    """
    Points u = lambda a + (1 - lambda) x of the line L(a, x) with q(u) = 0.

    Solves q(a - x) lambda^2 + 2 B(x, a - x) lambda + q(x) = 0.
    Discriminants in [-CLASS_TOL, CLASS_TOL] count as tangency.
    """
    eps = settings.CLASS_TOL
    a_c, x_c = as_coords(a), as_coords(x)
    d = a_c - x_c
    if np.linalg.norm(d) <= eps:
        raise CoincidentPoints("line through coincident points")

    A = quadratic(m, d)
    Bh = bilinear(m, x_c, d)
    C = quadratic(m, x_c)

    lams: Tuple[float, ...]
    if abs(A) <= eps:
        if abs(Bh) <= eps:
            if abs(C) <= eps:
                logger.warning("Line lies inside the isotropic cone; no isolated points")
            return IntersectionResult((), (), False)
        lams = (-C / (2.0 * Bh),)
    else:
        disc = Bh * Bh - A * C
        if disc < -eps:
            return IntersectionResult((), (), False)
        if disc <= eps:
            lams = (-Bh / A,)
        else:
            root = np.sqrt(disc)
            lams = tuple(sorted(((-Bh - root) / A, (-Bh + root) / A)))

    points = []
    for lam in lams:
        u = x_c + lam * d
        value = h.value(u)
        points.append(LimitPoint(u / value if abs(value) > eps else u, provenance))
    return IntersectionResult(tuple(points), tuple(float(v) for v in lams), len(points) == 1)


def e2_points(
    m: GeometricModule,
    h: TransverseHyperplane,
    table: RootTable,
    max_pairs_depth: Optional[int] = None,
) -> List[LimitPoint]:
    """
    E2 from all pairs of stored roots of depth <= max_pairs_depth with
    |B(rho_1, rho_2)| >= 1.
    """
    eps = settings.CLASS_TOL
    roots = table.up_to(max_pairs_depth)
    if len(roots) < 2:
        return []
    ambient = m.to_ambient(np.vstack([r.coords for r in roots]))
    normalized = normalize_many(h, ambient)
    ids = [r.index for r in roots]

    found: List[LimitPoint] = []
    n_roots = len(roots)
    for start in range(0, n_roots, _BLOCK):
        stop = min(start + _BLOCK, n_roots)
        pairings = ambient[start:stop] @ m.form @ ambient.T
        rows, cols = np.nonzero(np.abs(pairings) >= 1.0 - eps)
        rows = rows + start
        keep = cols > rows
        rows, cols = rows[keep], cols[keep]
        if rows.size == 0:
            continue
        prov: List[Provenance] = [PairProvenance(ids[i], ids[j]) for i, j in zip(rows, cols)]
        found.extend(_solve_pairs(m, h, normalized[rows], normalized[cols], prov))

    points = dedup_points(_check_limit_points(m, h, found))
    logger.info("E2: %d points from %d roots", len(points), n_roots)
    return points


def e2_circ_points(
    m: GeometricModule,
    h: TransverseHyperplane,
    table: RootTable,
    max_depth: Optional[int] = None,
) -> List[LimitPoint]:
    """E2-circ: pairs (alpha, rho) with alpha simple, rho stored, |B(alpha, rho)| >= 1."""
    eps = settings.CLASS_TOL
    roots = table.up_to(max_depth)
    if len(roots) < 2:
        return []
    ambient = m.to_ambient(np.vstack([r.coords for r in roots]))
    normalized = normalize_many(h, ambient)
    simple_rows = [i for i, r in enumerate(roots) if r.is_simple]

    a_rows: List[int] = []
    x_rows: List[int] = []
    for i in simple_rows:
        pairings = ambient @ m.form @ ambient[i]
        for j in np.flatnonzero(np.abs(pairings) >= 1.0 - eps):
            if j != i:
                a_rows.append(i)
                x_rows.append(int(j))

    prov: List[Provenance] = [
        PairProvenance(roots[i].index, roots[j].index) for i, j in zip(a_rows, x_rows)
    ]
    found = _solve_pairs(
        m, h,
        normalized[a_rows] if a_rows else np.zeros((0, m.dim)),
        normalized[x_rows] if x_rows else np.zeros((0, m.dim)),
        prov,
    )
    points = dedup_points(_check_limit_points(m, h, found))
    logger.info("E2-circ: %d points from %d roots", len(points), len(roots))
    return points


def act(m: GeometricModule, h: TransverseHyperplane, w: Sequence[int], x: Any) -> Any:
    """
    w . x: apply the letters of w right to left to a representative of x
    and renormalize once.

    Returns a LimitPoint when x is one, a NormalizedPoint otherwise.
    """
    eps = settings.CLASS_TOL
    word = tuple(int(s) for s in w)
    if any(s < 0 or s >= m.rank for s in word):
        raise ValueError(f"word {word} has letters outside [0, {m.rank})")

    v = as_coords(x).copy()
    for s in reversed(word):
        alpha = m.simple_root(s)
        v = v - 2.0 * float(alpha @ m.form @ v) * alpha
        if abs(h.value(v)) <= eps:
            raise KernelCrossing(f"partial image of {word} lies on the kernel of the cut")
    v = v / h.value(v)

    if isinstance(x, LimitPoint):
        return LimitPoint(v, WordProvenance(word, x.provenance))
    return NormalizedPoint(v, WordProvenance(word, getattr(x, "source", None)))


def reflect_point(m: GeometricModule, h: TransverseHyperplane, rho: Any, x: Any) -> NormalizedPoint:
    """s_rho . x for an arbitrary root rho given in ambient coordinates or as a Root."""
    r = m.to_ambient(rho.coords) if isinstance(rho, Root) else as_coords(rho)
    v = as_coords(x)
    image = v - 2.0 * (bilinear(m, r, v) / quadratic(m, r)) * r
    value = h.value(image)
    if abs(value) <= settings.CLASS_TOL:
        raise KernelCrossing("reflected point lies on the kernel of the cut")
    return NormalizedPoint(image / value)


def visible(m: GeometricModule, rho: Any, x: Any, tol: Optional[float] = None) -> bool:
    """x on Q-hat is visible from rho-hat iff B(rho, x) >= 0."""
    eps = settings.CLASS_TOL if tol is None else tol
    r = m.to_ambient(rho.coords) if isinstance(rho, Root) else as_coords(rho)
    return bilinear(m, r, as_coords(x)) >= -eps


def directed_hausdorff(A: ArrayLike, B: ArrayLike) -> float:
    """max over a in A of the distance from a to B."""
    a_arr = np.atleast_2d(np.asarray(A, dtype=float))
    b_arr = np.atleast_2d(np.asarray(B, dtype=float))
    if a_arr.size == 0 or b_arr.size == 0:
        raise EmptySet("directed Hausdorff distance of an empty set")
    return float(_scipy_directed_hausdorff(a_arr, b_arr)[0])


def _interior_point(m: GeometricModule, h: TransverseHyperplane) -> Vector:
    """A point p with f(p) = 1 and q(p) < 0 (the form must be indefinite)."""
    eigenvalues, eigenvectors = np.linalg.eigh(m.form)
    v_neg = eigenvectors[:, int(np.argmin(eigenvalues))]
    value = h.value(v_neg)
    if abs(value) > settings.CLASS_TOL:
        return v_neg / value

    # Negative direction parallel to the cut: move far along it
    f = h.functional
    p = f / float(f @ f)
    t = 1.0
    while quadratic(m, p + t * v_neg) >= 0.0:
        t *= 2.0
    return p + t * v_neg


def conic_sample(
    m: GeometricModule,
    h: TransverseHyperplane,
    count: int,
    seed: int = 0,
    face: Tuple[int, ...] = (),
) -> List[LimitPoint]:
    """
    Up to `count` points of Q-hat, the isotropic cone on the cut.

    Rays are shot from a point with q < 0 and each is solved for q = 0;
    in rank 3 the rays sweep a full turn. Positive semidefinite forms
    give the normalized radical instead.
    """
    eps = settings.CLASS_TOL
    sig = signature(m)

    if sig.n_negative == 0:
        if sig.n_zero == 0:
            raise EmptyQuadric("form is positive definite, Q-hat is empty")
        radical = np.vstack(sig.radical_basis)
        if radical.shape[0] == 1:
            candidates = radical
        else:
            rng = np.random.default_rng(seed)
            candidates = rng.standard_normal((count, radical.shape[0])) @ radical
        points = [
            LimitPoint(v / h.value(v), ConicProvenance(i, face))
            for i, v in enumerate(candidates)
            if abs(h.value(v)) > eps
        ]
        return dedup_points(points)

    p = _interior_point(m, h)
    basis = null_space(h.functional[None, :])  # d x (d - 1), orthonormal
    k = basis.shape[1]
    if k == 1:
        directions = np.vstack([basis[:, 0], -basis[:, 0]])
    elif k == 2:
        angles = 2.0 * np.pi * np.arange(count) / count
        directions = np.outer(np.cos(angles), basis[:, 0]) + np.outer(np.sin(angles), basis[:, 1])
    else:
        rng = np.random.default_rng(seed)
        g = rng.standard_normal((count, k))
        g /= np.linalg.norm(g, axis=1, keepdims=True)
        directions = g @ basis.T

    q_p = quadratic(m, p)
    points: List[LimitPoint] = []
    for i, direction in enumerate(directions):
        q_d = quadratic(m, direction)
        b_pd = bilinear(m, p, direction)
        if abs(q_d) <= eps:
            ts = [-q_p / (2.0 * b_pd)] if abs(b_pd) > eps else []
        else:
            disc = b_pd * b_pd - q_p * q_d
            if disc < 0.0:
                continue
            root = np.sqrt(disc)
            ts = [(-b_pd - root) / q_d, (-b_pd + root) / q_d]
        for t in sorted(ts):
            if t > 0.0:
                u = p + t * direction
                points.append(LimitPoint(u / h.value(u), ConicProvenance(i, face)))
    return points


def word_matrix(m: GeometricModule, w: Sequence[int]) -> np.ndarray:
    """Matrix of s_{w[0]} s_{w[1]} ... acting on ambient column vectors."""
    M = np.eye(m.dim)
    for s in w:
        alpha = m.simple_root(s)
        M = M @ (np.eye(m.dim) - 2.0 * np.outer(alpha, alpha @ m.form))
    return M


def orbit_limit_probe(
    m: GeometricModule,
    h: TransverseHyperplane,
    w: Sequence[int],
    v: ArrayLike,
    n: int,
) -> NormalizedPoint:
    """Normalized w^n(v), with w^n computed by repeated squaring."""
    image = np.linalg.matrix_power(word_matrix(m, w), n) @ np.asarray(v, dtype=float)
    value = h.value(image)
    if abs(value) <= settings.CLASS_TOL:
        raise OnKernel("orbit image lies on the kernel of the cut")
    return NormalizedPoint(image / value, WordProvenance(tuple(w) * n if n <= 8 else tuple(w), None))


def f0_sample(
    m: GeometricModule,
    h: TransverseHyperplane,
    orbit_length: int,
    samples_per_face: int = 120,
    seed: int = 0,
) -> F0Sample:
    """
    Experimental sampler for the orbit of the generating faces.

    A face Delta_I (|I| >= 2) is generating when its isotropic samples all
    lie in conv(Delta_I). The result is the union of the images of those
    samples under every word of length <= orbit_length.
    """
    eps = settings.CLASS_TOL
    n = m.rank
    seeds: List[LimitPoint] = []
    generating: List[Tuple[int, ...]] = []

    for size in range(2, n + 1):
        for face in combinations(range(n), size):
            idx = list(face)
            sub = GeometricModule.from_gram(m.gram[np.ix_(idx, idx)])
            try:
                samples = conic_sample(sub, default_hyperplane(sub), samples_per_face, seed, face)
            except EmptyQuadric:
                continue
            if not samples:
                continue
            local = np.vstack([s.coords for s in samples])  # coords over Delta_I, summing to 1
            if local.min() < -eps:
                logger.debug("Face %s is not generating", face)
                continue
            generating.append(face)
            ambient = local @ m.simple_roots[idx]
            for sample, v in zip(samples, ambient):
                seeds.append(LimitPoint(v / h.value(v), sample.provenance))

    images: List[LimitPoint] = []
    if seeds:
        base = np.vstack([s.coords for s in seeds])
        for word in words_up_to(n, orbit_length):
            current = base.copy()
            alive = np.ones(len(seeds), dtype=bool)
            for s in reversed(word):
                alpha = m.simple_root(s)
                current = current - 2.0 * np.outer(current @ m.form @ alpha, alpha)
                alive &= np.abs(current @ h.functional) > eps
            for k in np.flatnonzero(alive):
                v = current[k] / h.value(current[k])
                images.append(LimitPoint(v, WordProvenance(word, seeds[k].provenance)))

    points = dedup_points(_check_limit_points(m, h, images))
    logger.info(
        "F0 sample: %d points from %d generating faces (experimental)",
        len(points), len(generating),
    )
    return F0Sample(tuple(points), tuple(generating))
