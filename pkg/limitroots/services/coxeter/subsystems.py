"""
Reflection subsystems: dihedral pairs, standard parabolic faces, the
reducible decomposition and the canonical module of a root subsystem.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from typing import List, Optional, Sequence, Tuple

import numpy as np
from numpy.typing import ArrayLike

from ...config import settings
from .bilinear_core import (
    FormType,
    GeometricModule,
    _CONE_RESIDUAL,
    _readonly,
    bilinear,
    components,
    form_type,
    is_dihedral_value,
    nonneg_kernel_residual,
    signature,
)
from .errors import (
    CanonicalPairNotInTable,
    InvalidModule,
    InvalidSimpleSystem,
    LimitSetUnknown,
)
from .limit_roots import LimitPoint, PairProvenance, line_quadric_intersect
from .projective_normalization import TransverseHyperplane, default_hyperplane, normalize
from .root_enumeration import Root, RootTable, enumerate_roots, root_descent

logger = logging.getLogger(__name__)


class DihedralKind(str, Enum):
    FINITE = "finite"
    AFFINE = "affine"
    INFINITE_NONAFFINE = "infinite_nonaffine"


@dataclass(frozen=True)
class DihedralInfo:
    kind: DihedralKind
    b_value: float
    canonical_simples: Optional[Tuple[Root, Root]]
    limit_points: Tuple[LimitPoint, ...]


@dataclass(frozen=True, eq=False)
class ParabolicRestriction:
    """
    The standard parabolic sub-module on Delta_I.

    module is canonical (Delta_I is its basis); include() maps its
    coordinates over Delta_I to coordinates over Delta.
    """

    module: GeometricModule
    indices: Tuple[int, ...]
    parent_rank: int

    def include(self, coords: ArrayLike) -> np.ndarray:
        arr = np.asarray(coords, dtype=float)
        out = np.zeros(arr.shape[:-1] + (self.parent_rank,))
        out[..., list(self.indices)] = arr
        return out


@dataclass(frozen=True, eq=False)
class SubsystemEmbedding:
    """
    phi_A: (V_A, B_A) -> (V, B), basis vector i of V_A going to roots[i].

    matrix is d x k (ambient coordinates of the target, one column per
    simple root of the source).
    """

    source: GeometricModule
    target: GeometricModule
    matrix: np.ndarray
    image: GeometricModule = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "matrix", _readonly(self.matrix))
        object.__setattr__(
            self, "image", GeometricModule(simple_roots=self.matrix.T, form=self.target.form)
        )

    def apply(self, coords: ArrayLike) -> np.ndarray:
        """Source coordinates over Delta_A -> target ambient coordinates."""
        return np.asarray(coords, dtype=float) @ self.matrix.T


@dataclass
class PhiReport:
    """Mismatches found while mapping source roots through phi_A."""

    checked: int = 0
    not_positive: List[int] = field(default_factory=list)
    not_roots: List[int] = field(default_factory=list)
    collisions: List[Tuple[int, int]] = field(default_factory=list)
    form_mismatches: List[Tuple[int, int]] = field(default_factory=list)

    @property
    def mismatches(self) -> int:
        return (
            len(self.not_positive) + len(self.not_roots)
            + len(self.collisions) + len(self.form_mismatches)
        )

    @property
    def ok(self) -> bool:
        return self.mismatches == 0


# ─── Dihedral subsystems ──────────────────────────────────────────────────────

def classify_pairing(b: float) -> DihedralKind:
    eps = settings.CLASS_TOL
    if abs(b) < 1.0 - eps:
        return DihedralKind.FINITE
    if abs(b) <= 1.0 + eps:
        return DihedralKind.AFFINE
    return DihedralKind.INFINITE_NONAFFINE


def _subgroup_members(m: GeometricModule, table: RootTable, rho1: Root, rho2: Root) -> List[Root]:
    """
    Stored roots of Phi' = <s_rho1, s_rho2>.{rho1, rho2}, in table order.

    The orbit is walked through unstored roots too, up to the largest l1
    norm in the table. Along a dihedral orbit the norm grows away from the
    canonical pair.
    """
    gram = m.gram
    mirrors = [(r.coords, float(r.coords @ gram @ r.coords)) for r in (rho1, rho2)]
    bound = float(np.abs(table.coords_matrix()).sum(axis=1).max()) + settings.DEDUP_QUANTUM

    def positive(v: np.ndarray) -> np.ndarray:
        return -v if v.sum() < 0 else v

    seen = set()
    found = {}
    frontier = [rho1.coords, rho2.coords]
    limit = 4 * len(table) + 16
    while frontier and len(seen) < limit:
        v = frontier.pop()
        key = tuple(np.round(v, 6))
        if key in seen:
            continue
        seen.add(key)
        stored = table.find(v)
        if stored is not None:
            found[stored.index] = stored
        for r, qr in mirrors:
            image = positive(v - 2.0 * float(r @ gram @ v) / qr * r)
            if np.abs(image).sum() <= bound:
                frontier.append(image)
    return [found[i] for i in sorted(found)]


def _canonical_pair(m: GeometricModule, table: RootTable, rho1: Root, rho2: Root) -> Tuple[Root, Root]:
    """
    The pair {sigma_1, sigma_2} in Phi' with B <= -1 whose cone holds every
    stored root of Phi'. Shallowest pair first.
    """
    eps = settings.CLASS_TOL
    members = _subgroup_members(m, table, rho1, rho2)
    coords = np.vstack([r.coords for r in members])

    candidates = []
    for a, b in combinations(members, 2):
        if float(a.coords @ m.gram @ b.coords) > -1.0 + eps:
            continue
        P = np.vstack([a.coords, b.coords]).T
        coeffs, *_ = np.linalg.lstsq(P, coords.T, rcond=None)
        if coeffs.min() >= -settings.DEDUP_QUANTUM:
            candidates.append((a.depth + b.depth, a.index, b.index, a, b))

    if not candidates:
        raise CanonicalPairNotInTable(
            f"no simple pair for roots #{rho1.index}, #{rho2.index} "
            f"among {len(members)} stored roots of depth <= {table.max_depth}"
        )
    candidates.sort(key=lambda c: c[:3])
    _, _, _, a, b = candidates[0]
    return a, b


def dihedral_subsystem(
    m: GeometricModule,
    h: TransverseHyperplane,
    table: RootTable,
    rho1: Root,
    rho2: Root,
) -> DihedralInfo:
    """Classify the reflection subgroup generated by s_rho1 and s_rho2."""
    if rho1.index == rho2.index or np.allclose(rho1.coords, rho2.coords):
        raise ValueError("dihedral subsystem needs two distinct roots")

    a1, a2 = m.to_ambient(rho1.coords), m.to_ambient(rho2.coords)
    b = bilinear(m, a1, a2)
    kind = classify_pairing(b)

    if kind is DihedralKind.FINITE:
        return DihedralInfo(kind, b, None, ())

    result = line_quadric_intersect(
        m, h, normalize(h, a1), normalize(h, a2), PairProvenance(rho1.index, rho2.index)
    )
    if b <= -1.0 + settings.CLASS_TOL:
        simples = (rho1, rho2)
    else:
        simples = _canonical_pair(m, table, rho1, rho2)
    logger.debug("Dihedral pair (#%d, #%d): %s, B = %.6g", rho1.index, rho2.index, kind.value, b)
    return DihedralInfo(kind, b, simples, result.points)


# ─── Parabolic faces and components ───────────────────────────────────────────

def parabolic_restriction(m: GeometricModule, indices: Sequence[int]) -> ParabolicRestriction:
    """Sub-module on Delta_I with the restricted Gram matrix."""
    idx = tuple(sorted(set(int(i) for i in indices)))
    if not idx:
        raise ValueError("parabolic restriction needs a nonempty subset")
    if idx[0] < 0 or idx[-1] >= m.rank:
        raise ValueError(f"indices {idx} out of range for rank {m.rank}")
    sub = GeometricModule.from_gram(m.gram[np.ix_(idx, idx)])
    return ParabolicRestriction(module=sub, indices=idx, parent_rank=m.rank)


def reducible_split(m: GeometricModule) -> List[ParabolicRestriction]:
    """One parabolic restriction per connected component of the Coxeter graph."""
    return [parabolic_restriction(m, comp) for comp in components(m)]


# ─── Canonical module ─────────────────────────────────────────────────────────

def canonical_module(m: GeometricModule, roots: Sequence[ArrayLike]) -> SubsystemEmbedding:
    """
    (V_A, B_A) for a candidate simple system of roots in m.

    roots are Root objects or coordinate vectors over Delta.
    """
    if len(roots) < 1:
        raise InvalidSimpleSystem("empty simple system")
    coords = np.vstack([np.asarray(getattr(r, "coords", r), dtype=float) for r in roots])
    ambient = m.to_ambient(coords)
    gram = ambient @ m.form @ ambient.T

    eps = settings.CLASS_TOL
    k = gram.shape[0]
    for i in range(k):
        if abs(gram[i, i] - 1.0) > eps:
            raise InvalidSimpleSystem(f"q(root {i}) = {gram[i, i]:.12g}, expected 1")
        for j in range(i + 1, k):
            if not is_dihedral_value(gram[i, j]):
                raise InvalidSimpleSystem(
                    f"B(root {i}, root {j}) = {gram[i, j]:.12g} is neither -cos(pi/m) nor <= -1"
                )
    residual, _ = nonneg_kernel_residual(ambient.T)
    if residual <= _CONE_RESIDUAL:
        raise InvalidSimpleSystem("roots are not positively independent")

    try:
        source = GeometricModule.from_gram((gram + gram.T) / 2.0)
        return SubsystemEmbedding(source=source, target=m, matrix=ambient.T)
    except InvalidModule as e:
        raise InvalidSimpleSystem(str(e)) from e


def verify_phi_bijection(emb: SubsystemEmbedding, depth: int) -> PhiReport:
    """
    Map the source roots of depth <= depth through phi_A and check that the
    images are distinct positive roots of the target preserving B.
    """
    if depth < 1:
        raise ValueError(f"depth must be >= 1, got {depth}")
    target = emb.target
    source_table = enumerate_roots(emb.source, depth)
    report = PhiReport()

    images = emb.apply(source_table.coords_matrix())
    image_coords = np.vstack([target.to_delta(v) for v in images])
    seen = RootTable(target.rank)

    for root, v in zip(source_table.up_to(), image_coords):
        report.checked += 1
        scale = max(1.0, float(np.abs(v).sum()))
        if v.min() < -settings.DEDUP_QUANTUM * scale:
            report.not_positive.append(root.index)
        elif root_descent(target, v) is None:
            report.not_roots.append(root.index)
        hit = seen.find(v)
        if hit is not None:
            report.collisions.append((hit.parent, root.index))
        else:
            # parent slot carries the source index for collision reports
            seen.add(v, depth=1, parent=root.index, generator=0)

    # B_target(phi(u), phi(alpha_i)) against B_A(u, alpha_i)
    expected = source_table.coords_matrix() @ emb.source.gram
    actual = images @ target.form @ emb.matrix
    scale = np.maximum(1.0, np.abs(expected))
    for r, i in zip(*np.nonzero(np.abs(actual - expected) > 1e-10 * scale)):
        report.form_mismatches.append((int(r), int(i)))

    logger.info("phi_A check: %d roots, %d mismatches", report.checked, report.mismatches)
    return report


# ─── Exact limit sets ─────────────────────────────────────────────────────────

def exact_limit_set(m: GeometricModule, h: TransverseHyperplane) -> List[LimitPoint]:
    """
    E(Phi) where it is known exactly: finite, rank 2, irreducible affine,
    and disjoint unions of those over the irreducible components.
    """
    parts = reducible_split(m)
    if len(parts) > 1:
        points: List[LimitPoint] = []
        for part in parts:
            sub_points = exact_limit_set(part.module, default_hyperplane(part.module))
            for p in sub_points:
                v = m.to_ambient(part.include(p.coords))
                points.append(LimitPoint(v / h.value(v), p.provenance))
        return points

    kind = form_type(m)
    if kind is FormType.FINITE:
        return []
    if m.rank == 2:
        a, b = normalize(h, m.simple_root(0)), normalize(h, m.simple_root(1))
        return list(line_quadric_intersect(m, h, a, b, PairProvenance(0, 1)).points)
    if kind is FormType.AFFINE:
        sig = signature(m)
        if sig.n_zero == 1:
            v = sig.radical_basis[0]
            return [LimitPoint(v / h.value(v))]
    raise LimitSetUnknown(f"no exact limit set for a rank {m.rank} {kind.value} system")
