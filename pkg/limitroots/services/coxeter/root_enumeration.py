"""
Breadth-first enumeration of positive roots by depth.

Every root of depth r >= 2 is s_alpha(rho') for a root rho' of depth r - 1
and a simple root alpha with B(alpha, rho') < 0. Enumeration follows only
those edges, so each level is produced from the previous one without
revisiting shallower roots.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from numpy.typing import ArrayLike

from ...config import settings
from .bilinear_core import GeometricModule, Vector, _readonly
from .errors import AllOrthogonal, DepthOverflow, InvalidModule

logger = logging.getLogger(__name__)

# Depth-norm slack below which a root is reported
_NORM_SLACK = 1e-9


@dataclass(frozen=True, eq=False)
class Root:
    """
    A positive root with its coordinates over Delta.

    parent/generator record how the root was produced: it equals
    s_generator(parent). Simple roots have no parent and generator = s.
    """

    index: int
    coords: Vector
    depth: int
    parent: Optional[int]
    generator: int

    @property
    def l1(self) -> float:
        return float(np.abs(self.coords).sum())

    @property
    def is_simple(self) -> bool:
        return self.depth == 1

    def __repr__(self) -> str:
        coords = ", ".join(f"{c:.4g}" for c in self.coords)
        return f"Root(#{self.index} dp={self.depth} [{coords}])"


@dataclass(frozen=True)
class KappaReport:
    """Smallest nonzero pairing kappa and lambda = 4 kappa^2."""

    kappa: float
    lam: float
    sampled_values: Tuple[float, ...]


@dataclass(frozen=True)
class DepthNormViolation:
    root_index: int
    depth: int
    norm_sq: float
    bound: float

    @property
    def slack(self) -> float:
        return self.norm_sq - self.bound


class RootTable:
    """
    Depth-stratified store of positive roots with deduplication.

    Roots are keyed by their coordinates rounded to a grid of size
    `quantum`; a key hit is confirmed by a direct tolerance comparison.
    """

    def __init__(self, rank: int, quantum: Optional[float] = None) -> None:
        self.rank = rank
        self.quantum = settings.DEDUP_QUANTUM if quantum is None else quantum
        self.roots: List[Root] = []
        self.levels: List[List[int]] = []
        self._index: Dict[Tuple[int, ...], List[int]] = {}

    # ─── Lookup ───────────────────────────────────────────────────────────

    def _key(self, coords: Vector) -> Tuple[int, ...]:
        return tuple(int(k) for k in np.rint(coords / self.quantum))

    def find(self, coords: ArrayLike) -> Optional[Root]:
        """Return the stored root at these coordinates, if any."""
        arr = np.asarray(coords, dtype=float)
        for idx in self._index.get(self._key(arr), ()):
            if np.max(np.abs(self.roots[idx].coords - arr)) <= self.quantum:
                return self.roots[idx]
        return None

    def add(
        self,
        coords: ArrayLike,
        depth: int,
        parent: Optional[int],
        generator: int,
    ) -> Optional[Root]:
        """Insert-if-absent. Returns the new root, or None when already stored."""
        arr = _readonly(coords)
        if self.find(arr) is not None:
            return None
        while len(self.levels) < depth:
            self.levels.append([])
        root = Root(
            index=len(self.roots), coords=arr, depth=depth,
            parent=parent, generator=generator,
        )
        self.roots.append(root)
        self.levels[depth - 1].append(root.index)
        self._index.setdefault(self._key(arr), []).append(root.index)
        return root

    # ─── Views ────────────────────────────────────────────────────────────

    @property
    def max_depth(self) -> int:
        return len(self.levels)

    def by_depth(self, depth: int) -> List[Root]:
        """Roots of exactly this depth (depth 1 = simple roots)."""
        if depth < 1 or depth > self.max_depth:
            return []
        return [self.roots[i] for i in self.levels[depth - 1]]

    def up_to(self, depth: Optional[int] = None) -> List[Root]:
        limit = self.max_depth if depth is None else min(depth, self.max_depth)
        return [self.roots[i] for r in range(limit) for i in self.levels[r]]

    def coords_matrix(self, depth: Optional[int] = None) -> np.ndarray:
        roots = self.up_to(depth)
        if not roots:
            return np.zeros((0, self.rank))
        return np.vstack([r.coords for r in roots])

    def simple(self, s: int) -> Root:
        return self.roots[self.levels[0][s]]

    def witness(self, root: Root) -> Tuple[Tuple[int, ...], int]:
        """
        Word w and simple index b with root = w(alpha_b).

        w is read as a product s_{w[0]} s_{w[1]} ... acting right to left.
        """
        word: List[int] = []
        node = root
        while node.parent is not None:
            word.append(node.generator)
            node = self.roots[node.parent]
        return tuple(word), node.generator

    def truncated(self, depth: int) -> "RootTable":
        """Copy holding only roots of depth <= depth (indices preserved)."""
        table = RootTable(self.rank, self.quantum)
        for root in self.up_to(depth):
            table.add(root.coords, root.depth, root.parent, root.generator)
        while table.max_depth < depth:
            table.levels.append([])
        return table

    def __len__(self) -> int:
        return len(self.roots)

    def __iter__(self) -> Iterator[Root]:
        return iter(self.roots)

    # ─── Serialization ────────────────────────────────────────────────────

    def to_dict(self) -> dict:
        return {
            "rank": self.rank,
            "quantum": self.quantum,
            "max_depth": self.max_depth,
            "roots": [
                {
                    "coords": r.coords.tolist(),
                    "depth": r.depth,
                    "parent": r.parent,
                    "generator": r.generator,
                }
                for r in self.roots
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RootTable":
        table = cls(int(data["rank"]), float(data["quantum"]))
        for entry in data["roots"]:
            table.add(entry["coords"], entry["depth"], entry["parent"], entry["generator"])
        while table.max_depth < int(data["max_depth"]):
            table.levels.append([])
        return table


# ─── Public API ───────────────────────────────────────────────────────────────

def enumerate_roots(m: GeometricModule, max_depth: int) -> RootTable:
    """
    All positive roots of depth <= max_depth.

    Level r is built generator by generator, each generator scanning the
    parents of level r - 1 in order.
    """
    if max_depth < 1:
        raise ValueError(f"max_depth must be >= 1, got {max_depth}")
    if not m.is_basis:
        raise InvalidModule("enumeration needs Delta to be a basis of V")

    eps = settings.CLASS_TOL
    n = m.rank
    gram = m.gram
    table = RootTable(n)

    for s in range(n):
        table.add(np.eye(n)[s], depth=1, parent=None, generator=s)

    for depth in range(2, max_depth + 1):
        parents = table.by_depth(depth - 1)
        table.levels.append([])
        if not parents:
            continue
        parent_coords = np.vstack([p.coords for p in parents])
        pairings = parent_coords @ gram  # pairings[k, s] = B(alpha_s, parent_k)

        for s in range(n):
            for k in np.flatnonzero(pairings[:, s] < -eps):
                child = parent_coords[k].copy()
                child[s] -= 2.0 * pairings[k, s]
                if np.abs(child).max() > settings.MAX_COORD:
                    raise DepthOverflow(
                        f"coordinates exceed {settings.MAX_COORD:g} at depth {depth}"
                    )
                table.add(child, depth=depth, parent=parents[k].index, generator=s)

        logger.debug("Depth %d: %d roots", depth, len(table.levels[depth - 1]))

    logger.info("Enumerated %d positive roots up to depth %d", len(table), max_depth)
    return table


def level_counts(table: RootTable) -> List[int]:
    """Number of roots at each depth, starting at depth 1."""
    return [len(level) for level in table.levels]


def kappa_lambda(m: GeometricModule, table: RootTable) -> KappaReport:
    """
    kappa = min |B(alpha, rho)| over nonzero pairings of simple roots with
    stored roots (self-pairings excluded), clamped to 1.
    """
    if not len(table):
        raise ValueError("table is empty")
    eps = settings.CLASS_TOL
    coords = table.coords_matrix()
    pairings = np.abs(coords @ m.gram)

    # Drop B(alpha_s, alpha_s) = 1
    for s in range(m.rank):
        pairings[table.simple(s).index, s] = 0.0

    values = pairings[pairings > eps]
    if values.size == 0:
        raise AllOrthogonal("every pairing B(alpha, rho) vanishes")

    kappa = min(float(values.min()), 1.0)
    below_one = np.unique(np.round(values[values < 1.0 - eps], 9))
    return KappaReport(
        kappa=kappa,
        lam=4.0 * kappa * kappa,
        sampled_values=tuple(float(v) for v in below_one),
    )


def audit_depth_norm(
    m: GeometricModule,
    table: RootTable,
    report: KappaReport,
) -> List[DepthNormViolation]:
    """Roots breaking ||rho||^2 >= 1 + lambda (dp(rho) - 1), Delta orthonormal."""
    violations: List[DepthNormViolation] = []
    for root in table:
        norm_sq = float(root.coords @ root.coords)
        bound = 1.0 + report.lam * (root.depth - 1)
        if norm_sq - bound < -_NORM_SLACK:
            violations.append(DepthNormViolation(root.index, root.depth, norm_sq, bound))
    if violations:
        logger.warning("Depth-norm bound fails for %d roots", len(violations))
    return violations


def root_descent(
    m: GeometricModule,
    coords: ArrayLike,
    max_steps: int = 10_000,
) -> Optional[Tuple[int, Tuple[int, ...], int]]:
    """
    Walk a vector down to a simple root.

    While the vector is not simple, reflect in the first simple root alpha
    with B(alpha, v) > 0. Returns (depth, word, base) with v = word(alpha_base),
    or None when a coordinate turns negative (v is not a positive root).
    """
    eps = settings.CLASS_TOL
    v = np.array(coords, dtype=float)
    scale = max(1.0, float(np.abs(v).sum()))
    tol = settings.DEDUP_QUANTUM * scale
    word: List[int] = []

    for _ in range(max_steps):
        if v.min() < -tol:
            return None
        big = np.flatnonzero(v > tol)
        if big.size == 1 and abs(v[big[0]] - 1.0) <= tol:
            return len(word) + 1, tuple(word), int(big[0])
        pairings = m.gram @ v
        candidates = np.flatnonzero(pairings > eps)
        if candidates.size == 0:
            return None
        s = int(candidates[0])
        v[s] -= 2.0 * pairings[s]
        word.append(s)

    logger.debug("root_descent gave up after %d steps", max_steps)
    return None


def words_up_to(n: int, length: int) -> Iterator[Tuple[int, ...]]:
    """All words without equal adjacent letters, shortest first."""
    level: List[Tuple[int, ...]] = [()]
    yield ()
    for _ in range(length):
        nxt: List[Tuple[int, ...]] = []
        for word in level:
            for s in range(n):
                if word and word[-1] == s:
                    continue
                nxt.append(word + (s,))
        yield from nxt
        level = nxt


def apply_word(m: GeometricModule, word: Sequence[int], v: ArrayLike) -> Vector:
    """Apply s_{w[0]} s_{w[1]} ... to an ambient vector (rightmost letter first)."""
    out = np.array(v, dtype=float)
    for s in reversed(word):
        alpha = m.simple_root(s)
        out = out - 2.0 * float(alpha @ m.form @ out) * alpha
    return out
