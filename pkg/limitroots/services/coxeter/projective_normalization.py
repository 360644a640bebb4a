"""
Transverse hyperplanes and the normalization map v -> v / f(v).

A cut is a linear form f positive on every simple root; points are
normalized onto the affine hyperplane {f = 1}. The default cut is the
coordinate sum over Delta, so the normalized roots live in the simplex
spanned by Delta.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Optional

import numpy as np
from numpy.typing import ArrayLike
from scipy.optimize import linprog

from ...config import settings
from .bilinear_core import GeometricModule, Vector, _readonly
from .errors import InvalidModule, NotPositivelyIndependent, OnKernel

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class TransverseHyperplane:
    """The affine hyperplane {v : functional . v = 1}."""

    functional: Vector

    def __post_init__(self) -> None:
        object.__setattr__(self, "functional", _readonly(self.functional))

    def value(self, v: ArrayLike) -> float:
        return float(self.functional @ np.asarray(v, dtype=float))

    def check_transverse(self, m: GeometricModule) -> None:
        """Raise unless f(alpha) > CLASS_TOL for every simple root."""
        if self.functional.shape != (m.dim,):
            raise InvalidModule(
                f"functional has length {self.functional.shape[0]}, module dim is {m.dim}"
            )
        values = m.simple_roots @ self.functional
        if np.any(values <= settings.CLASS_TOL):
            raise NotPositivelyIndependent(
                f"hyperplane is not transverse: f(alpha) = {np.round(values, 6).tolist()}"
            )


@dataclass(frozen=True, eq=False)
class NormalizedPoint:
    """A point on a cut hyperplane, with optional provenance."""

    coords: Vector
    source: Optional[Any] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "coords", _readonly(self.coords))


def as_coords(point: Any) -> Vector:
    """Accept NormalizedPoint, LimitPoint, Root-free arrays alike."""
    coords = getattr(point, "coords", point)
    return np.asarray(coords, dtype=float)


# ─── Public API ───────────────────────────────────────────────────────────────

def default_hyperplane(m: GeometricModule) -> TransverseHyperplane:
    """V_1 = {sum of coordinates over Delta = 1}."""
    if not m.is_basis:
        raise InvalidModule("the coordinate-sum cut needs Delta to be a basis")
    # f(v) = sum of the Delta-coordinates of v, written in ambient coordinates
    functional = np.linalg.solve(m.simple_roots, np.ones(m.rank))
    return TransverseHyperplane(functional)


def make_transverse(m: GeometricModule) -> TransverseHyperplane:
    """
    A functional positive on every simple root, found by linear programming.

    Maximizes the smallest value f(alpha) subject to the barycentric
    normalization mean f(alpha) = 1. Works when Delta is not a basis.
    """
    n, d = m.rank, m.dim
    margin = settings.TRANSVERSE_MARGIN
    S = m.simple_roots

    # variables (f_1..f_d, t); maximize t
    c = np.zeros(d + 1)
    c[-1] = -1.0
    A_ub = np.hstack([-S, np.ones((n, 1))])  # t - f(alpha_s) <= 0
    b_ub = np.zeros(n)
    A_eq = np.hstack([S.sum(axis=0, keepdims=True) / n, np.zeros((1, 1))])
    b_eq = np.array([1.0])
    bounds = [(-1e6, 1e6)] * d + [(None, 1.0)]

    result = linprog(c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq, bounds=bounds, method="highs")
    if not result.success or result.x[-1] < margin:
        raise NotPositivelyIndependent("no linear form is positive on every simple root")

    functional = result.x[:d]
    logger.debug("Transverse functional %s (margin %.3g)", np.round(functional, 6), result.x[-1])
    return TransverseHyperplane(functional)


def custom_hyperplane(m: GeometricModule, functional: ArrayLike) -> TransverseHyperplane:
    """User-supplied cut, validated for transversality."""
    h = TransverseHyperplane(np.asarray(functional, dtype=float))
    h.check_transverse(m)
    return h


def normalize(h: TransverseHyperplane, v: ArrayLike, source: Any = None) -> NormalizedPoint:
    """pi_H(v) = v / f(v)."""
    arr = as_coords(v)
    value = h.value(arr)
    if abs(value) <= settings.CLASS_TOL:
        raise OnKernel(f"f(v) = {value:.3g}, v is on the kernel of the cut")
    return NormalizedPoint(arr / value, source)


def normalize_many(h: TransverseHyperplane, vectors: np.ndarray) -> np.ndarray:
    """Row-wise normalization of an N x d array."""
    values = vectors @ h.functional
    if vectors.size and np.any(np.abs(values) <= settings.CLASS_TOL):
        raise OnKernel("some vectors lie on the kernel of the cut")
    return vectors / values[:, None]


def rebase(
    h: TransverseHyperplane,
    h_new: TransverseHyperplane,
    p: Any,
) -> NormalizedPoint:
    """Move a point of cut h to the cut h_new along its ray."""
    coords = as_coords(p)
    value = h_new.value(coords)
    if value <= settings.CLASS_TOL:
        raise OnKernel(f"f'(p) = {value:.3g}, point is not on the positive side of the new cut")
    return NormalizedPoint(coords / value, getattr(p, "source", None))


def simplex_coordinates(m: GeometricModule, h: TransverseHyperplane, p: Any) -> Vector:
    """
    Barycentric coordinates of p over the normalized simple roots.

    They sum to f(p) and are all >= 0 iff p lies in conv(Delta-hat).
    """
    coords_over_delta = m.to_delta(as_coords(p))
    return coords_over_delta * (m.simple_roots @ h.functional)


def simplex_coordinates_many(m: GeometricModule, h: TransverseHyperplane, points: np.ndarray) -> np.ndarray:
    if not m.is_basis:
        raise InvalidModule("barycentric coordinates need Delta to be a basis")
    if points.size == 0:
        return np.zeros((0, m.rank))
    over_delta = np.linalg.solve(m.simple_roots.T, points.T).T
    return over_delta * (m.simple_roots @ h.functional)[None, :]
