"""
Geometric modules: the pair (V, B) together with a simple system Delta.

A module stores its simple roots as rows of an n x d matrix in some ambient
basis of V, and the form B as a d x d matrix in that same basis. When Delta
is itself the ambient basis (the canonical module of a Coxeter matrix) both
matrices coincide with the Gram matrix of Delta.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.optimize import nnls
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from ...config import settings
from ...models.system import INFINITY_LABEL, CoxeterSpec
from .errors import DimensionMismatch, InvalidModule, IsotropicMirror

logger = logging.getLogger(__name__)

Vector = NDArray[np.float64]

# Residual below which a nonnegative combination counts as zero
_CONE_RESIDUAL = 1e-7


def _readonly(values: ArrayLike) -> NDArray[np.float64]:
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


# ─── Types ────────────────────────────────────────────────────────────────────

@dataclass(frozen=True, eq=False)
class GeometricModule:
    """
    A based root system's ambient data.

    simple_roots: n x d, row s is alpha_s in ambient coordinates.
    form: d x d matrix of B in ambient coordinates.
    gram: n x n matrix of B(alpha_s, alpha_t), derived.

    Construction validates the three axioms of a based root system:
    unit diagonal, dihedral off-diagonal values and positive independence.
    """

    simple_roots: NDArray[np.float64]
    form: NDArray[np.float64]
    gram: NDArray[np.float64] = field(init=False)

    def __post_init__(self) -> None:
        simple = _readonly(self.simple_roots)
        form = _readonly(self.form)
        if simple.ndim != 2 or form.ndim != 2:
            raise InvalidModule("simple_roots and form must be matrices")
        if form.shape != (simple.shape[1], simple.shape[1]):
            raise InvalidModule(
                f"form has shape {form.shape}, expected {(simple.shape[1],) * 2}"
            )
        if not np.all(np.isfinite(simple)) or not np.all(np.isfinite(form)):
            raise InvalidModule("module entries must be finite")
        if not np.allclose(form, form.T, atol=settings.CLASS_TOL):
            raise InvalidModule("form is not symmetric")

        object.__setattr__(self, "simple_roots", simple)
        object.__setattr__(self, "form", form)
        object.__setattr__(self, "gram", _readonly(simple @ form @ simple.T))
        _validate_axioms(self)

    @classmethod
    def from_gram(cls, gram: ArrayLike) -> "GeometricModule":
        """Canonical module (V_A, B_A): Delta is the standard basis."""
        matrix = np.array(gram, dtype=float)
        return cls(simple_roots=np.eye(matrix.shape[0]), form=matrix)

    @property
    def rank(self) -> int:
        return self.simple_roots.shape[0]

    @property
    def dim(self) -> int:
        return self.simple_roots.shape[1]

    @property
    def is_basis(self) -> bool:
        return self.rank == self.dim and np.linalg.matrix_rank(self.simple_roots) == self.rank

    def simple_root(self, s: int) -> Vector:
        return self.simple_roots[s]

    def to_ambient(self, coords: ArrayLike) -> Vector:
        """Coordinates over Delta -> ambient coordinates."""
        return np.asarray(coords, dtype=float) @ self.simple_roots

    def to_delta(self, v: ArrayLike) -> Vector:
        """Ambient coordinates -> coordinates over Delta (Delta must be a basis)."""
        if not self.is_basis:
            raise InvalidModule("coordinates over Delta need Delta to be a basis")
        return np.linalg.solve(self.simple_roots.T, np.asarray(v, dtype=float))


@dataclass(frozen=True, eq=False)
class SignatureReport:
    """Inertia of B plus an orthonormal basis of its radical."""

    n_positive: int
    n_negative: int
    n_zero: int
    radical_basis: Tuple[Vector, ...]
    eigenvalues: Vector

    def as_tuple(self) -> Tuple[int, int, int]:
        return (self.n_positive, self.n_negative, self.n_zero)


class FormType(str, Enum):
    FINITE = "finite"
    AFFINE = "affine"
    HYPERBOLIC = "hyperbolic"
    INDEFINITE = "indefinite"


# ─── Validation helpers ───────────────────────────────────────────────────────

def is_dihedral_value(b: float, tol: Optional[float] = None) -> bool:
    """True iff b = -cos(pi/m) for an integer m >= 2, or b <= -1."""
    eps = settings.CLASS_TOL if tol is None else tol
    if b <= -1.0 + eps:
        return True
    if b > eps:
        return False
    m = np.pi / np.arccos(min(1.0, max(-1.0, -b)))
    k = int(round(m))
    return k >= 2 and abs(-np.cos(np.pi / k) - b) <= eps


def nonneg_kernel_residual(matrix: ArrayLike) -> Tuple[float, Vector]:
    """
    Minimize ||M c|| over c >= 0 with sum(c) = 1.

    Returns the residual and the minimizer. Solved as a nonnegative least
    squares problem with the normalization appended as a heavy row.
    """
    M = np.atleast_2d(np.asarray(matrix, dtype=float))
    k = M.shape[1]
    weight = 1e3 * max(1.0, float(np.abs(M).max()))
    A = np.vstack([M, weight * np.ones((1, k))])
    b = np.zeros(A.shape[0])
    b[-1] = weight
    c, _ = nnls(A, b)
    total = c.sum()
    if total <= 0.0:
        return float("inf"), c
    c = c / total
    return float(np.linalg.norm(M @ c)), c


def _validate_axioms(m: GeometricModule) -> None:
    eps = settings.CLASS_TOL
    gram = m.gram
    n = m.rank
    for s in range(n):
        if abs(gram[s, s] - 1.0) > eps:
            raise InvalidModule(f"B(alpha_{s}, alpha_{s}) = {gram[s, s]:.12g}, expected 1")
        for t in range(s + 1, n):
            if not is_dihedral_value(gram[s, t]):
                raise InvalidModule(
                    f"B(alpha_{s}, alpha_{t}) = {gram[s, t]:.12g} is neither "
                    "-cos(pi/m) nor <= -1"
                )
    residual, _ = nonneg_kernel_residual(m.simple_roots.T)
    if residual <= _CONE_RESIDUAL:
        raise InvalidModule("simple roots are not positively independent")


# ─── Public API ───────────────────────────────────────────────────────────────

def build_module(spec: CoxeterSpec) -> GeometricModule:
    """
    Canonical geometric module of a Coxeter matrix.

    Finite labels give -cos(pi/m); infinity labels give the override value,
    or -1 when none is set. Overrides within CLASS_TOL of -1 snap to -1.
    """
    n = spec.rank
    gram = np.eye(n)
    for s in range(n):
        for t in range(s + 1, n):
            m = spec.labels[s][t]
            if m == INFINITY_LABEL:
                value = spec.override_for(s, t)
                if value is None or value >= -1.0 - settings.CLASS_TOL:
                    value = -1.0
            elif m == 2:
                value = 0.0
            elif m == 3:
                value = -0.5
            else:
                value = -np.cos(np.pi / m)
            gram[s, t] = gram[t, s] = value

    logger.debug("Built rank %d module%s", n, f" '{spec.name}'" if spec.name else "")
    return GeometricModule.from_gram(gram)


def bilinear(m: GeometricModule, u: ArrayLike, v: ArrayLike) -> float:
    """B(u, v) for ambient vectors u, v."""
    u_arr = np.asarray(u, dtype=float)
    v_arr = np.asarray(v, dtype=float)
    if u_arr.shape != (m.dim,) or v_arr.shape != (m.dim,):
        raise DimensionMismatch(
            f"expected vectors of length {m.dim}, got {u_arr.shape} and {v_arr.shape}"
        )
    return float(u_arr @ m.form @ v_arr)


def quadratic(m: GeometricModule, v: ArrayLike) -> float:
    """q(v) = B(v, v)."""
    return bilinear(m, v, v)


def reflect(m: GeometricModule, mirror: ArrayLike, v: ArrayLike) -> Vector:
    """B-reflection of v in the hyperplane B-orthogonal to mirror."""
    mirror_arr = np.asarray(mirror, dtype=float)
    v_arr = np.asarray(v, dtype=float)
    q_mirror = quadratic(m, mirror_arr)
    if abs(q_mirror) <= settings.CLASS_TOL:
        raise IsotropicMirror(f"q(mirror) = {q_mirror:.3g}, reflection undefined")
    return v_arr - 2.0 * (bilinear(m, mirror_arr, v_arr) / q_mirror) * mirror_arr


def signature(m: GeometricModule) -> SignatureReport:
    """Eigenvalue signs of B in ambient coordinates."""
    eigenvalues, eigenvectors = np.linalg.eigh(m.form)
    scale = float(np.abs(eigenvalues).max()) if eigenvalues.size else 0.0
    zero_tol = settings.EIGEN_REL_TOL * scale if scale > 0 else settings.CLASS_TOL

    positive = int(np.sum(eigenvalues > zero_tol))
    negative = int(np.sum(eigenvalues < -zero_tol))
    zero_mask = np.abs(eigenvalues) <= zero_tol
    radical = tuple(_readonly(eigenvectors[:, i]) for i in np.flatnonzero(zero_mask))

    return SignatureReport(
        n_positive=positive,
        n_negative=negative,
        n_zero=int(zero_mask.sum()),
        radical_basis=radical,
        eigenvalues=_readonly(eigenvalues),
    )


def components(m: GeometricModule) -> List[Tuple[int, ...]]:
    """Connected components of the graph with an edge where B(alpha_s, alpha_t) != 0."""
    adjacency = np.abs(m.gram) > settings.CLASS_TOL
    np.fill_diagonal(adjacency, False)
    count, labels = connected_components(csr_matrix(adjacency), directed=False)
    groups = [tuple(int(i) for i in np.flatnonzero(labels == c)) for c in range(count)]
    return sorted(groups, key=lambda g: g[0])


def radical_cone_trivial(m: GeometricModule) -> bool:
    """True iff V-perp meets cone(Delta) only in 0."""
    residual, _ = nonneg_kernel_residual(m.form @ m.simple_roots.T)
    return residual > _CONE_RESIDUAL


def form_type(m: GeometricModule) -> FormType:
    """Coarse type of the form: finite, affine, hyperbolic (signature (d-1, 1)) or indefinite."""
    sig = signature(m)
    if sig.n_negative == 0:
        return FormType.FINITE if sig.n_zero == 0 else FormType.AFFINE
    if sig.n_negative == 1 and sig.n_zero == 0:
        return FormType.HYPERBOLIC
    return FormType.INDEFINITE
