import numpy as np
import pytest

from limitroots.services.coxeter import (
    NotPositivelyIndependent,
    OnKernel,
    canonical_module,
    custom_hyperplane,
    make_transverse,
    normalize,
    rebase,
    simplex_coordinates,
)


def test_default_cut_is_coordinate_sum(system):
    _, m, h = system("g533")
    np.testing.assert_allclose(h.functional, [1.0, 1.0, 1.0])
    p = normalize(h, [2.0, 1.0, 1.0])
    np.testing.assert_allclose(p.coords, [0.5, 0.25, 0.25])


def test_normalize_on_kernel(system):
    _, _, h = system("dihedral_affine")
    with pytest.raises(OnKernel):
        normalize(h, [1.0, -1.0])


def test_custom_hyperplane_must_be_transverse(system):
    _, m, _ = system("a2")
    h = custom_hyperplane(m, [1.0, 3.0])
    np.testing.assert_allclose(normalize(h, [1.0, 1.0]).coords, [0.25, 0.25])
    with pytest.raises(NotPositivelyIndependent):
        custom_hyperplane(m, [1.0, -1.0])
    with pytest.raises(NotPositivelyIndependent):
        custom_hyperplane(m, [1.0, 0.0])


def test_make_transverse_on_basis(system):
    _, m, _ = system("g444")
    h = make_transverse(m)
    np.testing.assert_allclose(m.simple_roots @ h.functional, [1.0, 1.0, 1.0], atol=1e-7)


def test_make_transverse_without_basis(system):
    _, m, _ = system("g444")
    s2 = np.sqrt(2.0)
    # four roots spanning the rank 3 space
    emb = canonical_module(m, [[1, 0, 0], [0, 0, 1], [1, s2, 0], [0, s2, 1]])
    h = make_transverse(emb.image)
    h.check_transverse(emb.image)
    assert np.all(emb.image.simple_roots @ h.functional > 1e-6)


def test_rebase_moves_along_ray(system):
    _, m, h = system("g533")
    h_new = custom_hyperplane(m, [1.0, 2.0, 3.0])
    p = normalize(h, [1.0, 1.0, 0.0])
    moved = rebase(h, h_new, p)
    assert h_new.value(moved.coords) == pytest.approx(1.0)
    np.testing.assert_allclose(np.cross(moved.coords, p.coords), 0.0, atol=1e-12)


def test_simplex_coordinates(system):
    _, m, _ = system("g533")
    h = custom_hyperplane(m, [1.0, 2.0, 4.0])
    p = normalize(h, [1.0, 1.0, 1.0])
    bary = simplex_coordinates(m, h, p)
    assert bary.sum() == pytest.approx(1.0)
    np.testing.assert_allclose(bary, [1 / 7, 2 / 7, 4 / 7])


def test_rebase_round_trip(system):
    _, m, h = system("g533")
    h_new = custom_hyperplane(m, [1.0, 2.0, 3.0])
    rng = np.random.default_rng(7)
    for bary in rng.dirichlet(np.ones(3), size=100):
        p = normalize(h, bary)
        back = rebase(h_new, h, rebase(h, h_new, p))
        np.testing.assert_allclose(back.coords, p.coords, atol=1e-12)


def test_rebase_rejects_negative_side(system):
    _, m, h = system("dihedral_affine")
    h_new = custom_hyperplane(m, [1.0, 3.0])
    p = normalize(h, [2.0, -1.0])
    with pytest.raises(OnKernel):
        rebase(h, h_new, p)
