import numpy as np
import pytest

from conftest import GOLDEN
from limitroots.services.coxeter import (
    CoincidentPoints,
    EmptyQuadric,
    EmptySet,
    KernelCrossing,
    LimitPoint,
    act,
    apply_word,
    conic_sample,
    dedup_points,
    directed_hausdorff,
    e2_circ_points,
    e2_points,
    f0_sample,
    line_quadric_intersect,
    normalize,
    orbit_limit_probe,
    quadratic,
    reflect_point,
    visible,
    word_matrix,
)


def _coords(points):
    return np.vstack([p.coords for p in points])


# ─── Line / quadric ───────────────────────────────────────────────────────────

def test_affine_line_is_tangent(system):
    _, m, h = system("dihedral_affine")
    res = line_quadric_intersect(m, h, [1.0, 0.0], [0.0, 1.0])
    assert res.tangent
    assert res.count == 1
    np.testing.assert_allclose(res.points[0].coords, [0.5, 0.5], atol=1e-12)


def test_non_affine_dihedral_closed_form(system):
    _, m, h = system("dihedral_101")
    res = line_quadric_intersect(m, h, [1.0, 0.0], [0.0, 1.0])
    assert not res.tangent
    assert res.count == 2
    c_small, c_big = 1.01 - np.sqrt(0.0201), 1.01 + np.sqrt(0.0201)
    expected = [c_small / (c_small + 1.0), c_big / (c_big + 1.0)]
    np.testing.assert_allclose([p.coords[0] for p in res.points], expected, atol=1e-9)
    np.testing.assert_allclose(res.lambdas, expected, atol=1e-9)
    for p in res.points:
        assert abs(quadratic(m, p.coords)) <= 1e-9
        assert p.coords.sum() == pytest.approx(1.0)


def test_tangent_at_isotropic_endpoint(system):
    _, m, h = system("dihedral_affine")
    res = line_quadric_intersect(m, h, [1.0, 0.0], [0.5, 0.5])
    assert res.tangent
    assert res.lambdas[0] == pytest.approx(0.0, abs=1e-12)


def test_coincident_points(system):
    _, m, h = system("g533")
    with pytest.raises(CoincidentPoints):
        line_quadric_intersect(m, h, [1.0, 0.0, 0.0], [1.0, 0.0, 0.0])


# ─── E2 / E2-circ ─────────────────────────────────────────────────────────────

def test_finite_system_has_no_limit_roots(system, roots):
    _, m, h = system("a2")
    assert e2_points(m, h, roots("a2", 3)) == []
    assert e2_circ_points(m, h, roots("a2", 3)) == []


def test_affine_dihedral_single_limit_root(system, roots):
    _, m, h = system("dihedral_affine")
    points = e2_points(m, h, roots("dihedral_affine", 6))
    assert len(dedup_points(points, 1e-6)) == 1
    np.testing.assert_allclose(_coords(points), 0.5, atol=1e-6)


def test_golden_pair_in_e2(system, roots):
    _, m, h = system("g533")
    table = roots("g533", 3)
    rho = table.find([GOLDEN, GOLDEN, 0.0])
    assert rho is not None and rho.depth == 3
    gamma = np.array([0.0, 0.0, 1.0])
    assert float(gamma @ m.gram @ rho.coords) == pytest.approx(-GOLDEN)

    res = line_quadric_intersect(m, h, normalize(h, gamma), normalize(h, rho.coords))
    assert res.count == 2
    e2 = _coords(e2_points(m, h, table))
    assert directed_hausdorff(_coords(res.points), e2) <= 1e-9


def test_e2_circ_inside_e2(system, roots):
    _, m, h = system("g444")
    table = roots("g444", 6)
    circ = e2_circ_points(m, h, table)
    full = e2_points(m, h, table)
    assert 0 < len(circ) <= len(full)
    assert directed_hausdorff(_coords(circ), _coords(full)) <= 1e-8


def test_e2_points_on_quadric_and_simplex(system, roots):
    _, m, h = system("g237")
    coords = _coords(e2_points(m, h, roots("g237", 6)))
    q = np.einsum("ij,jk,ik->i", coords, m.gram, coords)
    assert np.abs(q).max() <= 1e-9
    assert coords.min() >= -1e-9
    np.testing.assert_allclose(coords.sum(axis=1), 1.0)


# ─── Group action ─────────────────────────────────────────────────────────────

def test_affine_limit_root_is_fixed(system):
    _, m, h = system("dihedral_affine")
    x = LimitPoint(np.array([0.5, 0.5]))
    image = act(m, h, (0, 1, 0), x)
    assert isinstance(image, LimitPoint)
    np.testing.assert_allclose(image.coords, [0.5, 0.5], atol=1e-12)
    assert image.provenance.word == (0, 1, 0)


def test_empty_word_is_identity(system):
    _, m, h = system("g533")
    x = normalize(h, [1.0, 2.0, 3.0])
    np.testing.assert_allclose(act(m, h, (), x).coords, x.coords)


def test_act_rejects_bad_letters(system):
    _, m, h = system("g533")
    with pytest.raises(ValueError):
        act(m, h, (0, 3), [1 / 3, 1 / 3, 1 / 3])


def test_kernel_crossing(system):
    _, m, h = system("dihedral_affine")
    with pytest.raises(KernelCrossing):
        act(m, h, (0,), [0.75, 0.25])


def test_action_letter_by_letter(system, roots):
    _, m, h = system("g444")
    word = (0, 1, 2, 1)
    for x in e2_points(m, h, roots("g444", 4))[:20]:
        step = x
        for s in reversed(word):
            step = act(m, h, (s,), step)
        np.testing.assert_allclose(act(m, h, word, x).coords, step.coords, atol=1e-10)


def test_visibility(system):
    _, m, h = system("dihedral_101")
    near_beta, near_alpha = line_quadric_intersect(m, h, [1.0, 0.0], [0.0, 1.0]).points
    alpha = [1.0, 0.0]
    assert visible(m, alpha, near_alpha)
    assert not visible(m, alpha, near_beta)


def test_reflection_fixes_orthogonal_limit_points(system):
    _, m, h = system("dihedral_affine")
    x = [0.5, 0.5]
    np.testing.assert_allclose(reflect_point(m, h, [2.0, 1.0], x).coords, x, atol=1e-12)

    _, m, h = system("dihedral_101")
    y = line_quadric_intersect(m, h, [1.0, 0.0], [0.0, 1.0]).points[0]
    moved = reflect_point(m, h, [1.0, 0.0], y)
    assert np.linalg.norm(moved.coords - y.coords) > 1e-3
    assert abs(quadratic(m, moved.coords)) <= 1e-9


@pytest.mark.parametrize("name", ["a2_affine", "g444", "g2_oo11"])
def test_fixed_points_are_orthogonal_limit_roots(system, roots, name):
    _, m, h = system(name)
    table = roots(name, 4)
    points = e2_points(m, h, table)
    assert points
    for rho in table:
        for x in points:
            b = abs(float(rho.coords @ m.gram @ m.to_delta(x.coords)))
            moved = np.linalg.norm(reflect_point(m, h, rho, x).coords - x.coords)
            if b <= 1e-9:
                assert moved <= 1e-8
            elif b > 1e-6:
                assert moved > 1e-9


def test_directed_hausdorff():
    assert directed_hausdorff([[0.0, 0.0]], [[3.0, 4.0]]) == pytest.approx(5.0)
    a = [[0.0, 1.0], [1.0, 0.0]]
    assert directed_hausdorff(a, a) == 0.0
    with pytest.raises(EmptySet):
        directed_hausdorff([], a)


# ─── Isotropic cone samples ───────────────────────────────────────────────────

def test_conic_of_finite_system_is_empty(system):
    _, m, h = system("a2")
    with pytest.raises(EmptyQuadric):
        conic_sample(m, h, 50)


def test_conic_of_affine_system_is_radical(system):
    _, m, h = system("a2_affine")
    points = conic_sample(m, h, 50)
    assert len(points) == 1
    np.testing.assert_allclose(points[0].coords, [1 / 3, 1 / 3, 1 / 3], atol=1e-12)


def test_conic_samples_lie_on_quadric(system):
    _, m, h = system("g237")
    points = conic_sample(m, h, 200)
    assert len(points) > 100
    coords = _coords(points)
    q = np.einsum("ij,jk,ik->i", coords, m.gram, coords)
    assert np.abs(q).max() <= 1e-9
    np.testing.assert_allclose(coords.sum(axis=1), 1.0)


# ─── Orbits and faces ─────────────────────────────────────────────────────────

@pytest.mark.parametrize(
    "name, faces",
    [
        ("g533", ((0, 1, 2),)),
        ("g_oo_oo15_4", ((0, 1), (1, 2))),
    ],
)
def test_f0_generating_faces(system, name, faces):
    _, m, h = system(name)
    sample = f0_sample(m, h, orbit_length=2, samples_per_face=60)
    assert sample.experimental
    assert sample.generating_faces == faces
    assert sample.points


def test_parabolic_counterexample_orbit(system):
    _, m, h = system("cex5")
    word = (0, 1, 4, 3)
    gamma = np.eye(5)[2]

    p = orbit_limit_probe(m, h, word, gamma, 10**6)
    np.testing.assert_allclose(p.coords, [0.25, 0.25, 0.0, 0.25, 0.25], atol=1e-6)

    n = 40
    p40 = orbit_limit_probe(m, h, word, gamma, n)
    assert p40.coords[0] == pytest.approx(n * (n + 1) / (4 * n * n + 2 * n + 1), abs=1e-12)
    assert p40.coords[2] == pytest.approx(1 / (4 * n * n + 2 * n + 1), abs=1e-12)


def test_word_matrix_matches_letter_action(system):
    _, m, _ = system("g444")
    word = (0, 2, 1, 0, 2)
    M = word_matrix(m, word)
    v = np.array([0.3, 1.0, 2.0])
    np.testing.assert_allclose(M @ v, apply_word(m, word, v), atol=1e-12)
    # isometry of B with determinant (-1)^len(word)
    np.testing.assert_allclose(M.T @ m.form @ M, m.form, atol=1e-10)
    assert np.linalg.det(M) == pytest.approx(-1.0)
