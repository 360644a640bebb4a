import numpy as np
import pytest
from pydantic import ValidationError

from limitroots.models.system import CoxeterSpec
from limitroots.services.coxeter import (
    DimensionMismatch,
    FormType,
    GeometricModule,
    InvalidModule,
    IsotropicMirror,
    bilinear,
    build_module,
    components,
    form_type,
    quadratic,
    radical_cone_trivial,
    reflect,
    signature,
)


def test_finite_labels_give_cosines():
    m = build_module(CoxeterSpec.triangle(3, 4, 5))
    assert m.gram[0, 1] == pytest.approx(-0.5, abs=1e-15)
    assert m.gram[1, 2] == pytest.approx(-np.sqrt(2) / 2, abs=1e-15)
    assert m.gram[0, 2] == pytest.approx(-np.cos(np.pi / 5), abs=1e-15)
    np.testing.assert_allclose(np.diag(m.gram), 1.0)


def test_infinite_label_default_and_override(system):
    _, affine, _ = system("dihedral_affine")
    _, non_affine, _ = system("dihedral_101")
    assert affine.gram[0, 1] == -1.0
    assert non_affine.gram[0, 1] == pytest.approx(-1.01)


def test_override_close_to_minus_one_snaps():
    spec = CoxeterSpec(rank=2, labels=[[1, 0], [0, 1]], b_overrides=[{"i": 0, "j": 1, "value": -1.0 - 1e-12}])
    assert build_module(spec).gram[0, 1] == -1.0


def test_spec_validation_errors():
    with pytest.raises(ValidationError):
        CoxeterSpec(rank=2, labels=[[1, 3], [4, 1]])
    with pytest.raises(ValidationError):
        CoxeterSpec(rank=2, labels=[[1, 1], [1, 1]])
    with pytest.raises(ValidationError):
        CoxeterSpec(rank=2, labels=[[1, 3], [3, 1]], b_overrides=[{"i": 0, "j": 1, "value": -2.0}])
    with pytest.raises(ValidationError):
        CoxeterSpec(rank=2, labels=[[1, 0], [0, 1]], b_overrides=[{"i": 0, "j": 1, "value": -0.5}])


def test_module_axioms():
    with pytest.raises(InvalidModule):
        GeometricModule.from_gram([[1.0, -0.6], [-0.6, 1.0]])
    with pytest.raises(InvalidModule):
        GeometricModule.from_gram([[2.0, 0.0], [0.0, 1.0]])
    # alpha + beta = 0
    with pytest.raises(InvalidModule):
        GeometricModule(simple_roots=[[1.0, 0.0], [-1.0, 0.0]], form=np.eye(2))


def test_reflection(system):
    _, m, _ = system("a2")
    alpha, beta = m.simple_root(0), m.simple_root(1)
    np.testing.assert_allclose(reflect(m, alpha, alpha), -alpha)
    np.testing.assert_allclose(reflect(m, alpha, beta), [1.0, 1.0])
    image = reflect(m, alpha, beta)
    assert quadratic(m, image) == pytest.approx(1.0)


@pytest.mark.parametrize("name", ["g237", "k4_oo", "dihedral_101"])
def test_reflection_is_b_isometric_involution(system, name):
    _, m, _ = system(name)
    rng = np.random.default_rng(3)
    checked = 0
    while checked < 50:
        r, u, v = rng.normal(size=(3, m.dim))
        if abs(quadratic(m, r)) < 0.1:
            continue
        np.testing.assert_allclose(reflect(m, r, reflect(m, r, v)), v, atol=1e-10)
        assert bilinear(m, reflect(m, r, u), reflect(m, r, v)) == pytest.approx(bilinear(m, u, v), abs=1e-10)
        checked += 1


def test_isotropic_mirror(system):
    _, m, _ = system("dihedral_affine")
    with pytest.raises(IsotropicMirror):
        reflect(m, [1.0, 1.0], [1.0, 0.0])


def test_dimension_mismatch(system):
    _, m, _ = system("a2")
    with pytest.raises(DimensionMismatch):
        bilinear(m, [1.0, 0.0, 0.0], [1.0, 0.0])
    with pytest.raises(ValueError):
        bilinear(m, [1.0], [1.0, 0.0])


def test_signature_affine_a2(system):
    _, m, _ = system("a2_affine")
    sig = signature(m)
    assert sig.as_tuple() == (2, 0, 1)
    v = sig.radical_basis[0]
    np.testing.assert_allclose(v / v.sum(), [1 / 3, 1 / 3, 1 / 3], atol=1e-12)
    assert not radical_cone_trivial(m)
    assert form_type(m) is FormType.AFFINE


def test_signature_hyperbolic_237(system):
    _, m, _ = system("g237")
    assert signature(m).as_tuple() == (2, 1, 0)
    assert radical_cone_trivial(m)
    assert form_type(m) is FormType.HYPERBOLIC


@pytest.mark.parametrize(
    "name, expected",
    [
        ("a2", FormType.FINITE),
        ("dihedral_affine", FormType.AFFINE),
        ("b2_affine", FormType.AFFINE),
        ("g2_affine", FormType.AFFINE),
        ("g533", FormType.HYPERBOLIC),
        ("k4_3", FormType.HYPERBOLIC),
        ("k4_oo", FormType.HYPERBOLIC),
    ],
)
def test_form_types(system, name, expected):
    _, m, _ = system(name)
    assert form_type(m) is expected


def test_components():
    m = build_module(CoxeterSpec(rank=3, labels=[[1, 2, 2], [2, 1, 0], [2, 0, 1]]))
    assert components(m) == [(0,), (1, 2)]


def test_components_irreducible(system):
    _, m, _ = system("cex5")
    assert components(m) == [(0, 1, 2, 3, 4)]
