import io
import json

import numpy as np
import pytest

from limitroots.config import settings
from limitroots.models.system import CoxeterSpec
from limitroots.services import CacheService, SystemService, export_service
from limitroots.services.coxeter import (
    LimitPoint,
    PairProvenance,
    UnknownSystem,
    WordProvenance,
    e2_points,
    enumerate_roots,
    level_counts,
)


# ─── Cache ────────────────────────────────────────────────────────────────────

def test_cache_round_trip_and_truncation(tmp_path, system):
    spec, m, _ = system("g533")
    cache = CacheService(str(tmp_path / "cache"))
    assert cache.get(spec, 4) is None

    table = enumerate_roots(m, 6)
    assert cache.set(spec, table)
    assert cache.exists(spec, 6)

    served = cache.get(spec, 4)
    assert served.max_depth == 4
    assert level_counts(served) == level_counts(table)[:4]
    assert cache.get(spec, 7) is None


def test_cache_key_ignores_name(system):
    spec, _, _ = system("g533")
    renamed = spec.model_copy(update={"name": "other", "description": "same labels"})
    assert CacheService.digest(renamed) == CacheService.digest(spec)
    assert CacheService.digest(CoxeterSpec.triangle(5, 3, 4)) != CacheService.digest(spec)


def test_cache_key_tracks_tolerance(tmp_path, system):
    spec, m, _ = system("a2_affine")
    cache = CacheService(str(tmp_path))
    before = CacheService.digest(spec)
    cache.set(spec, enumerate_roots(m, 3))

    settings.CLASS_TOL = 1e-7
    assert CacheService.digest(spec) != before
    assert cache.get(spec, 3) is None


def test_cache_skips_corrupt_files(tmp_path, system):
    spec, m, _ = system("a2")
    cache = CacheService(str(tmp_path))
    folder = tmp_path / CacheService.digest(spec)
    folder.mkdir()
    (folder / "depth-5.json").write_text("{not json")
    assert cache.get(spec, 3) is None

    cache.set(spec, enumerate_roots(m, 3))
    assert cache.clear(spec)
    assert not cache.exists(spec, 3)


def test_service_uses_cache(tmp_path, system):
    spec, m, _ = system("g444")
    service = SystemService(cache_service=CacheService(str(tmp_path)))
    first = service.roots(spec, m, 5)
    assert service.cache_service.exists(spec, 5)
    second = service.roots(spec, m, 5)
    np.testing.assert_allclose(second.coords_matrix(), first.coords_matrix())


# ─── Systems ──────────────────────────────────────────────────────────────────

def test_presets(service):
    names = service.list_presets()
    for name in ("a2", "dihedral_affine", "g533", "g237", "cex5", "k4_oo"):
        assert name in names


def test_load_by_name_and_path(service, tmp_path):
    assert service.load("g533").labels[0][1] == 5
    assert service.load("g533.json").name == "g533"

    path = tmp_path / "custom.json"
    path.write_text(json.dumps({"rank": 2, "labels": [[1, 4], [4, 1]]}))
    assert service.load(str(path)).name == "custom"

    with pytest.raises(UnknownSystem):
        service.load("nowhere")


def test_hyperplane_parsing(service, system):
    _, m, _ = system("g533")
    np.testing.assert_allclose(service.hyperplane(m).functional, [1.0, 1.0, 1.0])
    np.testing.assert_allclose(service.hyperplane(m, "custom:1, 2, 3").functional, [1.0, 2.0, 3.0])
    with pytest.raises(ValueError):
        service.hyperplane(m, "custom:1,x,3")
    with pytest.raises(ValueError):
        service.hyperplane(m, "tilted")


def test_missing_systems_dir(tmp_path):
    assert SystemService(systems_dir=str(tmp_path / "missing")).list_presets() == []


# ─── Export ───────────────────────────────────────────────────────────────────

def test_roots_csv(system, roots):
    _, m, _ = system("a2_affine")
    table = roots("a2_affine", 4)
    stream = io.StringIO()
    assert export_service.write_roots_csv(m, table, stream) == len(table)
    lines = stream.getvalue().splitlines()
    assert lines[0] == "index,depth,c0,c1,c2,l1,q_residual"
    assert len(lines) == len(table) + 1


def test_limit_export_provenance(system, roots):
    _, m, h = system("g533")
    points = e2_points(m, h, roots("g533", 4))
    moved = LimitPoint(points[0].coords, WordProvenance((0, 1), points[0].provenance))
    export = export_service.limit_export(m, h, [points[0], moved], "e2", 4, system="g533")
    first, second = export.points
    assert isinstance(points[0].provenance, PairProvenance)
    assert first.source == "pair"
    assert (first.root_a, first.root_b) == (points[0].provenance.root_a, points[0].provenance.root_b)
    assert second.source == "word"
    assert second.word == [0, 1]
    assert second.root_a == first.root_a
    assert export.count == 2


def test_empty_limit_export(system):
    _, m, h = system("a2")
    export = export_service.limit_export(m, h, [], "e2", 3)
    assert export.count == 0
    stream = io.StringIO()
    assert export_service.write_points_csv(export, stream) == 0
    assert stream.getvalue().strip() == "mode,b0,b1,q,source"


def test_normalized_csv(system, roots):
    _, m, h = system("g533")
    table = roots("g533", 5)
    stream = io.StringIO()
    assert export_service.write_normalized_csv(m, h, table, stream) == len(table)
    lines = stream.getvalue().splitlines()
    assert lines[0] == "index,depth,b0,b1,b2,abs_q"
    for line, root in zip(lines[1:], table.up_to()):
        fields = line.split(",")
        assert int(fields[0]) == root.index
        bary = np.array([float(v) for v in fields[2:5]])
        assert bary.sum() == pytest.approx(1.0)
        assert bary.min() >= -1e-10
        assert float(fields[5]) * root.l1 ** 2 == pytest.approx(1.0, rel=1e-9)
