from pathlib import Path

import numpy as np
import pytest

from limitroots.config import settings
from limitroots.services.coxeter import default_hyperplane, enumerate_roots
from limitroots.services.system_service import SystemService

SYSTEMS_DIR = Path(__file__).resolve().parent.parent / "data" / "systems"

GOLDEN = (1.0 + np.sqrt(5.0)) / 2.0


@pytest.fixture(autouse=True)
def _restore_settings():
    saved = (settings.CLASS_TOL, settings.MAX_COORD)
    yield
    settings.CLASS_TOL, settings.MAX_COORD = saved


@pytest.fixture(scope="session")
def service():
    return SystemService(systems_dir=str(SYSTEMS_DIR))


@pytest.fixture(scope="session")
def system(service):
    """system(name) -> (spec, module, default hyperplane), memoized."""
    loaded = {}

    def _load(name):
        if name not in loaded:
            spec = service.load(name)
            m = service.build(spec)
            loaded[name] = (spec, m, default_hyperplane(m))
        return loaded[name]

    return _load


@pytest.fixture(scope="session")
def roots(system):
    """roots(name, depth) -> RootTable, memoized."""
    tables = {}

    def _roots(name, depth):
        if (name, depth) not in tables:
            tables[(name, depth)] = enumerate_roots(system(name)[1], depth)
        return tables[(name, depth)]

    return _roots


@pytest.fixture
def find_root():
    """Stored root nearest to the given coordinates (asserted to match)."""

    def _find(table, coords):
        target = np.asarray(coords, dtype=float)
        matrix = table.coords_matrix()
        k = int(np.argmin(np.linalg.norm(matrix - target, axis=1)))
        assert np.linalg.norm(matrix[k] - target) < 1e-9
        return table.up_to()[k]

    return _find
