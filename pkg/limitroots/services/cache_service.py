import json
import hashlib
import logging
import shutil
from pathlib import Path
from typing import Optional

from ..config import settings
from ..models.system import CoxeterSpec
from .coxeter.root_enumeration import RootTable

logger = logging.getLogger(__name__)


class CacheService:
    """Service for managing the local file-based root table cache."""

    def __init__(self, cache_dir: str):
        """Initialize cache service with specified directory."""
        self.cache_dir = Path(cache_dir)
        try:
            self.cache_dir.mkdir(parents=True, exist_ok=True)
        except OSError:
            logger.warning("Cache directory %s is not writable", self.cache_dir)

    @staticmethod
    def digest(spec: CoxeterSpec) -> str:
        """Stable key for a system under the current tolerances, name ignored."""
        payload = spec.model_dump(include={"rank", "labels", "b_overrides"})
        payload["tolerances"] = [settings.CLASS_TOL, settings.DEDUP_QUANTUM]
        text = json.dumps(payload, sort_keys=True)
        return hashlib.sha256(text.encode("utf-8")).hexdigest()[:16]

    def _get_cache_path(self, spec: CoxeterSpec, depth: int) -> Path:
        """Get cache file path for a system at a given depth.

        Args:
            spec: The Coxeter system
            depth: Enumeration depth

        Returns:
            Path to cache file
        """
        return self.cache_dir / self.digest(spec) / f"depth-{depth}.json"

    def get(self, spec: CoxeterSpec, depth: int) -> Optional[RootTable]:
        """Retrieve a table of at least the given depth, truncated to it.

        Args:
            spec: The Coxeter system
            depth: Requested enumeration depth

        Returns:
            RootTable if a deep enough entry exists, None otherwise
        """
        folder = self.cache_dir / self.digest(spec)
        if not folder.is_dir():
            return None

        cached = []
        for path in folder.glob("depth-*.json"):
            try:
                cached.append((int(path.stem.split("-", 1)[1]), path))
            except ValueError:
                continue
        candidates = sorted(d for d in cached if d[0] >= depth)
        for stored_depth, path in candidates:
            try:
                with open(path, "r", encoding="utf-8") as f:
                    table = RootTable.from_dict(json.load(f))
            except (json.JSONDecodeError, OSError, KeyError, ValueError) as e:
                logger.warning("Ignoring unreadable cache file %s: %s", path, e)
                continue
            logger.debug("Cache hit: depth %d served from depth %d", depth, stored_depth)
            return table if stored_depth == depth else table.truncated(depth)
        return None

    def set(self, spec: CoxeterSpec, table: RootTable) -> bool:
        """Store a table under its own depth.

        Returns:
            True if successful, False otherwise
        """
        cache_path = self._get_cache_path(spec, table.max_depth)
        try:
            cache_path.parent.mkdir(parents=True, exist_ok=True)
            with open(cache_path, "w", encoding="utf-8") as f:
                json.dump(table.to_dict(), f)
            return True
        except (OSError, TypeError) as e:
            logger.warning("Error writing cache file %s: %s", cache_path, e)
            return False

    def exists(self, spec: CoxeterSpec, depth: int) -> bool:
        return self._get_cache_path(spec, depth).exists()

    def clear(self, spec: Optional[CoxeterSpec] = None) -> bool:
        """Clear cache for one system or the entire cache.

        Returns:
            True if successful, False otherwise
        """
        target = self.cache_dir / self.digest(spec) if spec is not None else self.cache_dir
        if not target.exists():
            return True
        try:
            shutil.rmtree(target)
            self.cache_dir.mkdir(parents=True, exist_ok=True)
            return True
        except OSError as e:
            logger.warning("Error clearing cache %s: %s", target, e)
            return False
