import json
import logging
from pathlib import Path
from typing import List, Optional

from ..config import settings
from ..models.system import CoxeterSpec
from .cache_service import CacheService
from .coxeter.bilinear_core import GeometricModule, build_module
from .coxeter.errors import UnknownSystem
from .coxeter.projective_normalization import (
    TransverseHyperplane,
    custom_hyperplane,
    default_hyperplane,
)
from .coxeter.root_enumeration import RootTable, enumerate_roots

logger = logging.getLogger(__name__)


class SystemService:
    """Loads Coxeter systems, builds their modules and serves root tables."""

    def __init__(
        self,
        cache_service: Optional[CacheService] = None,
        systems_dir: Optional[str] = None,
    ):
        self.cache_service = cache_service
        self.systems_dir = Path(systems_dir or settings.SYSTEMS_DIR)

    @classmethod
    def from_settings(cls) -> "SystemService":
        cache = CacheService(settings.CACHE_DIR) if settings.CACHE_DIR else None
        return cls(cache_service=cache)

    def list_presets(self) -> List[str]:
        """Names of the bundled preset systems."""
        if not self.systems_dir.is_dir():
            return []
        return sorted(p.stem for p in self.systems_dir.glob("*.json"))

    def load(self, ref: str) -> CoxeterSpec:
        """Load a spec from a JSON file path, falling back to a preset name.

        Args:
            ref: Path to a spec file, or a preset name with or without ".json"

        Raises:
            UnknownSystem: neither a readable file nor a preset
            pydantic.ValidationError: the JSON does not describe a valid system
        """
        path = Path(ref)
        if not path.is_file():
            path = self.systems_dir / f"{Path(ref).stem}.json"
        if not path.is_file():
            raise UnknownSystem(
                f"no spec file or preset named '{ref}' "
                f"(presets: {', '.join(self.list_presets()) or 'none'})"
            )

        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
        spec = CoxeterSpec.model_validate(data)
        if spec.name is None:
            spec = spec.model_copy(update={"name": path.stem})
        logger.debug("Loaded system '%s' from %s", spec.name, path)
        return spec

    def build(self, spec: CoxeterSpec) -> GeometricModule:
        return build_module(spec)

    def hyperplane(self, m: GeometricModule, text: str = "default") -> TransverseHyperplane:
        """Parse `default` or `custom:<comma separated functional>`."""
        if text == "default":
            return default_hyperplane(m)
        if text.startswith("custom:"):
            try:
                values = [float(v) for v in text[len("custom:"):].split(",") if v.strip()]
            except ValueError as e:
                raise ValueError(f"bad hyperplane functional '{text}'") from e
            return custom_hyperplane(m, values)
        raise ValueError(f"hyperplane must be 'default' or 'custom:<csv>', got '{text}'")

    def roots(self, spec: CoxeterSpec, m: GeometricModule, max_depth: int) -> RootTable:
        """Enumerated positive roots of depth <= max_depth, cached when configured."""
        if self.cache_service is not None:
            table = self.cache_service.get(spec, max_depth)
            if table is not None:
                return table

        table = enumerate_roots(m, max_depth)
        if self.cache_service is not None:
            self.cache_service.set(spec, table)
        return table
