from .cache_service import CacheService
from .system_service import SystemService
from . import export_service

__all__ = ["CacheService", "SystemService", "export_service"]
