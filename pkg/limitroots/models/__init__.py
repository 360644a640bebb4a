from .system import INFINITY_LABEL, BOverride, CoxeterSpec
from .reports import (
    AuditReport,
    ClassifyReport,
    ComponentReport,
    LimitExport,
    LimitPointRecord,
    SuiteResult,
)

__all__ = [
    "INFINITY_LABEL", "BOverride", "CoxeterSpec",
    "AuditReport", "ClassifyReport", "ComponentReport",
    "LimitExport", "LimitPointRecord", "SuiteResult",
]
