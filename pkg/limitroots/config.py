import os
import logging
from pathlib import Path
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

logger = logging.getLogger(__name__)

_REPO_ROOT = Path(__file__).resolve().parent.parent


class Settings:
    """Numerical tolerances, defaults and paths."""

    # Classification tolerance: "is this value -1? 0? -cos(pi/m)?"
    CLASS_TOL: float = float(os.getenv("LIMITROOTS_CLASS_TOL", "1e-9"))

    # Eigenvalues below EIGEN_REL_TOL * max|eigenvalue| count as zero
    EIGEN_REL_TOL: float = float(os.getenv("LIMITROOTS_EIGEN_REL_TOL", "1e-8"))

    # Root dedup grid and limit point dedup radius
    DEDUP_QUANTUM: float = float(os.getenv("LIMITROOTS_DEDUP_QUANTUM", "1e-8"))

    # Enumeration gives up past this coordinate magnitude
    MAX_COORD: float = float(os.getenv("LIMITROOTS_MAX_COORD", "1e12"))

    # Strict feasibility margin for make_transverse
    TRANSVERSE_MARGIN: float = float(os.getenv("LIMITROOTS_TRANSVERSE_MARGIN", "1e-6"))

    # Rendering
    CONIC_SAMPLES: int = int(os.getenv("LIMITROOTS_CONIC_SAMPLES", "720"))

    # CLI defaults
    DEFAULT_DEPTH: int = int(os.getenv("LIMITROOTS_DEFAULT_DEPTH", "8"))
    LOG_LEVEL: str = os.getenv("LIMITROOTS_LOG_LEVEL", "WARNING")

    # Cache settings, empty string disables the enumeration cache
    CACHE_DIR: str = os.getenv("LIMITROOTS_CACHE_DIR", "")

    # Named preset systems
    SYSTEMS_DIR: str = os.getenv(
        "LIMITROOTS_SYSTEMS_DIR", str(_REPO_ROOT / "data" / "systems")
    )

    def validate(self) -> None:
        """Validate numeric settings at startup. Raises on misconfiguration."""
        for name in ("CLASS_TOL", "EIGEN_REL_TOL", "DEDUP_QUANTUM", "TRANSVERSE_MARGIN"):
            value = getattr(self, name)
            if not 0.0 < value < 1e-3:
                raise ValueError(f"{name} must lie in (0, 1e-3), got {value!r}")

        if self.MAX_COORD <= 1.0:
            raise ValueError(f"MAX_COORD must exceed 1, got {self.MAX_COORD!r}")

        if self.CONIC_SAMPLES < 3:
            raise ValueError(f"CONIC_SAMPLES must be at least 3, got {self.CONIC_SAMPLES}")

        if self.DEFAULT_DEPTH < 1:
            raise ValueError(f"DEFAULT_DEPTH must be positive, got {self.DEFAULT_DEPTH}")

        if self.CLASS_TOL > self.DEDUP_QUANTUM:
            logger.warning(
                "CLASS_TOL (%g) is looser than DEDUP_QUANTUM (%g); distinct roots may merge",
                self.CLASS_TOL, self.DEDUP_QUANTUM,
            )


settings = Settings()
settings.validate()
