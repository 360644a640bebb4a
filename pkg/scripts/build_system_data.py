"""
Regenerate the preset systems under data/systems/ from the table below.

Label 0 stands for m = infinity; overrides give B(alpha_i, alpha_j) <= -1
on infinity edges.

Usage:
  python scripts/build_system_data.py
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT))

from limitroots.models.system import CoxeterSpec  # noqa: E402

DATA_DIR = ROOT / "data" / "systems"

OO = 0


def _triangle(name: str, description: str, p: int, q: int, r: int, overrides=()) -> CoxeterSpec:
    return CoxeterSpec.triangle(
        p, q, r,
        name=name,
        description=description,
        b_overrides=[{"i": i, "j": j, "value": v} for i, j, v in overrides],
    )


def _complete(name: str, description: str, rank: int, label: int) -> CoxeterSpec:
    labels = [[1 if s == t else label for t in range(rank)] for s in range(rank)]
    return CoxeterSpec(name=name, description=description, rank=rank, labels=labels)


# ─── Preset table ─────────────────────────────────────────────────────────────

PRESETS = [
    CoxeterSpec(
        name="dihedral_affine",
        description="Infinite dihedral group, classical affine representation B(alpha, beta) = -1",
        rank=2, labels=[[1, OO], [OO, 1]],
    ),
    CoxeterSpec(
        name="dihedral_101",
        description="Infinite dihedral group, non-affine representation B(alpha, beta) = -1.01",
        rank=2, labels=[[1, OO], [OO, 1]],
        b_overrides=[{"i": 0, "j": 1, "value": -1.01}],
    ),
    CoxeterSpec(name="a2", description="Finite type A2", rank=2, labels=[[1, 3], [3, 1]]),
    _triangle("a2_affine", "Affine type A2-tilde, labels 3, 3, 3", 3, 3, 3),
    _triangle("b2_affine", "Affine type B2-tilde (C2-tilde), labels 4, 4, 2", 4, 4, 2),
    _triangle("g2_affine", "Affine type G2-tilde, labels 6, 3, 2", 6, 3, 2),
    _triangle("g533", "Hyperbolic triangle group with labels 5, 3, 3", 5, 3, 3),
    _triangle("g237", "Hyperbolic triangle group with labels 2, 3, 7", 2, 3, 7),
    _triangle("g444", "Hyperbolic triangle group with labels 4, 4, 4", 4, 4, 4),
    _triangle(
        "g2_oo11", "Labels 2, infinity(-1.1), infinity(-1.1)", 2, OO, OO,
        overrides=[(1, 2, -1.1), (0, 2, -1.1)],
    ),
    _triangle(
        "g_oo_oo15_4", "Labels infinity, infinity(-1.5), 4", OO, OO, 4,
        overrides=[(1, 2, -1.5)],
    ),
    _complete("k4_3", "Rank 4, complete Coxeter graph with labels 3", 4, 3),
    _complete("k4_oo", "Rank 4, complete Coxeter graph with labels infinity", 4, OO),
    CoxeterSpec(
        name="g4_sage_b",
        description="Rank 4: delta joined to alpha, beta, gamma by 4; gamma joined to alpha, beta by 3",
        rank=4,
        labels=[[1, 2, 3, 4], [2, 1, 3, 4], [3, 3, 1, 4], [4, 4, 4, 1]],
    ),
    CoxeterSpec(
        name="cex5",
        description=(
            "Rank 5 parabolic counterexample: alpha-beta and delta-epsilon infinite, "
            "beta-gamma-delta labels 3"
        ),
        rank=5,
        labels=[
            [1, OO, 2, 2, 2],
            [OO, 1, 3, 2, 2],
            [2, 3, 1, 3, 2],
            [2, 2, 3, 1, OO],
            [2, 2, 2, OO, 1],
        ],
    ),
]


def main() -> None:
    DATA_DIR.mkdir(parents=True, exist_ok=True)
    for spec in PRESETS:
        path = DATA_DIR / f"{spec.name}.json"
        path.write_text(spec.model_dump_json(indent=2) + "\n")
        print(f"Saved {spec.name} → {path}")
    print("Done.")


if __name__ == "__main__":
    main()
