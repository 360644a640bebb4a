from typing import List, Optional
from pydantic import BaseModel, Field, model_validator

# Label value standing for m = infinity in the JSON wire format
INFINITY_LABEL = 0


class BOverride(BaseModel):
    """Non-classical value of B(alpha_i, alpha_j) on an infinity-labeled edge."""
    i: int = Field(ge=0)
    j: int = Field(ge=0)
    value: float = Field(le=-1.0, description="B(alpha_i, alpha_j), at most -1")


class CoxeterSpec(BaseModel):
    """Coxeter matrix plus the B overrides of a based root system.

    labels[s][t] is m_{s,t}: 1 on the diagonal, >= 2 off it, 0 for infinity.
    """

    name: Optional[str] = None
    description: Optional[str] = None
    rank: int = Field(ge=1)
    labels: List[List[int]]
    b_overrides: List[BOverride] = Field(default_factory=list)

    @model_validator(mode="after")
    def _check_labels(self) -> "CoxeterSpec":
        n = self.rank
        if len(self.labels) != n or any(len(row) != n for row in self.labels):
            raise ValueError(f"labels must be a {n}x{n} matrix")

        for s in range(n):
            if self.labels[s][s] != 1:
                raise ValueError(f"labels[{s}][{s}] must be 1, got {self.labels[s][s]}")
            for t in range(s + 1, n):
                if self.labels[s][t] != self.labels[t][s]:
                    raise ValueError(f"labels are not symmetric at ({s}, {t})")
                m = self.labels[s][t]
                if m != INFINITY_LABEL and m < 2:
                    raise ValueError(
                        f"labels[{s}][{t}] must be >= 2 or {INFINITY_LABEL} (infinity), got {m}"
                    )

        seen = set()
        for ov in self.b_overrides:
            if ov.i >= n or ov.j >= n or ov.i == ov.j:
                raise ValueError(f"override ({ov.i}, {ov.j}) is not an off-diagonal pair")
            if self.labels[ov.i][ov.j] != INFINITY_LABEL:
                raise ValueError(
                    f"override ({ov.i}, {ov.j}) targets finite label {self.labels[ov.i][ov.j]}"
                )
            pair = (min(ov.i, ov.j), max(ov.i, ov.j))
            if pair in seen:
                raise ValueError(f"duplicate override for pair {pair}")
            seen.add(pair)
        return self

    def override_for(self, s: int, t: int) -> Optional[float]:
        """Return the override value for edge {s, t}, if any."""
        for ov in self.b_overrides:
            if {ov.i, ov.j} == {s, t}:
                return ov.value
        return None

    @classmethod
    def triangle(cls, p: int, q: int, r: int, **kwargs) -> "CoxeterSpec":
        """Rank 3 system with m_01 = p, m_12 = q, m_02 = r."""
        labels = [[1, p, r], [p, 1, q], [r, q, 1]]
        return cls(rank=3, labels=labels, **kwargs)
