from pydantic import BaseModel
from typing import List, Literal, Optional


class Discrepancy(BaseModel):
    kind: Literal["missing", "weight", "witness"]
    simplex: List[int]
    detail: str
    delta: Optional[float] = None


class ComparisonReport(BaseModel):
    identical: bool
    counts_a: List[int]
    counts_b: List[int]
    discrepancies: List[Discrepancy]
    max_weight_delta: float = 0.0
    max_witness_delta: float = 0.0

    def diff_lines(self, limit: int = 10) -> List[str]:
        """Human-readable diff: the first `limit` discrepancies, then a remainder count."""
        lines = [f"{d.kind}: {d.simplex} {d.detail}" for d in self.discrepancies[:limit]]
        rest = len(self.discrepancies) - limit
        if rest > 0:
            lines.append(f"... {rest} more")
        return lines


class ComplexSummary(BaseModel):
    sizes: List[int]
    euler_characteristic: int
    min_weight: Optional[float] = None
    max_weight: Optional[float] = None
    ambient_dim: Optional[int] = None
    a1: Optional[float] = None
    star_sizes: Optional[List[int]] = None
