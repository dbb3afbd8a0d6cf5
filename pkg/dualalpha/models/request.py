# dualalpha/models/request.py
from __future__ import annotations

from pathlib import Path
from typing import Literal, Optional

from pydantic import BaseModel, Field, field_validator, model_validator

from ..config import settings
from ..sparse import is_prime


class Tolerances(BaseModel):
    """
    Tolerance record shared by the dual solver, the alpha builder and the oracle.

    All thresholds are absolute-plus-relative:
      - eps_c(c1)        bound check on the dual objective
      - eps_pivot(diag)  pivot below which an entering constraint is treated as dependent
      - eps_opt(scale)   dual gradient size below which a multiplier is considered optimal,
                         scale = max(max|U|, max diag B)
      - eps_feas         how far below zero a sign-constrained multiplier may round
                         (relative to 1 + max|lambda|) before the solve is rejected
    """
    eps_c_rel: float = Field(default_factory=lambda: settings.EPS_C_REL, ge=0.0)
    eps_feas: float = Field(default_factory=lambda: settings.EPS_FEAS, ge=0.0)
    eps_pivot_rel: float = Field(default_factory=lambda: settings.EPS_PIVOT_REL, gt=0.0)
    eps_opt_rel: float = Field(default_factory=lambda: settings.EPS_OPT_REL, gt=0.0)

    model_config = {"frozen": True}

    def eps_c(self, c1: float) -> float:
        return self.eps_c_rel * (1.0 + abs(c1))

    def eps_pivot(self, max_diag: float) -> float:
        return self.eps_pivot_rel * max_diag

    def eps_opt(self, scale: float) -> float:
        return self.eps_opt_rel * scale


class BuildParams(BaseModel):
    """
    Inputs of the alpha complex build besides the point set.

    `a1` overrides the cutoff stored on the WeightedPoints when given.
    """
    a1: Optional[float] = Field(default=None, description="Maximum allowable power (power units).")
    d: int = Field(..., ge=0, description="Dimension of output.")
    tolerances: Tolerances = Field(default_factory=Tolerances)
    threads: int = Field(default_factory=lambda: max(1, settings.THREADS), ge=1)
    progress: bool = Field(default_factory=lambda: settings.SHOW_PROGRESS)
    graph_method: Literal["pairwise", "kdtree"] = Field(default_factory=lambda: settings.GRAPH_METHOD)
    prescreen: bool = Field(
        default=True,
        description="Reject candidates whose single-constraint lower bound already exceeds c1.",
    )
    constraints: Literal["neighbors", "all"] = Field(
        default="neighbors",
        description="Inequalities per base vertex: its Čech neighbors only, or every other point.",
    )


class RunConfig(BaseModel):
    """
    Validated command-line run: exactly one of alpha/radius, and radius only for unweighted input.
    """
    points: Path
    weights: Optional[Path] = None
    alpha: Optional[float] = None
    radius: Optional[float] = Field(default=None, ge=0.0)
    dim: int = Field(default=2, ge=0)
    prime: int = Field(default_factory=lambda: settings.DEFAULT_PRIME, ge=2)
    out: Optional[Path] = None
    threads: int = Field(default_factory=lambda: max(1, settings.THREADS), ge=1)
    eps_c_rel: Optional[float] = Field(default=None, ge=0.0)
    eps_pivot_rel: Optional[float] = Field(default=None, gt=0.0)

    @field_validator("prime")
    @classmethod
    def _prime_modulus(cls, v: int) -> int:
        if not is_prime(v):
            raise ValueError(f"--prime must be a prime number, got {v}")
        return v

    @model_validator(mode="after")
    def _one_cutoff(self) -> "RunConfig":
        if (self.alpha is None) == (self.radius is None):
            raise ValueError("exactly one of --alpha and --radius is required")
        if self.radius is not None and self.weights is not None:
            raise ValueError("--radius is only defined for unweighted input; use --alpha with --weights")
        return self

    @property
    def a1(self) -> float:
        """Cutoff in power units; a radius r means a1 = r^2."""
        if self.alpha is not None:
            return float(self.alpha)
        return float(self.radius) ** 2

    def tolerances(self) -> Tolerances:
        overrides = {}
        if self.eps_c_rel is not None:
            overrides["eps_c_rel"] = self.eps_c_rel
        if self.eps_pivot_rel is not None:
            overrides["eps_pivot_rel"] = self.eps_pivot_rel
        return Tolerances(**overrides)

    def build_params(self, d: Optional[int] = None) -> BuildParams:
        return BuildParams(
            a1=self.a1,
            d=self.dim if d is None else d,
            tolerances=self.tolerances(),
            threads=self.threads,
        )
