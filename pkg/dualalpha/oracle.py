"""
Reference implementations used to certify the dual pipeline on small inputs.

`primal_enumerate` solves

    min 1/2 |y - x|^2   s.t.  A_i y = V_i (i in J),  A_i y <= V_i (i not in J)

by walking active sets T = J + S in increasing index order. At each node the
equality-constrained minimiser is the minimum-norm projection of x onto
{A_T y = V_T}; the first node whose projection satisfies every inequality is the
optimum of its subtree. Subtrees are cut when the system is inconsistent, when the
projection is already a single point, or when its objective exceeds the cutoff
(the objective only grows as T grows).

`brute_alpha` runs that solver for every vertex subset of size <= d + 1 with
constraints from all other points and no graph or face pruning.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, List, Optional, Tuple

import numpy as np
from scipy.optimize import linprog

from .cech import WeightedPoints
from .complex import FilteredComplex, WitnessMap
from .config import settings
from .models.request import Tolerances
from .models.response import ComparisonReport, Discrepancy
from .utils.metrics import time_block

log = logging.getLogger(__name__)

FEAS_REL = 1e-10


class OracleSizeError(ValueError):
    pass


class OracleConsistencyError(RuntimeError):
    pass


@dataclass(frozen=True)
class PrimalProblem:
    x: np.ndarray
    A: np.ndarray
    V: np.ndarray
    J: Tuple[int, ...] = ()

    @classmethod
    def create(cls, x, A, V, J: Iterable[int] = ()) -> "PrimalProblem":
        x = np.asarray(x, dtype=float).ravel()
        A = np.asarray(A, dtype=float).reshape(-1, x.shape[0])
        V = np.asarray(V, dtype=float).ravel()
        J = tuple(sorted(set(int(j) for j in J)))
        if A.shape[0] != V.shape[0]:
            raise ValueError(f"A has {A.shape[0]} rows but V has {V.shape[0]} entries")
        if J and not (0 <= J[0] and J[-1] < A.shape[0]):
            raise ValueError(f"equality indices {J} out of range 0..{A.shape[0] - 1}")
        return cls(x, A, V, J)

    @classmethod
    def for_simplex(cls, points: WeightedPoints, sigma: Tuple[int, ...]) -> "PrimalProblem":
        """
        Base x = sigma[0]; one row per other point z of S, A_z = z - x and
        V_z = (|z|^2 - |x|^2 - p(z) + p(x)) / 2; equalities on sigma's other vertices.
        """
        base = sigma[0]
        others = [z for z in range(points.n_points) if z != base]
        x = points.coords[base]
        Z = points.coords[others]
        A = Z - x
        V = 0.5 * (np.einsum("ij,ij->i", Z, Z) - x @ x - points.power[others] + points.power[base])
        pos = {z: i for i, z in enumerate(others)}
        return cls.create(x, A, V, [pos[v] for v in sigma[1:]])

    @property
    def n(self) -> int:
        return int(self.A.shape[0])

    @property
    def m(self) -> int:
        return int(self.x.shape[0])


@dataclass
class PrimalResult:
    y: Optional[np.ndarray]
    cstar: float
    active: Tuple[int, ...] = ()
    nodes: int = 0

    @property
    def feasible(self) -> bool:
        return self.y is not None and math.isfinite(self.cstar)


@dataclass
class _Search:
    problem: PrimalProblem
    cutoff: float
    best: Optional[PrimalResult] = None
    nodes: int = 0
    free: List[int] = field(default_factory=list)

    def __post_init__(self):
        p = self.problem
        self.free = [i for i in range(p.n) if i not in set(p.J)]
        rows = np.linalg.norm(p.A, axis=1) if p.n else np.zeros(0)
        self.scale = 1.0 + (float(np.max(np.abs(p.V))) if p.n else 0.0) + (
            float(rows.max()) * float(np.linalg.norm(p.x)) if p.n else 0.0
        )

    def project(self, T: Tuple[int, ...]):
        p = self.problem
        if not T:
            return p.x.copy(), 0
        A_T = p.A[list(T)]
        rhs = p.V[list(T)] - A_T @ p.x
        step, _, rank, _ = np.linalg.lstsq(A_T, rhs, rcond=None)
        y = p.x + step
        if np.max(np.abs(A_T @ y - p.V[list(T)])) > FEAS_REL * self.scale:
            return None, rank
        return y, rank

    def feasible(self, y: np.ndarray, T: Tuple[int, ...]) -> bool:
        p = self.problem
        rest = [i for i in self.free if i not in T]
        if not rest:
            return True
        return bool(np.all(p.A[rest] @ y - p.V[rest] <= FEAS_REL * self.scale))

    def visit(self, extra: Tuple[int, ...], start: int) -> None:
        self.nodes += 1
        T = tuple(sorted(self.problem.J + extra))
        y, rank = self.project(T)
        if y is None:
            return
        c = 0.5 * float((y - self.problem.x) @ (y - self.problem.x))
        if c > self.cutoff:
            return
        if self.feasible(y, T):
            if self.best is None or c < self.best.cstar:
                self.best = PrimalResult(y=y, cstar=c, active=T)
            return
        if rank >= self.problem.m:
            return
        for k in range(start, len(self.free)):
            self.visit(extra + (self.free[k],), k + 1)


def primal_enumerate(problem: PrimalProblem, cutoff: float = math.inf) -> PrimalResult:
    """
    Exact primal optimum by active-set enumeration; c* = inf when infeasible or
    when the optimum exceeds `cutoff`. With no cutoff, infeasibility is confirmed
    by a linear-programming feasibility check over all constraints.
    """
    if problem.n > settings.PRIMAL_MAX_CONSTRAINTS:
        raise OracleSizeError(
            f"{problem.n} constraints exceed the enumeration cap of {settings.PRIMAL_MAX_CONSTRAINTS}"
        )
    search = _Search(problem, cutoff)
    search.visit((), 0)
    if search.best is not None:
        search.best.nodes = search.nodes
        return search.best

    if math.isinf(cutoff) and problem.n:
        if _lp_feasible(problem):
            raise OracleConsistencyError("enumeration found no feasible point but the constraints are feasible")
    return PrimalResult(y=None, cstar=math.inf, nodes=search.nodes)


def _lp_feasible(problem: PrimalProblem) -> bool:
    J = list(problem.J)
    free = [i for i in range(problem.n) if i not in set(J)]
    res = linprog(
        c=np.zeros(problem.m),
        A_ub=problem.A[free] if free else None,
        b_ub=problem.V[free] if free else None,
        A_eq=problem.A[J] if J else None,
        b_eq=problem.V[J] if J else None,
        bounds=[(None, None)] * problem.m,
        method="highs",
    )
    return res.status == 0


def brute_alpha(
    points: WeightedPoints,
    d: int,
    tolerances: Optional[Tolerances] = None,
) -> Tuple[FilteredComplex, WitnessMap]:
    if points.n_points > settings.ORACLE_MAX_POINTS:
        raise OracleSizeError(
            f"{points.n_points} points exceed the oracle cap of {settings.ORACLE_MAX_POINTS}"
        )
    tol = tolerances or Tolerances()
    cx = FilteredComplex()
    witness: WitnessMap = {}
    tested = 0
    with time_block("oracle.brute"):
        for size in range(1, d + 2):
            for sigma in combinations(range(points.n_points), size):
                tested += 1
                p_x = float(points.power[sigma[0]])
                c1 = 0.5 * (points.a1 + p_x)
                if c1 < 0.0:
                    continue
                bound = c1 + tol.eps_c(c1)
                res = primal_enumerate(PrimalProblem.for_simplex(points, sigma), cutoff=bound)
                if res.feasible and res.cstar <= bound:
                    cx.add(sigma, 2.0 * res.cstar - p_x)
                    witness[sigma] = res.y
    log.info("oracle: %d subsets tested, %d simplices", tested, len(cx))
    return cx, witness


def compare(
    a: Tuple[FilteredComplex, WitnessMap],
    b: Tuple[FilteredComplex, WitnessMap],
    weight_tol: float = 1e-9,
    witness_tol: float = 1e-7,
) -> ComparisonReport:
    """
    Simplex sets must agree exactly; weights within weight_tol * (1 + |w|) and
    witnesses within witness_tol in Euclidean norm.
    """
    (ca, wa), (cb, wb) = a, b
    sa, sb = ca.weights(), cb.weights()
    issues: List[Discrepancy] = []
    max_dw = max_dy = 0.0

    for s in sorted(set(sa) | set(sb), key=lambda s: (len(s), s)):
        if s not in sb:
            issues.append(Discrepancy(kind="missing", simplex=list(s), detail="only in a"))
            continue
        if s not in sa:
            issues.append(Discrepancy(kind="missing", simplex=list(s), detail="only in b"))
            continue
        dw = abs(sa[s] - sb[s])
        max_dw = max(max_dw, dw)
        if dw > weight_tol * (1.0 + abs(sa[s])):
            issues.append(
                Discrepancy(kind="weight", simplex=list(s), detail=f"{sa[s]!r} vs {sb[s]!r}", delta=dw)
            )
        if s in wa and s in wb:
            dy = float(np.linalg.norm(np.asarray(wa[s]) - np.asarray(wb[s])))
            max_dy = max(max_dy, dy)
            if dy > witness_tol:
                issues.append(Discrepancy(kind="witness", simplex=list(s), detail="witnesses differ", delta=dy))

    return ComparisonReport(
        identical=not issues,
        counts_a=list(ca.sizes()),
        counts_b=list(cb.sizes()),
        discrepancies=issues,
        max_weight_delta=max_dw,
        max_witness_delta=max_dy,
    )
