"""
Dual active-set solver for the distance-form QP pair

    primal:  min  1/2 |y - x|^2   s.t.  A_i y = V_i (i in J),  A_i y <= V_i (i not in J)
    dual:    max  -1/2 l'Bl + U'l  s.t.  l_i >= 0 (i not in J),   B = AA', U = Ax - V

The dual is solved directly: l = 0 is always feasible with objective 0, and any
feasible l bounds the primal optimum from below, so the solve stops as soon as
the working objective passes the caller's bound c1. An unbounded dual ray is
the certificate that the primal is infeasible.

The working set W holds the multipliers allowed to be nonzero. Its principal
submatrix of B is kept as a Cholesky factor that grows by one row on insertion
and is re-triangularised with Givens rotations on removal.
"""
from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field
from typing import FrozenSet, Iterable, List, Optional

import numpy as np
from scipy.linalg import solve_triangular

from .models.request import Tolerances

log = logging.getLogger(__name__)


class DualInputError(ValueError):
    pass


class DegenerateConstraintError(ValueError):
    pass


class DualCyclingError(RuntimeError):
    pass


class DualFeasibilityError(RuntimeError):
    pass


class DualStatus(str, enum.Enum):
    OPTIMAL = "Optimal"
    BOUND_EXCEEDED = "BoundExceeded"


@dataclass(frozen=True)
class DualProblem:
    B: np.ndarray
    U: np.ndarray
    J: FrozenSet[int]
    c1: float

    @classmethod
    def create(cls, B, U, J: Iterable[int] = (), c1: float = math.inf) -> "DualProblem":
        return cls(
            B=np.asarray(B, dtype=float),
            U=np.asarray(U, dtype=float).ravel(),
            J=frozenset(int(j) for j in J),
            c1=float(c1),
        )

    @classmethod
    def from_primal(cls, x, A, V, J: Iterable[int] = (), c1: float = math.inf) -> "DualProblem":
        """Dual coefficients B = AA^t, U = Ax - V."""
        A = np.atleast_2d(np.asarray(A, dtype=float))
        return cls.create(A @ A.T, A @ np.asarray(x, dtype=float) - np.asarray(V, dtype=float), J, c1)

    @property
    def n(self) -> int:
        return int(self.U.shape[0])

    def validate(self) -> None:
        B, U = self.B, self.U
        n = U.shape[0]
        if B.shape != (n, n):
            raise DualInputError(f"B has shape {B.shape}, expected ({n}, {n})")
        if not (np.all(np.isfinite(B)) and np.all(np.isfinite(U))):
            raise DualInputError("B and U must be finite")
        scale = max(1.0, float(np.max(np.abs(B)))) if n else 1.0
        if n and float(np.max(np.abs(B - B.T))) > 1e-12 * scale:
            raise DualInputError("B is not symmetric")
        if n and float(np.min(np.diag(B))) < 0.0:
            raise DualInputError("B has a negative diagonal entry")
        bad = [j for j in self.J if not 0 <= j < n]
        if bad:
            raise DualInputError(f"equality indices {sorted(bad)} out of range 0..{n - 1}")


@dataclass
class DualSolution:
    status: DualStatus
    lam: np.ndarray
    cstar: float
    iterations: int = 0
    objective_trace: List[float] = field(default_factory=list)

    @property
    def optimal(self) -> bool:
        return self.status is DualStatus.OPTIMAL


def dual_objective(problem: DualProblem, lam) -> float:
    lam = np.asarray(lam, dtype=float)
    return float(-0.5 * lam @ problem.B @ lam + problem.U @ lam)


def single_constraint_bound(problem: DualProblem, i: int, eps: float = 1e-14) -> float:
    """
    Dual objective maximised along the single axis l_i: U_i^2 / (2 B_ii),
    a certified lower bound on the primal optimum. Zero when l_i is sign
    constrained and U_i <= 0 (l = 0 is then the best point on that axis).
    """
    b = float(problem.B[i, i])
    if b <= eps:
        raise DegenerateConstraintError(f"constraint {i} has B_ii = {b!r}")
    u = float(problem.U[i])
    if i not in problem.J and u <= 0.0:
        return 0.0
    return u * u / (2.0 * b)


def single_constraint_bounds(problem: DualProblem) -> np.ndarray:
    """All single-constraint bounds at once; degenerate rows contribute 0."""
    d = np.diag(problem.B)
    u = problem.U
    eq = np.zeros(u.shape[0], dtype=bool)
    eq[list(problem.J)] = True
    usable = (d > 0.0) & (eq | (u > 0.0))
    out = np.zeros_like(u)
    out[usable] = u[usable] ** 2 / (2.0 * d[usable])
    return out


def primal_from_dual(x, A, lam) -> np.ndarray:
    """KKT recovery y* = x - A^t l*."""
    x = np.asarray(x, dtype=float).ravel()
    A = np.atleast_2d(np.asarray(A, dtype=float))
    lam = np.asarray(lam, dtype=float).ravel()
    if A.shape[0] != lam.shape[0] or (A.size and A.shape[1] != x.shape[0]):
        raise ValueError(f"dimension mismatch: x {x.shape}, A {A.shape}, lambda {lam.shape}")
    if lam.size == 0:
        return x.copy()
    return x - A.T @ lam


class _CholeskyWorkspace:
    """Growing/shrinking Cholesky factor of B[W, W], kept in a reusable buffer."""

    def __init__(self, capacity: int = 0):
        self._L = np.zeros((capacity, capacity))
        self.members: List[int] = []

    def reset(self, B: np.ndarray) -> None:
        n = B.shape[0]
        if self._L.shape[0] < n:
            self._L = np.zeros((n, n))
        self.B = B
        self.members = []

    @property
    def L(self) -> np.ndarray:
        k = len(self.members)
        return self._L[:k, :k]

    def probe(self, i: int):
        """Row of the factor that `i` would add, and its squared pivot (Schur complement)."""
        k = len(self.members)
        if k == 0:
            return np.zeros(0), float(self.B[i, i])
        b = self.B[self.members, i]
        row = solve_triangular(self.L, b, lower=True, check_finite=False)
        return row, float(self.B[i, i] - row @ row)

    def insert(self, i: int, row: np.ndarray, pivot_sq: float) -> None:
        k = len(self.members)
        self._L[k, :k] = row
        self._L[k, k] = math.sqrt(pivot_sq)
        self._L[k, k + 1:] = 0.0
        self.members.append(i)

    def remove(self, i: int) -> None:
        pos = self.members.index(i)
        k = len(self.members)
        L = self._L
        L[pos:k - 1, :k] = L[pos + 1:k, :k]
        for r in range(pos, k - 1):
            a, b = L[r, r], L[r, r + 1]
            h = math.hypot(a, b)
            if h == 0.0:
                continue
            c, s = a / h, b / h
            col_a = L[r:k - 1, r].copy()
            col_b = L[r:k - 1, r + 1].copy()
            L[r:k - 1, r] = c * col_a + s * col_b
            L[r:k - 1, r + 1] = -s * col_a + c * col_b
        L[k - 1, :k] = 0.0
        L[:k, k - 1] = 0.0
        self.members.pop(pos)

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        if not self.members:
            return np.zeros(0)
        z = solve_triangular(self.L, rhs, lower=True, check_finite=False)
        return solve_triangular(self.L.T, z, lower=False, check_finite=False)


class DualActiveSetSolver:
    """
    One solver per thread; the factorization buffer is reused across sequential solves.
    """

    def __init__(self, tolerances: Optional[Tolerances] = None, *, bland: bool = False):
        self.tolerances = tolerances or Tolerances()
        self.bland = bland
        self._work = _CholeskyWorkspace()

    def solve(self, problem: DualProblem, max_iter: Optional[int] = None) -> DualSolution:
        problem.validate()
        tol = self.tolerances
        B, U = problem.B, problem.U
        n = problem.n
        lam = np.zeros(n)
        trace = [0.0]
        bound = problem.c1 + tol.eps_c(problem.c1)

        def exceeded(iterations: int) -> DualSolution:
            return DualSolution(DualStatus.BOUND_EXCEEDED, lam, math.inf, iterations, trace)

        if 0.0 > bound:
            return exceeded(0)
        if n == 0:
            return DualSolution(DualStatus.OPTIMAL, lam, 0.0, 0, trace)

        eq = np.zeros(n, dtype=bool)
        eq[list(problem.J)] = True
        max_diag = float(np.max(np.diag(B)))
        pivot_tol = tol.eps_pivot(max_diag)
        opt_tol = tol.eps_opt(max(float(np.max(np.abs(U))), max_diag))
        work = self._work
        work.reset(B)
        in_w = np.zeros(n, dtype=bool)
        cap = max_iter if max_iter is not None else 100 * max(n, 1)
        it = 0

        def record() -> bool:
            f = dual_objective(problem, lam)
            trace.append(f)
            return f > bound

        while True:
            it += 1
            if it > cap:
                raise DualCyclingError(f"no convergence after {cap} working-set changes (n={n})")

            g = U - B @ lam
            viol = np.where(eq, np.abs(g), g)
            viol[in_w] = -np.inf
            candidates = np.flatnonzero(viol > opt_tol)
            if candidates.size == 0:
                break
            i = int(candidates[0]) if self.bland else int(np.argmax(viol))
            sign = (1.0 if g[i] > 0 else -1.0) if eq[i] else 1.0

            while True:
                row, pivot_sq = work.probe(i)
                if pivot_sq > pivot_tol:
                    break
                # i depends on W: move along the null ray of B[W+i, W+i] until a member drops out
                members = list(work.members)
                d = np.zeros(n)
                d[i] = sign
                if members:
                    d[members] = -sign * work.solve(B[members, i])
                step, blocking = self._ratio(lam, d, members, eq, limit=math.inf)
                if blocking is None:
                    log.debug("unbounded dual ray on entering index %d", i)
                    return exceeded(it)
                lam += step * d
                lam[blocking] = 0.0
                work.remove(blocking)
                in_w[blocking] = False
                it += 1
                if it > cap:
                    raise DualCyclingError(f"no convergence after {cap} working-set changes (n={n})")
                if record():
                    return exceeded(it)

            work.insert(i, row, pivot_sq)
            in_w[i] = True
            while True:
                members = list(work.members)
                target = work.solve(U[members])
                p = target - lam[members]
                d = np.zeros(n)
                d[members] = p
                step, blocking = self._ratio(lam, d, members, eq, limit=1.0)
                lam[members] += step * p
                if blocking is None:
                    break
                lam[blocking] = 0.0
                work.remove(blocking)
                in_w[blocking] = False
                it += 1
                if it > cap:
                    raise DualCyclingError(f"no convergence after {cap} working-set changes (n={n})")
                if record():
                    return exceeded(it)
            if record():
                return exceeded(it)

        _clamp_free(lam, eq, tol.eps_feas)
        cstar = dual_objective(problem, lam)
        if cstar > bound:
            return exceeded(it)
        return DualSolution(DualStatus.OPTIMAL, lam, max(cstar, 0.0), it, trace)

    def _ratio(self, lam, d, members, eq, limit: float):
        """Longest step along d (capped at `limit`) keeping sign-constrained members >= 0."""
        step, blocking = limit, None
        for j in sorted(members) if self.bland else members:
            if eq[j] or d[j] >= 0.0:
                continue
            t = max(lam[j], 0.0) / -d[j]
            if t < step:
                step, blocking = t, j
        return step, blocking


def _clamp_free(lam: np.ndarray, eq: np.ndarray, eps_feas: float) -> None:
    """Zero rounding-level negatives among sign-constrained multipliers, in place."""
    free = ~eq
    if not free.any():
        return
    tol = eps_feas * (1.0 + float(np.max(np.abs(lam))))
    worst = float(lam[free].min())
    if worst < -tol:
        i = int(np.flatnonzero(free)[np.argmin(lam[free])])
        raise DualFeasibilityError(f"multiplier {i} is {worst!r}, below -{tol:.3g}")
    lam[free] = np.maximum(lam[free], 0.0)


def solve_dual(
    problem: DualProblem,
    tolerances: Optional[Tolerances] = None,
    *,
    bland: bool = False,
    max_iter: Optional[int] = None,
) -> DualSolution:
    return DualActiveSetSolver(tolerances, bland=bland).solve(problem, max_iter=max_iter)
