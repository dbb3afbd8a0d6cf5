"""
Alpha complex construction, one dual QP per candidate simplex.

Dimension by dimension, candidates are grouped by their smallest vertex (the base).
Each base vertex x gets its dual coefficients once,

    B_ij = (x_i - x).(x_j - x),   U_i = (p(x_i) - p(x) - |x_i - x|^2) / 2,   c1 = (a1 + p(x)) / 2,

over its Čech neighbors x_i, and every candidate based at x is a choice of equality
set J inside that neighbor list. A candidate is accepted iff the dual optimum c*
stays within c1; its weight is 2c* - p(x) and its witness x - sum_i l_i (x_i - x).
"""
from __future__ import annotations

import logging
import threading
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from joblib import Parallel, delayed
from tqdm import tqdm

from .cech import CechGraph, WeightedPoints, build_cech_graph, neighbors
from .complex import FilteredComplex, Simplex, WitnessMap, lazy_candidates
from .dual_qp import DualActiveSetSolver, DualProblem, primal_from_dual, single_constraint_bounds
from .models.request import BuildParams, Tolerances
from .utils.metrics import time_block

log = logging.getLogger(__name__)

Accepted = Tuple[Simplex, float, np.ndarray]


class CoincidentPointsError(ValueError):
    pass


@dataclass(frozen=True)
class VertexCoefficients:
    base: int
    neighbor_ids: Tuple[int, ...]
    diffs: np.ndarray
    B: np.ndarray
    U: np.ndarray
    c1: float
    base_power: float
    base_coords: np.ndarray
    position: Dict[int, int] = field(default_factory=dict, repr=False)
    # single-constraint lower bounds with every index sign constrained / free
    free_bounds: np.ndarray = field(default=None, repr=False)
    eq_bounds: np.ndarray = field(default=None, repr=False)

    @property
    def n(self) -> int:
        return len(self.neighbor_ids)

    def equality_positions(self, sigma: Simplex) -> Optional[Tuple[int, ...]]:
        """Positions of sigma's non-base vertices in the neighbor list; None if one is missing."""
        out = []
        for v in sigma[1:]:
            pos = self.position.get(v)
            if pos is None:
                return None
            out.append(pos)
        return tuple(out)


def vertex_coefficients(
    points: WeightedPoints,
    graph: CechGraph,
    x: int,
    a1: Optional[float] = None,
    neighbor_ids: Optional[Sequence[int]] = None,
) -> VertexCoefficients:
    """
    Dual coefficients of base vertex x. `neighbor_ids` defaults to the Čech
    neighbors of x; any other sorted list of constraint points may be given.
    """
    nbrs = neighbors(graph, x)
    if neighbor_ids is not None:
        nbrs = tuple(int(v) for v in neighbor_ids if int(v) != x)
    a1 = points.a1 if a1 is None else float(a1)
    base = points.coords[x]
    diffs = points.coords[list(nbrs)] - base if nbrs else np.zeros((0, points.ambient_dim))
    B = diffs @ diffs.T
    sq = np.diag(B).copy()
    zero = np.flatnonzero(sq == 0.0)
    if zero.size:
        raise CoincidentPointsError(f"points {x} and {nbrs[int(zero[0])]} coincide")
    p_x = float(points.power[x])
    U = 0.5 * (points.power[list(nbrs)] - p_x - sq) if nbrs else np.zeros(0)

    free = single_constraint_bounds(DualProblem.create(B, U, (), 0.0))
    eq = single_constraint_bounds(DualProblem.create(B, U, range(len(nbrs)), 0.0))
    return VertexCoefficients(
        base=int(x),
        neighbor_ids=tuple(nbrs),
        diffs=diffs,
        B=B,
        U=U,
        c1=0.5 * (a1 + p_x),
        base_power=p_x,
        base_coords=base,
        position={v: i for i, v in enumerate(nbrs)},
        free_bounds=free,
        eq_bounds=eq,
    )


def test_simplex(
    coeffs: VertexCoefficients,
    sigma: Simplex,
    tolerances: Optional[Tolerances] = None,
    *,
    solver: Optional[DualActiveSetSolver] = None,
    prescreen: bool = True,
) -> Optional[Tuple[float, np.ndarray]]:
    """(weight, witness) of sigma at the cutoff, or None if it is not in the alpha cx."""
    if not sigma or sigma[0] != coeffs.base:
        raise ValueError(f"simplex {sigma} is not based at vertex {coeffs.base}")
    J = coeffs.equality_positions(sigma)
    if J is None:
        return None
    solver = solver or DualActiveSetSolver(tolerances)
    tol = solver.tolerances

    if prescreen and coeffs.n:
        lower = float(coeffs.free_bounds.max())
        if J:
            lower = max(lower, float(coeffs.eq_bounds[list(J)].max()))
        if lower > coeffs.c1 + tol.eps_c(coeffs.c1):
            return None

    problem = DualProblem(coeffs.B, coeffs.U, frozenset(J), coeffs.c1)
    sol = solver.solve(problem)
    if not sol.optimal:
        return None
    weight = 2.0 * sol.cstar - coeffs.base_power
    witness = primal_from_dual(coeffs.base_coords, coeffs.diffs, sol.lam)
    return weight, witness


test_simplex.__test__ = False  # not a pytest test


class _VertexTasks:
    """Per-vertex work for one dimension; one solver per worker thread."""

    def __init__(self, points: WeightedPoints, graph: CechGraph, a1: float, params: BuildParams):
        self.points = points
        self.graph = graph
        self.a1 = a1
        self.params = params
        self._cache: Dict[int, VertexCoefficients] = {}
        self._cache_lock = threading.Lock()
        self._local = threading.local()

    def _solver(self) -> DualActiveSetSolver:
        solver = getattr(self._local, "solver", None)
        if solver is None:
            solver = self._local.solver = DualActiveSetSolver(self.params.tolerances)
        return solver

    def coefficients(self, x: int) -> VertexCoefficients:
        with self._cache_lock:
            cached = self._cache.get(x)
        if cached is not None:
            return cached
        nbrs = None
        if self.params.constraints == "all":
            nbrs = [v for v in range(self.points.n_points) if v != x]
        coeffs = vertex_coefficients(self.points, self.graph, x, self.a1, neighbor_ids=nbrs)
        with self._cache_lock:
            return self._cache.setdefault(x, coeffs)

    def __call__(self, job: Tuple[int, List[Simplex]]) -> List[Accepted]:
        x, candidates = job
        coeffs = self.coefficients(x)
        solver = self._solver()
        out: List[Accepted] = []
        for sigma in candidates:
            res = test_simplex(coeffs, sigma, solver=solver, prescreen=self.params.prescreen)
            if res is not None:
                out.append((sigma, res[0], res[1]))
        log.debug("vertex %d: %d/%d candidates accepted", x, len(out), len(candidates))
        return out


def _group_by_base(candidates: Iterable[Simplex]) -> List[Tuple[int, List[Simplex]]]:
    groups: Dict[int, List[Simplex]] = defaultdict(list)
    for sigma in candidates:
        groups[sigma[0]].append(sigma)
    return [(x, sorted(groups[x])) for x in sorted(groups)]


def build_alpha(points: WeightedPoints, params: BuildParams) -> Tuple[FilteredComplex, WitnessMap]:
    a1 = points.a1 if params.a1 is None else float(params.a1)
    if a1 != points.a1:
        points = points.with_cutoff(a1)

    cx = FilteredComplex()
    witness: WitnessMap = {}
    graph = build_cech_graph(points, method=params.graph_method)
    tasks = _VertexTasks(points, graph, a1, params)

    with Parallel(n_jobs=params.threads, backend="threading", return_as="generator") as parallel:
        for k in range(params.d + 1):
            if k == 0:
                candidates = [(v,) for v in graph.active]
            elif k == 1:
                candidates = [e for e in graph.edges() if (e[0],) in cx and (e[1],) in cx]
            else:
                candidates = lazy_candidates(cx, k)
            if not candidates:
                log.info("dim %d: no candidates, stopping", k)
                break

            jobs = _group_by_base(candidates)
            with time_block(f"build.dim{k}"):
                results = parallel(delayed(tasks)(job) for job in jobs)
                accepted: List[Accepted] = []
                for batch in tqdm(results, total=len(jobs), desc=f"dim {k}", disable=not params.progress):
                    accepted.extend(batch)

            # merge in lexicographic order so the result does not depend on scheduling
            accepted.sort(key=lambda r: r[0])
            for sigma, w, y in accepted:
                cx.add(sigma, w)
                witness[sigma] = y
            log.info("dim %d: %d candidates, %d accepted", k, len(candidates), len(accepted))
            if not accepted:
                break

    return cx, witness


def betti_pipeline(
    points: WeightedPoints,
    params: BuildParams,
    prime: int,
    upto: Optional[int] = None,
) -> Tuple[int, ...]:
    """
    Build the complex to dimension d and report Betti numbers through d - 1
    (or `upto`), the highest dimension whose boundary map above is complete.
    """
    from .homology import betti

    K = max(params.d - 1, 0) if upto is None else int(upto)
    if upto is not None and K > params.d - 1:
        log.warning("beta_%d needs simplices of dimension %d but the build stops at %d", K, K + 1, params.d)
    cx, _ = build_alpha(points, params)
    return betti(cx, prime, K)


def check_witnesses(
    points: WeightedPoints,
    cx: FilteredComplex,
    witness: WitnessMap,
    tol: float = 1e-8,
) -> List[str]:
    """
    Violations of witness validity: every vertex of sigma has power distance
    w(sigma) at the witness, and no point of S is closer in power distance.
    """
    problems: List[str] = []
    for sigma, w in cx.items():
        y = witness.get(sigma)
        if y is None:
            problems.append(f"{sigma}: no witness")
            continue
        pi = points.power_distances(y)
        on = float(np.max(np.abs(pi[list(sigma)] - w)))
        if on > tol:
            problems.append(f"{sigma}: vertex power distance off by {on:.3g}")
        low = float(pi.min())
        if low < w - tol:
            z = int(np.argmin(pi))
            problems.append(f"{sigma}: point {z} is closer ({low!r} < {w!r})")
    return problems
