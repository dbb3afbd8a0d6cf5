"""
Weighted point sets and the 1-skeleton of their weighted Čech complex.

A site x with power p(x) carries the closed ball U_x = {y : |y - x|^2 - p(x) <= a1},
of radius sqrt(a1 + p(x)), empty when a1 + p(x) < 0. Two active sites are adjacent
when their balls meet (tangency counts).
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Literal, Optional, Tuple

import numpy as np
from scipy.spatial import cKDTree
from scipy.spatial.distance import pdist, squareform

from .config import settings
from .utils.metrics import time_block

log = logging.getLogger(__name__)


class InactiveVertexError(ValueError):
    pass


@dataclass(frozen=True)
class WeightedPoints:
    coords: np.ndarray
    power: np.ndarray
    a1: float = 0.0

    def __post_init__(self):
        coords = np.array(self.coords, dtype=float)
        if coords.ndim == 1:
            coords = coords.reshape(-1, 1)
        if coords.ndim != 2 or coords.shape[0] < 1 or coords.shape[1] < 1:
            raise ValueError(f"coords must be an N x m array with N, m >= 1, got shape {coords.shape}")
        if not np.all(np.isfinite(coords)):
            raise ValueError("coordinates must be finite")
        power = np.zeros(coords.shape[0]) if self.power is None else np.array(self.power, dtype=float).ravel()
        if power.shape[0] != coords.shape[0]:
            raise ValueError(f"{power.shape[0]} powers for {coords.shape[0]} points")
        if not np.all(np.isfinite(power)):
            raise ValueError("powers must be finite")
        coords.setflags(write=False)
        power.setflags(write=False)
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "power", power)
        object.__setattr__(self, "a1", float(self.a1))

    @classmethod
    def unweighted(cls, coords, radius: float) -> "WeightedPoints":
        """p = 0 and a1 = r^2."""
        coords = np.asarray(coords, dtype=float)
        n = coords.shape[0] if coords.ndim > 0 else 1
        return cls(coords, np.zeros(n), float(radius) ** 2)

    @property
    def n_points(self) -> int:
        return int(self.coords.shape[0])

    @property
    def ambient_dim(self) -> int:
        return int(self.coords.shape[1])

    def with_cutoff(self, a1: float) -> "WeightedPoints":
        return WeightedPoints(self.coords, self.power, a1)

    def radii(self) -> np.ndarray:
        """Ball radii sqrt(a1 + p); NaN for empty balls."""
        r2 = self.a1 + self.power
        out = np.full(r2.shape, np.nan)
        ok = r2 >= 0.0
        out[ok] = np.sqrt(r2[ok])
        return out

    def power_distance(self, i: int, y) -> float:
        """pi_i(y) = |y - x_i|^2 - p(x_i)."""
        diff = np.asarray(y, dtype=float) - self.coords[i]
        return float(diff @ diff - self.power[i])

    def power_distances(self, y) -> np.ndarray:
        diff = self.coords - np.asarray(y, dtype=float)
        return np.einsum("ij,ij->i", diff, diff) - self.power


@dataclass(frozen=True)
class CechGraph:
    active: Tuple[int, ...]
    adjacency: Dict[int, Tuple[int, ...]] = field(default_factory=dict)

    def is_active(self, x: int) -> bool:
        return x in self.adjacency

    def edges(self) -> Iterator[Tuple[int, int]]:
        """Edges (i, j) with i < j in lexicographic order."""
        for i in self.active:
            for j in self.adjacency[i]:
                if j > i:
                    yield (i, j)

    @property
    def n_edges(self) -> int:
        return sum(len(v) for v in self.adjacency.values()) // 2

    def degrees(self) -> np.ndarray:
        return np.array([len(self.adjacency[i]) for i in self.active], dtype=int)


def build_cech_graph(
    points: WeightedPoints,
    method: Optional[Literal["pairwise", "kdtree"]] = None,
    slack_rel: Optional[float] = None,
) -> CechGraph:
    """
    Vertex x is active iff a1 + p(x) >= 0; {x, y} is an edge iff both are active
    and |x - y| <= r_x + r_y. "pairwise" is the O(N^2) default; "kdtree" queries
    pairs within twice the largest radius and filters them exactly.
    """
    method = method or settings.GRAPH_METHOD
    slack_rel = settings.GRAPH_SLACK_REL if slack_rel is None else slack_rel
    with time_block("cech.graph"):
        radii = points.radii()
        active = np.flatnonzero(~np.isnan(radii))
        coords = points.coords[active]
        r = radii[active]
        pairs: List[Tuple[int, int]] = []
        if active.size > 1:
            if method == "kdtree":
                reach = 2.0 * float(r.max()) * (1.0 + slack_rel)
                cand = cKDTree(coords).query_pairs(reach, output_type="ndarray")
                if cand.size:
                    a, b = cand[:, 0], cand[:, 1]
                    dist = np.linalg.norm(coords[a] - coords[b], axis=1)
                    keep = dist <= (r[a] + r[b]) * (1.0 + slack_rel)
                    pairs = list(zip(a[keep].tolist(), b[keep].tolist()))
            elif method == "pairwise":
                dist = squareform(pdist(coords))
                reach = (r[:, None] + r[None, :]) * (1.0 + slack_rel)
                a, b = np.nonzero(np.triu(dist <= reach, k=1))
                pairs = list(zip(a.tolist(), b.tolist()))
            else:
                raise ValueError(f"unknown graph method {method!r}")

        adj: Dict[int, List[int]] = {int(v): [] for v in active}
        for a, b in pairs:
            u, v = int(active[a]), int(active[b])
            adj[u].append(v)
            adj[v].append(u)
        graph = CechGraph(
            active=tuple(int(v) for v in active),
            adjacency={v: tuple(sorted(nb)) for v, nb in adj.items()},
        )
    deg = graph.degrees()
    log.info(
        "cech graph: %d/%d active vertices, %d edges, max degree %d",
        len(graph.active),
        points.n_points,
        graph.n_edges,
        int(deg.max()) if deg.size else 0,
    )
    return graph


def neighbors(graph: CechGraph, x: int) -> Tuple[int, ...]:
    try:
        return graph.adjacency[x]
    except KeyError:
        raise InactiveVertexError(f"vertex {x} is not active at this cutoff") from None
