"""
Point-cloud generators and sampling helpers for experiments and tests.
"""
from __future__ import annotations

import logging
import math
from typing import List, Optional

import numpy as np
from scipy.spatial import cKDTree
from scipy.spatial.distance import pdist
from scipy.stats import ortho_group

log = logging.getLogger(__name__)

GOLDEN_ANGLE = math.pi * (3.0 - math.sqrt(5.0))


def circle_points(n: int, radius: float = 1.0) -> np.ndarray:
    """n evenly spaced points on the circle of the given radius."""
    t = 2.0 * np.pi * np.arange(n) / n
    return radius * np.column_stack([np.cos(t), np.sin(t)])


def fibonacci_sphere(n: int) -> np.ndarray:
    """Quasi-uniform points on the unit sphere S^2 (golden-angle spiral)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    i = np.arange(n) + 0.5
    z = 1.0 - 2.0 * i / n
    r = np.sqrt(np.clip(1.0 - z * z, 0.0, None))
    phi = GOLDEN_ANGLE * i
    return np.column_stack([r * np.cos(phi), r * np.sin(phi), z])


def random_cube(n: int, m: int, rng: np.random.Generator) -> np.ndarray:
    return rng.uniform(-1.0, 1.0, size=(n, m))


def random_powers(n: int, high: float, rng: np.random.Generator, low: float = 0.0) -> np.ndarray:
    return rng.uniform(low, high, size=n)


def cutoff_for_degree(coords: np.ndarray, degree: float) -> float:
    """
    Smallest unweighted cutoff a1 = r^2 at which the Čech graph has average
    degree >= `degree` (balls of radius r meet iff the centers are <= 2r apart).
    """
    coords = np.asarray(coords, dtype=float)
    n = coords.shape[0]
    dists = np.sort(pdist(coords))
    if dists.size == 0:
        return 0.0
    need = min(dists.size, max(1, math.ceil(degree * n / 2.0)))
    return float((dists[need - 1] / 2.0) ** 2)


def covering_radius(points: np.ndarray, query: np.ndarray) -> float:
    """Largest distance from a query point to its nearest sample."""
    dist, _ = cKDTree(np.asarray(points, dtype=float)).query(np.asarray(query, dtype=float))
    return float(np.max(dist))


def select_landmarks(points: np.ndarray, min_distance: float, start: int = 0) -> List[int]:
    """
    Greedy max-min landmark selection: keep adding the point farthest from the
    current landmarks until every point is within `min_distance` of one.
    """
    points = np.asarray(points, dtype=float)
    chosen = [int(start)]
    nearest = np.linalg.norm(points - points[start], axis=1)
    while True:
        far = int(np.argmax(nearest))
        if nearest[far] <= min_distance:
            break
        chosen.append(far)
        nearest = np.minimum(nearest, np.linalg.norm(points - points[far], axis=1))
    log.info("selected %d landmarks out of %d points", len(chosen), points.shape[0])
    return chosen


def random_isometry(
    coords: np.ndarray,
    extra_dims: int,
    rng: Optional[np.random.Generator] = None,
) -> np.ndarray:
    """Pad with `extra_dims` zero coordinates and apply a random orthogonal map."""
    coords = np.asarray(coords, dtype=float)
    m = coords.shape[1] + extra_dims
    padded = np.hstack([coords, np.zeros((coords.shape[0], extra_dims))])
    if m == 1:
        return padded * (1.0 if rng is None or rng.random() < 0.5 else -1.0)
    Q = ortho_group.rvs(m, random_state=rng)
    return padded @ Q.T
