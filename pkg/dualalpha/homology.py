"""
Betti numbers over F_p from sparse boundary ranks.
"""
from __future__ import annotations

import heapq
import logging
from collections import defaultdict
from typing import Dict, List, Set, Tuple

from sympy.functions.combinatorial.numbers import stirling

from .complex import FilteredComplex, boundary_matrix
from .sparse import NonPrimeModulusError, SparseMatrixFp, is_prime, require_prime
from .utils.metrics import time_block

log = logging.getLogger(__name__)

BettiVector = Tuple[int, ...]

__all__ = [
    "BettiVector",
    "NonPrimeModulusError",
    "SparseMatrixFp",
    "betti",
    "betti_from_ranks",
    "euler_from_betti",
    "is_prime",
    "rank_fp",
    "stirling_reference",
]


def rank_fp(matrix: SparseMatrixFp) -> int:
    """
    Exact rank by sparse Gaussian elimination mod p.

    Pivot choice is Markowitz-style: the live column with the fewest entries,
    then the shortest row in it, which keeps fill low on boundary matrices.
    Column counts sit in a heap with lazy invalidation.
    """
    p = matrix.prime
    rows: Dict[int, Dict[int, int]] = matrix.row_dicts()
    cols: Dict[int, Set[int]] = defaultdict(set)
    for r, entries in rows.items():
        for c in entries:
            cols[c].add(r)

    heap: List[Tuple[int, int]] = [(len(rs), c) for c, rs in cols.items()]
    heapq.heapify(heap)
    rank = 0
    while heap:
        count, c = heapq.heappop(heap)
        live = cols.get(c)
        if not live:
            continue
        if count != len(live):
            heapq.heappush(heap, (len(live), c))
            continue

        pr = min(live, key=lambda r: (len(rows[r]), r))
        pivot_row = rows.pop(pr)
        for cc in pivot_row:
            cols[cc].discard(pr)
        inv = pow(pivot_row[c], p - 2, p)
        for r in list(cols[c]):
            row = rows[r]
            f = row[c] * inv % p
            for cc, v in pivot_row.items():
                nv = (row.get(cc, 0) - f * v) % p
                if nv:
                    if cc not in row:
                        cols[cc].add(r)
                        heapq.heappush(heap, (len(cols[cc]), cc))
                    row[cc] = nv
                elif cc in row:
                    del row[cc]
                    cols[cc].discard(r)
            if not row:
                del rows[r]
        del cols[c]
        rank += 1
    return rank


def betti_from_ranks(counts: List[int], ranks: Dict[int, int], K: int) -> BettiVector:
    """beta_k = |X_k| - rank d_k - rank d_{k+1}, with d_0 = 0."""
    out = []
    for k in range(K + 1):
        n_k = counts[k] if k < len(counts) else 0
        out.append(n_k - ranks.get(k, 0) - ranks.get(k + 1, 0))
    return tuple(out)


def betti(cx: FilteredComplex, prime: int, K: int) -> BettiVector:
    """
    Betti numbers beta_0..beta_K. The boundary d_{K+1} uses whatever
    (K+1)-simplices are stored, so beta_K is exact only when the complex
    was built through dimension K + 1.
    """
    p = require_prime(prime)
    if K < 0:
        return ()
    counts = [cx.count(k) for k in range(K + 2)]
    ranks: Dict[int, int] = {}
    with time_block("homology.ranks"):
        for k in range(1, K + 2):
            if counts[k] == 0 or counts[k - 1] == 0:
                continue
            ranks[k] = rank_fp(boundary_matrix(cx, k, p))
            log.debug("rank d_%d = %d (%d x %d)", k, ranks[k], counts[k - 1], counts[k])
    result = betti_from_ranks(counts, ranks, K)
    log.info("betti over F_%d: %s", p, result)
    return result


def stirling_reference(n: int) -> BettiVector:
    """
    Unsigned Stirling numbers of the first kind c(n, n-k), k = 0..n-1: the
    coefficients of (1 + t)(1 + 2t)...(1 + (n-1)t), which are the Betti numbers
    of the configuration space of n distinct points in the plane.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return tuple(int(stirling(n, n - k, kind=1)) for k in range(n))


def euler_from_betti(b: BettiVector) -> int:
    return sum((-1) ** k * v for k, v in enumerate(b))

