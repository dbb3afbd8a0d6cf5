"""
Filtered simplicial complexes.

A simplex is the canonical sorted tuple of its vertex indices; every map in the
package is keyed on that tuple. Weights are stored in power units (squared
length minus power); conversion to radii only happens at the CLI layer.

Reads are safe from several threads. Insertion is single-writer.
"""
from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from .config import settings
from .sparse import SparseMatrixFp, require_prime

log = logging.getLogger(__name__)

Simplex = Tuple[int, ...]
Flag = Tuple[Simplex, ...]
WitnessMap = Dict[Simplex, np.ndarray]


class ComplexError(ValueError):
    pass


def as_simplex(vertices: Iterable[int]) -> Simplex:
    """Canonical form of a vertex collection; rejects duplicates and negative indices."""
    s = tuple(sorted(int(v) for v in vertices))
    if not s:
        raise ComplexError("a simplex needs at least one vertex")
    if s[0] < 0:
        raise ComplexError(f"negative vertex index in {s}")
    if any(a == b for a, b in zip(s, s[1:])):
        raise ComplexError(f"repeated vertex in {s}")
    return s


def dim(s: Simplex) -> int:
    return len(s) - 1


def facets(s: Simplex) -> List[Simplex]:
    """Codimension-one faces, the i-th one omitting position i."""
    if len(s) == 1:
        return []
    return [s[:i] + s[i + 1:] for i in range(len(s))]


def faces(s: Simplex) -> List[Simplex]:
    """All proper nonempty faces."""
    return [f for r in range(1, len(s)) for f in combinations(s, r)]


def is_flag(chain: Sequence[Simplex]) -> bool:
    return all(set(a) < set(b) for a, b in zip(chain, chain[1:]))


class FilteredComplex:
    """
    Simplices per dimension with a real weight each.

    Closure and monotonicity are invariants of every complex the builder emits;
    they are not enforced on insertion (so partial complexes can be assembled)
    but `check()` verifies them.
    """

    def __init__(self, weights: Optional[Mapping[Simplex, float]] = None):
        self._dims: Dict[int, Dict[Simplex, float]] = defaultdict(dict)
        if weights:
            for s, w in weights.items():
                self.add(s, w)

    @classmethod
    def closure(cls, maximal: Iterable[Iterable[int]], weight: float = 0.0) -> "FilteredComplex":
        """Complex generated by the given simplices and all their faces, at constant weight."""
        out = cls()
        for m in maximal:
            s = as_simplex(m)
            out.add(s, weight)
            for f in faces(s):
                out.add(f, weight)
        return out

    # ---------- mutation ----------
    def add(self, simplex: Iterable[int], weight: float) -> Simplex:
        s = simplex if isinstance(simplex, tuple) and _is_canonical(simplex) else as_simplex(simplex)
        self._dims[len(s) - 1][s] = float(weight)
        return s

    # ---------- queries ----------
    def __contains__(self, simplex: object) -> bool:
        if not isinstance(simplex, tuple):
            return False
        return simplex in self._dims.get(len(simplex) - 1, {})

    def __len__(self) -> int:
        return sum(len(d) for d in self._dims.values())

    def __iter__(self) -> Iterator[Simplex]:
        for s, _ in self.items():
            yield s

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FilteredComplex):
            return NotImplemented
        return self.weights() == other.weights()

    def __repr__(self) -> str:
        return f"FilteredComplex(sizes={self.sizes()})"

    @property
    def dimension(self) -> int:
        nonempty = [k for k, d in self._dims.items() if d]
        return max(nonempty) if nonempty else -1

    def weight(self, simplex: Simplex) -> float:
        try:
            return self._dims[len(simplex) - 1][simplex]
        except KeyError:
            raise ComplexError(f"simplex {simplex} is not in the complex") from None

    def weights(self) -> Dict[Simplex, float]:
        return {s: w for d in self._dims.values() for s, w in d.items()}

    def simplices(self, k: int) -> List[Simplex]:
        """k-simplices in lexicographic order; this order indexes boundary matrices."""
        return sorted(self._dims.get(k, {}))

    def count(self, k: int) -> int:
        return len(self._dims.get(k, {}))

    def sizes(self) -> Tuple[int, ...]:
        return tuple(self.count(k) for k in range(self.dimension + 1))

    def vertices(self) -> List[int]:
        return [s[0] for s in self.simplices(0)]

    def items(self) -> Iterator[Tuple[Simplex, float]]:
        """(simplex, weight) ordered by (dimension, weight, lexicographic vertices)."""
        for k in range(self.dimension + 1):
            for s, w in sorted(self._dims.get(k, {}).items(), key=lambda kv: (kv[1], kv[0])):
                yield s, w

    def adjacency(self) -> Dict[int, set]:
        """Vertex adjacency of the 1-skeleton."""
        adj: Dict[int, set] = {v: set() for v in self.vertices()}
        for a, b in self._dims.get(1, {}):
            adj.setdefault(a, set()).add(b)
            adj.setdefault(b, set()).add(a)
        return adj

    def copy(self) -> "FilteredComplex":
        return FilteredComplex(self.weights())

    def check(self, slack: Optional[float] = None) -> None:
        """Raise ComplexError on the first face-closure or monotonicity violation."""
        slack = settings.WEIGHT_SLACK if slack is None else slack
        for k in range(1, self.dimension + 1):
            for s, w in self._dims.get(k, {}).items():
                for f in facets(s):
                    if f not in self:
                        raise ComplexError(f"facet {f} of {s} is missing")
                    if self.weight(f) > w + slack:
                        raise ComplexError(
                            f"weight of facet {f} ({self.weight(f)!r}) exceeds weight of {s} ({w!r})"
                        )


def _is_canonical(s: tuple) -> bool:
    return len(s) > 0 and all(isinstance(v, int) for v in s) and all(a < b for a, b in zip(s, s[1:])) and s[0] >= 0


def skeleton(cx: FilteredComplex, k: int) -> FilteredComplex:
    if k < -1:
        raise ComplexError(f"skeleton dimension must be >= -1, got {k}")
    return FilteredComplex({s: w for s, w in cx.weights().items() if len(s) - 1 <= k})


def sublevel(cx: FilteredComplex, a: float) -> FilteredComplex:
    return FilteredComplex({s: w for s, w in cx.weights().items() if w <= a})


def lazy_candidates(
    cx: FilteredComplex,
    k: int,
    vertex_set: Optional[Iterable[int]] = None,
) -> List[Simplex]:
    """
    The k-simplices of the largest complex sharing the (k-1)-skeleton of `cx`.

    Each (k-1)-simplex tau is extended by common 1-skeleton neighbors greater than
    its last vertex; the remaining facets are then looked up. Every candidate has
    exactly one such tau (itself minus its largest vertex), so it is emitted once,
    and the output is lexicographic. For k = 0 the result is every vertex of
    `vertex_set` (no lower faces to check), which must then be supplied.
    """
    if k < 0:
        return []
    if k == 0:
        if vertex_set is None:
            raise ComplexError("lazy candidates in dimension 0 need the full vertex set")
        return [(v,) for v in sorted(set(int(v) for v in vertex_set))]

    prev = cx.simplices(k - 1)
    prev_set = set(prev)
    if k == 1:
        verts = [s[0] for s in prev]
        return [(a, b) for i, a in enumerate(verts) for b in verts[i + 1:]]

    adj = cx.adjacency()
    out: List[Simplex] = []
    for tau in prev:
        last = tau[-1]
        common = set(v for v in adj.get(tau[0], ()) if v > last)
        for u in tau[1:]:
            if not common:
                break
            common &= adj.get(u, set())
        for v in sorted(common):
            sigma = tau + (v,)
            # facets omitting positions 0..k-1; the one omitting v is tau itself
            if all(sigma[:i] + sigma[i + 1:] in prev_set for i in range(k)):
                out.append(sigma)
    return out


def boundary_matrix(cx: FilteredComplex, k: int, prime: int) -> SparseMatrixFp:
    """
    Matrix of the k-th boundary map over F_p: rows are (k-1)-simplices, columns
    are k-simplices, both in lexicographic order; the facet omitting position i
    carries (-1)^i.
    """
    p = require_prime(prime)
    if k < 1:
        raise ComplexError(f"boundary matrices start at k = 1, got {k}")
    rows = cx.simplices(k - 1)
    cols = cx.simplices(k)
    row_index = {s: i for i, s in enumerate(rows)}
    triples = []
    for j, s in enumerate(cols):
        for i, f in enumerate(facets(s)):
            r = row_index.get(f)
            if r is None:
                raise ComplexError(f"facet {f} of {s} is missing; boundary is undefined")
            triples.append((r, j, 1 if i % 2 == 0 else p - 1))
    return SparseMatrixFp.from_triples((len(rows), len(cols)), triples, p)


def euler_characteristic(cx: FilteredComplex) -> int:
    return sum((-1) ** k * n for k, n in enumerate(cx.sizes()))


def star_sizes(cx: FilteredComplex, vertex: int) -> Tuple[int, ...]:
    """Number of simplices containing `vertex`, per dimension."""
    counts = [0] * (cx.dimension + 1)
    for s in cx.weights():
        if vertex in s:
            counts[len(s) - 1] += 1
    while counts and counts[-1] == 0:
        counts.pop()
    return tuple(counts)


# ---------- Barycentric subdivision ----------
@dataclass
class BarycentricEmbedding:
    """
    Flags of the complex with each flag vertex (a simplex) placed at its witness.

    `vertices[i]` is a simplex of the original complex and `coords[i]` its
    position; `flags` are strictly increasing chains, listed by length.
    """
    vertices: List[Simplex]
    coords: np.ndarray
    flags: List[Flag] = field(default_factory=list)

    def __post_init__(self):
        self._index = {s: i for i, s in enumerate(self.vertices)}

    def index(self, simplex: Simplex) -> int:
        return self._index[simplex]

    def flags_of_length(self, n: int) -> List[Flag]:
        return [f for f in self.flags if len(f) == n]

    def flag_indices(self, flag: Flag) -> Tuple[int, ...]:
        return tuple(self._index[s] for s in flag)


def barycentric_embed(
    cx: FilteredComplex,
    witness: Mapping[Simplex, Union[np.ndarray, Sequence[float]]],
    max_flag_dim: int,
) -> BarycentricEmbedding:
    vertices = [s for s, _ in cx.items()]
    missing = [s for s in vertices if s not in witness]
    if missing:
        raise ComplexError(f"no witness for simplex {missing[0]}")
    coords = np.array([np.asarray(witness[s], dtype=float) for s in vertices], dtype=float)
    if coords.ndim == 1:
        coords = coords.reshape(len(vertices), -1)

    # proper cofaces in the complex, for chaining
    members = set(vertices)
    up: Dict[Simplex, List[Simplex]] = defaultdict(list)
    for s in vertices:
        for f in faces(s):
            if f in members:
                up[f].append(s)

    flags: List[Flag] = []
    frontier: List[Flag] = [(s,) for s in vertices]
    length = 1
    while frontier and length <= max_flag_dim + 1:
        flags.extend(frontier)
        if length == max_flag_dim + 1:
            break
        nxt = [chain + (t,) for chain in frontier for t in up.get(chain[-1], ())]
        frontier = nxt
        length += 1
    order = {s: i for i, s in enumerate(vertices)}
    flags.sort(key=lambda f: (len(f), [order[s] for s in f]))
    return BarycentricEmbedding(vertices=vertices, coords=coords, flags=flags)
