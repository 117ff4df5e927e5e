"""Pilot-conflict graphs over users.

Two users conflict when some RRH serves both; assigning them distinct pilot
colors is exactly what keeps each RRH's in-set pilots orthogonal. The
proximity graph (Chebyshev distance < 2r) is a deterministic supergraph of the
conflict graph: any shared RRH lies strictly within r of both users, so the
users are strictly within 2r of each other.
"""

from functools import cached_property

import numpy as np
from scipy.spatial import cKDTree

from .association import AssociationMap
from .errors import ConsistencyError, GraphSizeError, ParameterError
from .geometry import NetworkLayout


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.flags.writeable = False
    return a


def _adjacency(n: int, edges: np.ndarray) -> tuple[np.ndarray, ...]:
    """Sorted neighbor arrays from an (E, 2) array of unique k < m edges."""
    if edges.shape[0] == 0:
        empty = _frozen(np.empty(0, dtype=np.intp))
        return tuple(empty for _ in range(n))
    src = np.concatenate([edges[:, 0], edges[:, 1]])
    dst = np.concatenate([edges[:, 1], edges[:, 0]])
    order = np.argsort(src, kind="stable")
    dst = dst[order]
    counts = np.bincount(src, minlength=n)
    parts = np.split(dst, np.cumsum(counts)[:-1])
    return tuple(_frozen(np.sort(p).astype(np.intp)) for p in parts)


class ConflictGraph:
    """Undirected simple graph on user indices 0..n_vertices-1."""

    def __init__(self, n_vertices: int, neighbors: tuple[np.ndarray, ...], kind: str):
        self.n_vertices = int(n_vertices)
        self.neighbors = neighbors
        self.kind = kind

    @classmethod
    def from_edges(cls, n_vertices: int, edges, kind: str = "custom") -> "ConflictGraph":
        """Build from an iterable of (k, m) pairs; duplicates are merged."""
        e = np.asarray(list(edges), dtype=np.int64).reshape(-1, 2)
        if e.size:
            if e.min() < 0 or e.max() >= n_vertices:
                raise ConsistencyError("edge endpoint out of range")
            if np.any(e[:, 0] == e[:, 1]):
                raise ConsistencyError("self loops are not allowed")
            e = np.sort(e, axis=1)
            e = np.unique(e, axis=0)
        return cls(n_vertices, _adjacency(n_vertices, e), kind)

    @cached_property
    def edge_array(self) -> np.ndarray:
        """(E, 2) array of k < m edges in lexicographic order."""
        pairs = [
            np.column_stack((np.full(nb[nb > k].size, k), nb[nb > k]))
            for k, nb in enumerate(self.neighbors)
            if nb.size
        ]
        if not pairs:
            return np.empty((0, 2), dtype=np.intp)
        return _frozen(np.concatenate(pairs))

    @cached_property
    def _edge_keys(self) -> frozenset:
        e = self.edge_array
        return frozenset((e[:, 0] * self.n_vertices + e[:, 1]).tolist())

    def has_edge(self, k: int, m: int) -> bool:
        if k > m:
            k, m = m, k
        return k * self.n_vertices + m in self._edge_keys

    @property
    def n_edges(self) -> int:
        return self.edge_array.shape[0]


def build_conflict_graph(assoc: AssociationMap) -> ConflictGraph:
    """Edge between two users iff some RRH serves both."""
    n = assoc.n_user
    pairs = []
    for users in assoc.served_users:
        m = len(users)
        if m >= 2:
            a = np.asarray(users, dtype=np.int64)
            iu, ju = np.triu_indices(m, 1)
            pairs.append(np.column_stack((a[iu], a[ju])))
    if pairs:
        e = np.unique(np.concatenate(pairs), axis=0)
    else:
        e = np.empty((0, 2), dtype=np.int64)
    return ConflictGraph(n, _adjacency(n, e), "shared-rrh")


def build_proximity_graph(layout: NetworkLayout, threshold: float) -> ConflictGraph:
    """Edge between two users iff their Chebyshev distance is < 2*threshold.

    Needs only user positions, not the association map; it upper-bounds the
    shared-RRH graph built at the same threshold.
    """
    if not threshold > 0:
        raise ParameterError(f"threshold must be positive, got {threshold}")
    tree = cKDTree(layout.user_xy)
    e = tree.query_pairs(2.0 * threshold, p=np.inf, output_type="ndarray")
    if e.size:
        # the KD query is inclusive; keep strictly closer pairs only
        gap = layout.user_xy[e[:, 0]] - layout.user_xy[e[:, 1]]
        e = e[np.max(np.abs(gap), axis=1) < 2.0 * threshold]
    return ConflictGraph(layout.n_user, _adjacency(layout.n_user, e), "proximity-2r")


def max_degree(g: ConflictGraph) -> int:
    """Largest vertex degree; 0 for edgeless graphs."""
    if g.n_vertices == 0:
        return 0
    return max(nb.size for nb in g.neighbors)


def is_subgraph(sub: ConflictGraph, sup: ConflictGraph) -> bool:
    """True iff every edge of ``sub`` is an edge of ``sup`` (same vertex set)."""
    if sub.n_vertices != sup.n_vertices:
        raise ConsistencyError("graphs must share the same vertex count")
    return sub._edge_keys <= sup._edge_keys


def find_coloring(g: ConflictGraph, n_colors: int, vertex_limit: int = 16):
    """Proper coloring with at most n_colors colors, or None if impossible.

    Complete backtracking search over canonical assignments (each new vertex
    may open at most one fresh color), so a None result is a proof of
    non-colorability, not a heuristic failure. Exponential time: guarded by
    vertex_limit.
    """
    if g.n_vertices > vertex_limit:
        raise GraphSizeError(
            f"exact search on {g.n_vertices} vertices exceeds the limit {vertex_limit}"
        )
    if n_colors < 0:
        raise ParameterError("n_colors must be nonnegative")
    n = g.n_vertices
    if n == 0:
        return np.empty(0, dtype=np.intp)
    if n_colors == 0:
        return None
    # high-degree vertices first: fail early
    order = sorted(range(n), key=lambda v: -g.neighbors[v].size)
    colors = np.full(n, -1, dtype=np.intp)

    def assign(pos: int, used: int) -> bool:
        if pos == n:
            return True
        v = order[pos]
        forbidden = {int(colors[u]) for u in g.neighbors[v] if colors[u] >= 0}
        for c in range(min(used + 1, n_colors)):
            if c in forbidden:
                continue
            colors[v] = c
            if assign(pos + 1, max(used, c + 1)):
                return True
        colors[v] = -1
        return False

    return _frozen(colors) if assign(0, 0) else None


def exact_chromatic_number(g: ConflictGraph, vertex_limit: int = 16) -> int:
    """Minimum number of colors of any proper coloring, by exhaustive search."""
    if g.n_vertices == 0:
        return 0
    for m in range(1, g.n_vertices + 1):
        if find_coloring(g, m, vertex_limit=vertex_limit) is not None:
            return m
    raise AssertionError("unreachable: n colors always suffice")


def to_edge_list(g: ConflictGraph) -> str:
    """Plain-text serialization: one ``k m`` pair per line, 0-based, sorted."""
    return "".join(f"{k} {m}\n" for k, m in g.edge_array)


def write_edge_list(g: ConflictGraph, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(to_edge_list(g))


def read_edge_list(path, n_vertices: int, kind: str = "custom") -> ConflictGraph:
    """Inverse of write_edge_list; needs the vertex count (isolated vertices
    leave no trace in an edge list)."""
    with open(path, encoding="utf-8") as fh:
        edges = [tuple(int(t) for t in line.split()) for line in fh if line.strip()]
    return ConflictGraph.from_edges(n_vertices, edges, kind)
