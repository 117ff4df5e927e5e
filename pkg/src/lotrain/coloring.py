"""Greedy saturation-degree coloring of conflict graphs.

The color classes become pilot groups: the number of colors is the training
length, so fewer colors means a shorter training phase. DSATUR picks, at every
step, the uncolored vertex with the most distinctly-colored neighbors; it is
exact on bipartite graphs and never needs more than max_degree + 1 colors.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConsistencyError
from .graphs import ConflictGraph


@dataclass(frozen=True)
class Coloring:
    """Proper vertex coloring with contiguous colors 0..num_colors-1."""

    colors: np.ndarray
    num_colors: int

    def __post_init__(self):
        c = np.asarray(self.colors, dtype=np.intp)
        c.flags.writeable = False
        object.__setattr__(self, "colors", c)
        used = np.unique(c)
        expect = np.arange(self.num_colors)
        if used.shape != expect.shape or np.any(used != expect):
            raise ConsistencyError("colors used must be exactly 0..num_colors-1")


def dsatur(g: ConflictGraph) -> Coloring:
    """Deterministic DSATUR coloring.

    Vertex selection: maximum saturation degree (count of distinct colors on
    neighbors), ties by maximum ordinary degree, remaining ties by lowest
    index. The chosen vertex gets the smallest color unused on its neighbors.
    """
    n = g.n_vertices
    colors = np.full(n, -1, dtype=np.intp)
    degree = np.array([nb.size for nb in g.neighbors], dtype=np.int64)
    saturation = np.zeros(n, dtype=np.int64)
    seen: list[set] = [set() for _ in range(n)]
    for _ in range(n):
        # composite key ranks saturation first, then degree; degree < n+1 so
        # the two never interfere. argmax takes the first (lowest-index) max.
        key = saturation * (n + 1) + degree
        key[colors >= 0] = -1
        v = int(np.argmax(key))
        used = seen[v]
        c = 0
        while c in used:
            c += 1
        colors[v] = c
        for m in g.neighbors[v]:
            if colors[m] < 0 and c not in seen[m]:
                seen[m].add(c)
                saturation[m] += 1
    num = int(colors.max()) + 1 if n else 0
    return Coloring(colors, num)


def validate_coloring(g: ConflictGraph, coloring: Coloring) -> bool:
    """True iff no edge joins two same-colored vertices."""
    c = coloring.colors
    if c.shape[0] != g.n_vertices:
        raise ConsistencyError("coloring does not cover the graph's vertices")
    e = g.edge_array
    return bool(np.all(c[e[:, 0]] != c[e[:, 1]])) if e.size else True


def to_color_lines(coloring: Coloring) -> str:
    """Plain-text serialization: one ``user_index color`` pair per line."""
    return "".join(f"{k} {int(c)}\n" for k, c in enumerate(coloring.colors))


def write_coloring(coloring: Coloring, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(to_color_lines(coloring))


def read_coloring(path) -> Coloring:
    with open(path, encoding="utf-8") as fh:
        rows = [tuple(int(t) for t in line.split()) for line in fh if line.strip()]
    idx = [k for k, _ in rows]
    if sorted(idx) != list(range(len(rows))):
        raise ConsistencyError("coloring file must list every user exactly once")
    colors = np.empty(len(rows), dtype=np.intp)
    for k, c in rows:
        colors[k] = c
    num = int(colors.max()) + 1 if len(rows) else 0
    return Coloring(colors, num)
