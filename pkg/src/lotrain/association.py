"""RRH-user association by Chebyshev-ball sparsification.

An RRH serves exactly the users strictly inside its l-infinity ball of radius
``threshold``; everything outside is treated as unknown interference by the
estimator. ``refine`` widens each RRH's set with the nearest user of every
pilot color it is missing, which preserves local orthogonality while letting
the RRH estimate (and so cancel) more interferers.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np
from scipy.spatial import cKDTree
from scipy.spatial.distance import cdist

from .errors import ConsistencyError, ParameterError
from .geometry import NetworkLayout

if TYPE_CHECKING:
    from .coloring import Coloring


@dataclass(frozen=True)
class AssociationMap:
    """Bipartite RRH-user association.

    Attributes:
        served_users: per RRH, a tuple of served user indices, ascending.
        serving_rrhs: per user, a tuple of serving RRH indices, ascending.
        threshold: the sparsification radius the map was built with.
    """

    served_users: tuple[tuple[int, ...], ...]
    serving_rrhs: tuple[tuple[int, ...], ...]
    threshold: float

    @property
    def n_rrh(self) -> int:
        return len(self.served_users)

    @property
    def n_user(self) -> int:
        return len(self.serving_rrhs)


def _invert(served: list[tuple[int, ...]], n_user: int) -> tuple[tuple[int, ...], ...]:
    serving: list[list[int]] = [[] for _ in range(n_user)]
    for i, users in enumerate(served):
        for k in users:
            serving[k].append(i)
    # RRH indices were appended in ascending order already
    return tuple(tuple(s) for s in serving)


def sparsify(layout: NetworkLayout, threshold: float) -> AssociationMap:
    """Associate each RRH with the users at Chebyshev distance < threshold.

    The inequality is strict: a user exactly on the ball boundary is not
    served. Users served by nobody and RRHs serving nobody are legal.
    """
    if not threshold > 0:
        raise ParameterError(f"threshold must be positive, got {threshold}")
    tree = cKDTree(layout.user_xy)
    candidates = tree.query_ball_point(layout.rrh_xy, threshold, p=np.inf)
    served: list[tuple[int, ...]] = []
    for i, idxs in enumerate(candidates):
        if idxs:
            u = np.sort(np.asarray(idxs, dtype=np.intp))
            # KD range queries are inclusive; re-check strictly
            d = np.max(np.abs(layout.user_xy[u] - layout.rrh_xy[i]), axis=1)
            u = u[d < threshold]
            served.append(tuple(int(k) for k in u))
        else:
            served.append(())
    return AssociationMap(tuple(served), _invert(served, layout.n_user), float(threshold))


def refine(assoc: AssociationMap, layout: NetworkLayout, coloring: "Coloring") -> AssociationMap:
    """Extend each RRH's set with its nearest user of every missing color.

    After refinement each RRH serves exactly one user per pilot color (when every
    color class is nonempty), so it can estimate one channel per orthogonal
    pilot. Existing associations are never removed. Distance ties break toward
    the lower user index. RRHs act independently, so iteration order cannot
    affect the result.

    Raises:
        ConsistencyError: if the coloring does not cover the layout's users,
            the map and layout disagree on the RRH count, or two same-colored
            users already share an RRH in ``assoc``.
    """
    colors = np.asarray(coloring.colors)
    if colors.shape[0] != layout.n_user or assoc.n_user != layout.n_user:
        raise ConsistencyError("coloring/association must cover exactly the layout's users")
    if assoc.n_rrh != layout.n_rrh:
        raise ConsistencyError("association and layout disagree on the RRH count")
    classes = [np.flatnonzero(colors == q) for q in range(coloring.num_colors)]
    dists = cdist(layout.rrh_xy, layout.user_xy, "chebyshev")
    served: list[tuple[int, ...]] = []
    for i, users in enumerate(assoc.served_users):
        have = [int(colors[k]) for k in users]
        if len(set(have)) != len(have):
            raise ConsistencyError(f"RRH {i} serves two users of the same color")
        missing = [q for q in range(coloring.num_colors) if q not in set(have)]
        extra = []
        for q in missing:
            cls = classes[q]
            if cls.size == 0:
                continue
            # cls is ascending, argmin returns its first minimum: lowest index wins ties
            extra.append(int(cls[np.argmin(dists[i, cls])]))
        served.append(tuple(sorted(set(users) | set(extra))))
    return AssociationMap(tuple(served), _invert(served, layout.n_user), assoc.threshold)
