"""Random network layouts on a square service area.

RRHs and users are drawn independently and uniformly on [0, side]^2. All
coordinates are plain (x, y) float pairs; layouts store them as (n, 2) arrays.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError

# Bit generator used everywhere randomness is needed; recorded in config
# echoes so runs can be replayed.
RNG_ALGORITHM = "PCG64"


def _rng(seed) -> np.random.Generator:
    """Generator from an int seed or a SeedSequence."""
    return np.random.Generator(np.random.PCG64(seed))


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class NetworkLayout:
    """One realization of RRH and user positions.

    Attributes:
        side: edge length of the square service area (meters).
        rrh_xy: (n_rrh, 2) RRH positions.
        user_xy: (n_user, 2) user positions.
        seed: seed the layout was drawn from, kept for replay.
    """

    side: float
    rrh_xy: np.ndarray
    user_xy: np.ndarray
    seed: object = field(default=None, compare=False)

    @property
    def n_rrh(self) -> int:
        return self.rrh_xy.shape[0]

    @property
    def n_user(self) -> int:
        return self.user_xy.shape[0]


def generate_layout(n_rrh: int, n_user: int, side: float, seed) -> NetworkLayout:
    """Draw a layout with i.i.d. uniform positions on [0, side]^2.

    Deterministic: the same (n_rrh, n_user, side, seed) reproduces the same
    layout bit for bit. RRH positions are drawn before user positions.
    """
    if n_rrh < 1 or n_user < 1:
        raise ParameterError(f"need at least one RRH and one user, got {n_rrh}, {n_user}")
    if not side > 0:
        raise ParameterError(f"side must be positive, got {side}")
    rng = _rng(seed)
    rrh_xy = rng.uniform(0.0, side, size=(n_rrh, 2))
    user_xy = rng.uniform(0.0, side, size=(n_user, 2))
    return NetworkLayout(float(side), _frozen(rrh_xy), _frozen(user_xy), seed)


def dist_linf(a, b) -> float:
    """Chebyshev distance max(|ax - bx|, |ay - by|) between two points."""
    return float(max(abs(a[0] - b[0]), abs(a[1] - b[1])))


def user_density(layout: NetworkLayout) -> float:
    """Users per unit area: n_user / side**2."""
    return layout.n_user / layout.side**2
