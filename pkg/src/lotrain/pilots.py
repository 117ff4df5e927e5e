"""Pilot sequence assignment from a conflict-graph coloring.

Users of one color share one row of an orthonormal base; the training length
equals the number of colors. Because conflicting users never share a color,
every RRH sees mutually orthogonal pilots among the users it serves, which is
all the orthogonality the per-RRH estimator needs.
"""

from dataclasses import dataclass, field

import numpy as np

from .association import AssociationMap
from .coloring import Coloring
from .errors import ConsistencyError, ParameterError


def dft_rows(length: int) -> np.ndarray:
    """Rows of the unitary DFT matrix: an orthonormal base of C^length."""
    j, t = np.meshgrid(np.arange(length), np.arange(length), indexing="ij")
    return np.exp(-2j * np.pi * j * t / length) / np.sqrt(length) if length else np.empty((0, 0), complex)


@dataclass(frozen=True)
class PilotBook:
    """Per-user training sequences.

    Attributes:
        pilots: (n_user, length) complex rows, one per user; row k carries
            energy length * beta[k] * p0 (training power constraint met with
            equality over the training phase).
        beta: per-user training power coefficients.
        p0: power budget per channel use.
        color_of: pilot color per user for books built from a coloring,
            None for free-form books (e.g. the random baseline).
    """

    pilots: np.ndarray
    beta: np.ndarray
    p0: float
    color_of: np.ndarray | None = field(default=None)

    @property
    def n_user(self) -> int:
        return self.pilots.shape[0]

    @property
    def training_length(self) -> int:
        return self.pilots.shape[1]


def _beta_array(beta, n_user: int) -> np.ndarray:
    b = np.asarray(beta, dtype=float)
    if b.ndim == 0:
        b = np.full(n_user, float(b))
    if b.shape != (n_user,):
        raise ConsistencyError(f"beta must be scalar or length {n_user}")
    if np.any(b < 0):
        raise ParameterError("beta coefficients must be nonnegative")
    return b


def build_pilot_book(coloring: Coloring, beta=1.0, p0: float = 1.0) -> PilotBook:
    """Scaled orthonormal pilots: user k sends sqrt(length * beta_k * p0)
    times the DFT row of its color."""
    if not p0 > 0:
        raise ParameterError(f"p0 must be positive, got {p0}")
    n_user = coloring.colors.shape[0]
    b = _beta_array(beta, n_user)
    length = coloring.num_colors
    rows = dft_rows(length)
    pilots = np.sqrt(length * b * p0)[:, None] * rows[coloring.colors]
    pilots.flags.writeable = False
    return PilotBook(pilots, b, float(p0), coloring.colors)


def check_local_orthogonality(book: PilotBook, assoc: AssociationMap, tol: float = 1e-10) -> bool:
    """True iff, at every RRH, served users' pilots are pairwise orthogonal.

    Orthogonality is only required within each RRH's served set; users served
    by no common RRH may correlate arbitrarily.
    """
    if book.n_user != assoc.n_user:
        raise ConsistencyError("pilot book and association disagree on the user count")
    for users in assoc.served_users:
        if len(users) < 2:
            continue
        x = book.pilots[list(users)]
        gram = x @ x.conj().T
        np.fill_diagonal(gram, 0.0)
        if np.max(np.abs(gram)) > tol:
            return False
    return True
