"""Block-fading channel model, per-RRH MMSE estimation, and throughput.

Frames of T channel uses split into a training phase of length alpha*T and a
data phase of length (1-alpha)*T. During training each RRH correlates its
received signal against the pilots of the users it serves; channels of users
it does not serve are never estimated (estimate 0, error variance 1) and their
pilot energy enters the estimator as colored interference. The throughput
metric treats channel-estimation error as additional Gaussian noise, so it is
a lower bound on the ergodic achievable sum rate.

All rates are in nats per channel use; CSV emission converts to bits.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.spatial.distance import cdist

from .association import AssociationMap, refine, sparsify
from .coloring import dsatur
from .errors import (
    ConsistencyError,
    DegenerateGeometryError,
    ParameterError,
    TrainingLengthError,
)
from .geometry import RNG_ALGORITHM, NetworkLayout, generate_layout, _frozen, _rng
from .graphs import build_conflict_graph
from .pilots import PilotBook, build_pilot_book

# SeedSequence spawn-key salts; shared with the experiment harness so every
# consumer of a master seed draws from disjoint streams.
LAYOUT_SALT = 1
FADING_SALT = 2
NOISE_SALT = 3
SCHEME_SALT = 4


def complex_gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    """Circularly-symmetric complex Gaussian entries of unit variance."""
    z = rng.standard_normal(size=(2,) + tuple(shape))
    return (z[0] + 1j * z[1]) / np.sqrt(2.0)


def snr_db_to_noise_power(snr_db: float, p0: float = 1.0) -> float:
    """Noise power N0 with SNR defined as p0 / N0."""
    return p0 * 10.0 ** (-snr_db / 10.0)


@dataclass(frozen=True)
class ChannelRealization:
    """One block-fading draw.

    small_scale: (n_rrh, n_user) unit-variance complex fading.
    large_scale: (n_rrh, n_user) amplitude gains distance**(-eta/2).
    """

    small_scale: np.ndarray
    large_scale: np.ndarray
    pathloss_exponent: float
    seed: object = field(default=None, compare=False)

    @property
    def n_rrh(self) -> int:
        return self.small_scale.shape[0]

    @property
    def n_user(self) -> int:
        return self.small_scale.shape[1]


def generate_channel(layout: NetworkLayout, eta: float, seed, min_distance: float = 1.0) -> ChannelRealization:
    """Draw small-scale fading and compute large-scale gains for a layout.

    Path loss uses the Euclidean distance, floored at ``min_distance`` so a
    user standing almost on top of an RRH cannot produce an unbounded gain.
    Exactly co-located pairs are rejected.
    """
    if not eta > 0:
        raise ParameterError(f"pathloss exponent must be positive, got {eta}")
    if not min_distance > 0:
        raise ParameterError(f"min_distance must be positive, got {min_distance}")
    d = cdist(layout.rrh_xy, layout.user_xy)
    if np.any(d == 0.0):
        raise DegenerateGeometryError("a user coincides exactly with an RRH")
    gains = np.maximum(d, min_distance) ** (-eta / 2.0)
    h = complex_gaussian(_rng(seed), (layout.n_rrh, layout.n_user))
    return ChannelRealization(_frozen(h), _frozen(gains), float(eta), seed)


@dataclass(frozen=True)
class EstimationResult:
    """Per-(RRH, user) channel estimates and their error variances.

    Users outside an RRH's served set keep estimate 0 and error variance 1
    (the prior): nothing about them was learned during training.
    """

    h_hat: np.ndarray
    mse: np.ndarray
    noise_power: float


def mmse_estimate(
    chan: ChannelRealization,
    book: PilotBook,
    assoc: AssociationMap,
    n0: float,
    rng: np.random.Generator | None = None,
    noise: np.ndarray | None = None,
) -> EstimationResult:
    """Per-RRH linear MMSE estimation of served users' channels.

    Each RRH models only its served set; out-of-set users' pilots act as
    unmodeled interference whose full covariance is charged to the error
    variance. The weight formula does not assume in-set pilots orthogonal, so
    the same routine serves books without the local-orthogonality property.

    The training observation is synthesized internally. Pass ``noise``
    (shape (n_rrh, training_length), entries of variance n0) to pin the noise
    draw, or ``rng`` to control its source; otherwise a stream derived from
    the channel's seed is used.
    """
    if not n0 > 0:
        raise ParameterError(f"noise power must be positive, got {n0}")
    n_rrh, n_user = chan.small_scale.shape
    if book.n_user != n_user or assoc.n_user != n_user or assoc.n_rrh != n_rrh:
        raise ConsistencyError("channel, pilot book and association sizes disagree")
    length = book.training_length
    if noise is None:
        if rng is None:
            if chan.seed is None:
                raise ParameterError("pass rng or noise when the channel carries no seed")
            rng = _rng(np.random.SeedSequence(chan.seed, spawn_key=(NOISE_SALT,)))
        noise = np.sqrt(n0) * complex_gaussian(rng, (n_rrh, length))
    if noise.shape != (n_rrh, length):
        raise ConsistencyError(f"noise must have shape {(n_rrh, length)}")

    x = book.pilots
    received = (chan.small_scale * chan.large_scale) @ x + noise
    h_hat = np.zeros((n_rrh, n_user), dtype=complex)
    mse = np.ones((n_rrh, n_user))
    eye = np.eye(length)
    for i in range(n_rrh):
        users = assoc.served_users[i]
        if not users:
            continue
        u = np.asarray(users, dtype=np.intp)
        g = chan.large_scale[i, u]
        x_in = x[u]
        # regularized in-set pilot covariance, (length x length) Hermitian
        cov = (x_in.conj().T * g**2) @ x_in + n0 * eye
        # column k holds the conjugated weight vector for served user k
        wh = np.linalg.solve(cov, x_in.conj().T * g)
        h_hat[i, u] = received[i] @ wh
        aligned = np.real(g * np.einsum("kl,lk->k", x_in, wh))
        out = np.ones(n_user, dtype=bool)
        out[u] = False
        cross = np.abs(x[out] @ wh) ** 2
        leakage = chan.large_scale[i, out] ** 2 @ cross
        mse[i, u] = 1.0 - aligned + leakage
    return EstimationResult(_frozen(h_hat), _frozen(mse), float(n0))


def interference_variance(est: EstimationResult, chan: ChannelRealization, beta_prime, p0: float) -> np.ndarray:
    """Per-RRH variance of estimation-error interference plus noise during the
    data phase: sum_k gamma_ik^2 * beta'_k * p0 * mse_ik + n0."""
    bp = np.asarray(beta_prime, dtype=float)
    if bp.ndim == 0:
        bp = np.full(chan.n_user, float(bp))
    if bp.shape != (chan.n_user,):
        raise ConsistencyError(f"beta_prime must be scalar or length {chan.n_user}")
    if np.any(bp < 0) or not p0 > 0:
        raise ParameterError("powers must be nonnegative and p0 positive")
    return (chan.large_scale**2 * est.mse) @ (bp * p0) + est.noise_power


def throughput_lower_bound(
    est: EstimationResult,
    chan: ChannelRealization,
    alpha: float,
    beta_prime,
    p0: float,
) -> float:
    """Achievable sum rate in nats per channel use for one realization.

    (1 - alpha) * logdet(I + R_v^-1 H_hat R_x H_hat^H) with H_hat the
    estimated effective channel (estimate times large-scale gain), R_x the
    diagonal of data powers beta'_k * p0, and R_v the diagonal of
    interference-plus-noise variances. Nonnegative by construction.
    """
    if not 0 < alpha < 1:
        raise ParameterError(f"alpha must lie in (0, 1), got {alpha}")
    bp = np.asarray(beta_prime, dtype=float)
    if bp.ndim == 0:
        bp = np.full(chan.n_user, float(bp))
    sigma2 = interference_variance(est, chan, bp, p0)
    eff = est.h_hat * chan.large_scale
    s = eff * np.sqrt(bp * p0)[None, :] / np.sqrt(sigma2)[:, None]
    s = s[:, np.any(s != 0, axis=0)]
    n_rrh, n_cols = s.shape
    if n_cols == 0:
        return 0.0
    # logdet via the smaller Gram side; both sides share nonunit eigenvalues
    gram = s.conj().T @ s if n_cols <= n_rrh else s @ s.conj().T
    m = np.eye(gram.shape[0]) + gram
    chol = np.linalg.cholesky(m)
    return (1.0 - alpha) * 2.0 * float(np.sum(np.log(np.real(np.diag(chol)))))


def data_power_coefficients(beta, alpha: float, n_user: int) -> np.ndarray:
    """Data-phase coefficients beta'_k = (1 - alpha*beta_k) / (1 - alpha):
    energy unspent during training is spent during data."""
    if not 0 < alpha < 1:
        raise ParameterError(f"alpha must lie in (0, 1), got {alpha}")
    b = np.asarray(beta, dtype=float)
    if b.ndim == 0:
        b = np.full(n_user, float(b))
    bp = (1.0 - alpha * b) / (1.0 - alpha)
    if np.any(bp < 0):
        raise ParameterError("beta_k exceeds 1/alpha: training energy overdrawn")
    return bp


@dataclass(frozen=True)
class ThroughputReport:
    """Monte-Carlo summary of the throughput lower bound."""

    rate_nats: float
    stderr: float
    per_trial_rates: np.ndarray
    interference_variances: np.ndarray
    config_echo: dict


def _mc_trial(payload: dict):
    """One Monte-Carlo trial of the proposed scheme; top level for pickling."""
    seed = payload["seed"]
    trial = payload["trial"]
    if payload["resample_layout"] == "per-trial":
        layout_seed = np.random.SeedSequence(seed, spawn_key=(LAYOUT_SALT, trial))
    else:
        layout_seed = np.random.SeedSequence(seed, spawn_key=(LAYOUT_SALT,))
    layout = generate_layout(payload["n_rrh"], payload["n_user"], payload["side"], layout_seed)
    assoc = sparsify(layout, payload["threshold"])
    col = dsatur(build_conflict_graph(assoc))
    t_coherence = payload["t_coherence"]
    if col.num_colors >= t_coherence:
        raise TrainingLengthError(
            f"training length {col.num_colors} reaches the coherence time {t_coherence}"
        )
    if payload["scheme"] == "refined":
        assoc = refine(assoc, layout, col)
    book = build_pilot_book(col, payload["beta"], payload["p0"])
    chan = generate_channel(
        layout, payload["eta"], np.random.SeedSequence(seed, spawn_key=(FADING_SALT, trial)),
        payload["min_distance"],
    )
    n0 = snr_db_to_noise_power(payload["snr_db"], payload["p0"])
    noise_rng = _rng(np.random.SeedSequence(seed, spawn_key=(NOISE_SALT, trial)))
    z0 = complex_gaussian(noise_rng, (layout.n_rrh, t_coherence))
    est = mmse_estimate(chan, book, assoc, n0, noise=np.sqrt(n0) * z0[:, : book.training_length])
    alpha = book.training_length / t_coherence
    bp = data_power_coefficients(payload["beta"], alpha, layout.n_user)
    rate = throughput_lower_bound(est, chan, alpha, bp, payload["p0"])
    sigma2 = interference_variance(est, chan, bp, payload["p0"]) if payload["keep_sigma"] else None
    return rate, sigma2


def run_monte_carlo(
    n_rrh: int,
    n_user: int,
    side: float,
    threshold: float,
    *,
    trials: int,
    seed: int,
    snr_db: float = 20.0,
    scheme: str = "proposed",
    t_coherence: int = 100,
    eta: float = 3.5,
    beta: float = 1.0,
    p0: float = 1.0,
    resample_layout: str = "per-trial",
    min_distance: float = 1.0,
    workers: int = 1,
) -> ThroughputReport:
    """Average the throughput lower bound over Monte-Carlo trials.

    Deterministic given (seed, parameters) at any worker count: every trial
    draws from seed streams derived from (seed, trial index) alone, and
    aggregation runs in trial order.
    """
    from ._parallel import pool_map

    if trials < 1:
        raise ParameterError(f"trials must be >= 1, got {trials}")
    if scheme not in ("proposed", "refined"):
        raise ParameterError(f"unknown scheme {scheme!r}; baselines live in the experiment harness")
    if resample_layout not in ("per-trial", "fixed"):
        raise ParameterError(f"resample_layout must be 'per-trial' or 'fixed', got {resample_layout!r}")
    base = dict(
        n_rrh=n_rrh, n_user=n_user, side=side, threshold=threshold, seed=seed,
        snr_db=snr_db, scheme=scheme, t_coherence=t_coherence, eta=eta, beta=beta,
        p0=p0, resample_layout=resample_layout, min_distance=min_distance,
    )
    payloads = [dict(base, trial=t, keep_sigma=(t == trials - 1)) for t in range(trials)]
    results = pool_map(_mc_trial, payloads, workers)
    rates = np.array([r for r, _ in results])
    stderr = float(np.std(rates, ddof=1) / np.sqrt(trials)) if trials > 1 else 0.0
    echo = dict(base, trials=trials, workers=workers, rng=RNG_ALGORITHM)
    return ThroughputReport(float(np.mean(rates)), stderr, _frozen(rates), _frozen(results[-1][1]), echo)
