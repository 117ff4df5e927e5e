"""Experiment harness: reproducible studies behind each figure-style result.

Five runners, one per CLI subcommand:

  run_scaling   normalized training length vs user count, against the bound
  run_density   distribution of per-RRH served-set sizes
  run_compare   throughput of the proposed scheme vs baselines over SNR
  run_sweep_k   throughput vs user count at fixed radius
  run_sweep_r   throughput vs sparsification radius, flagging infeasible radii

Every runner maps independent per-trial payloads (seeded by (master seed,
trial index) only) and aggregates in trial order, so output is byte-identical
at any worker count. Schemes inside one trial share the layout, small-scale
fading, and training noise draws: paired comparisons, not independent ones.
"""

import hashlib
import json
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from ._parallel import pool_map
from .association import AssociationMap, refine, sparsify
from .channel import (
    FADING_SALT,
    LAYOUT_SALT,
    NOISE_SALT,
    SCHEME_SALT,
    complex_gaussian,
    data_power_coefficients,
    generate_channel,
    interference_variance,
    mmse_estimate,
    snr_db_to_noise_power,
    throughput_lower_bound,
)
from .coloring import dsatur
from .errors import ConsistencyError, ParameterError, TrainingLengthError
from .geometry import RNG_ALGORITHM, _frozen, _rng, generate_layout
from .graphs import build_conflict_graph, build_proximity_graph, max_degree
from .pilots import PilotBook, _beta_array, build_pilot_book, dft_rows
from .scaling import chromatic_scaling_bound, degree_scaling_bound, radius_for_rho

NATS_TO_BITS = 1.0 / np.log(2.0)

SCHEMES = ("proposed", "refined", "random-pilot", "global-orthogonal")
_SCHEME_STREAM = {"random-pilot": 1, "global-orthogonal": 2}

CSV_HEADER = "experiment,scheme,K,N,r0,r,T,eta,snr_db,trials,metric,value,stderr,seed,config_hash"


@dataclass(frozen=True)
class ExperimentConfig:
    """Fully resolved parameters of one experiment run.

    Defaults follow the reference simulation setup: a 100 m square, path-loss
    exponent 3.5, coherence time 100, unit powers, load factor rho = 0.5.
    Fields irrelevant to a given experiment may stay None; each runner
    validates what it needs.
    """

    experiment: str
    n_rrh: int
    n_user: int | None = None
    k_grid: tuple[int, ...] | None = None
    side: float = 100.0
    threshold: float | None = None
    r_grid: tuple[float, ...] | None = None
    rho: float | None = None
    t_coherence: int = 100
    eta: float = 3.5
    beta: float = 1.0
    p0: float = 1.0
    snr_db: tuple[float, ...] = (20.0,)
    schemes: tuple[str, ...] = ("proposed",)
    trials: int = 100
    seed: int = 0
    resample_layout: str = "per-trial"
    min_distance: float = 1.0
    workers: int = 1

    def __post_init__(self):
        if self.trials < 1:
            raise ParameterError(f"trials must be >= 1, got {self.trials}")
        if self.seed < 0:
            raise ParameterError(f"seed must be nonnegative, got {self.seed}")
        if self.n_rrh < 1:
            raise ParameterError("n_rrh must be >= 1")
        if self.workers < 1:
            raise ParameterError("workers must be >= 1")
        if self.resample_layout not in ("per-trial", "fixed"):
            raise ParameterError(f"resample_layout must be 'per-trial' or 'fixed'")
        for s in self.schemes:
            if s not in SCHEMES:
                raise ParameterError(f"unknown scheme {s!r}; choose from {SCHEMES}")
        if not self.snr_db:
            raise ParameterError("snr_db grid must be nonempty")


_TUPLE_FIELDS = {"k_grid", "r_grid", "snr_db", "schemes"}


def load_config(path) -> dict:
    """Parse a flat ``key = value`` file with JSON-typed values, # comments."""
    mapping = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, val = line.partition("=")
            if not sep:
                raise ParameterError(f"{path}:{lineno}: expected 'key = value'")
            try:
                mapping[key.strip()] = json.loads(val.strip())
            except json.JSONDecodeError as exc:
                raise ParameterError(f"{path}:{lineno}: bad value: {exc}") from exc
    return mapping


def config_from_mapping(experiment: str, mapping: dict) -> ExperimentConfig:
    """Build a config for one experiment kind, rejecting unknown keys."""
    known = {f.name for f in fields(ExperimentConfig)} - {"experiment"}
    unknown = set(mapping) - known
    if unknown:
        raise ParameterError(f"unknown config keys: {sorted(unknown)}")
    payload = dict(mapping)
    for key in _TUPLE_FIELDS & set(payload):
        val = payload[key]
        if not isinstance(val, (list, tuple)) or not val:
            raise ParameterError(f"{key} must be a nonempty list")
        payload[key] = tuple(val)
    return ExperimentConfig(experiment=experiment, **payload)


def config_hash(cfg: ExperimentConfig) -> str:
    """Short stable digest of the fully resolved config, for replay audits."""
    payload = asdict(cfg)
    # worker count never changes the numbers, so it must not change the hash
    payload.pop("workers")
    blob = json.dumps({**payload, "rng": RNG_ALGORITHM}, sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()[:12]


@dataclass(frozen=True)
class ResultRow:
    """One CSV record; field order matches the CSV schema."""

    experiment: str
    scheme: str
    k: int
    n: int
    r0: float
    r: float
    t: int
    eta: float
    snr_db: float | None
    trials: int
    metric: str
    value: float
    stderr: float | None
    seed: int
    config_hash: str


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, str):
        return v
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def emit_csv(rows: list, path) -> None:
    """Write rows under the pinned header. Refuses an empty row list."""
    if not rows:
        raise ConsistencyError("refusing to write a CSV with no result rows")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(CSV_HEADER + "\n")
        for row in rows:
            cells = (
                row.experiment, row.scheme, row.k, row.n, row.r0, row.r, row.t,
                row.eta, row.snr_db, row.trials, row.metric, row.value,
                row.stderr, row.seed, row.config_hash,
            )
            fh.write(",".join(_csv_cell(c) for c in cells) + "\n")


def _mean_se(values) -> tuple[float, float]:
    a = np.asarray(values, dtype=float)
    se = float(np.std(a, ddof=1) / np.sqrt(a.size)) if a.size > 1 else 0.0
    return float(np.mean(a)), se


def _resolve_threshold(cfg: ExperimentConfig, n_user: int) -> float:
    """Fixed radius if configured, else the density-matched radius for rho."""
    if cfg.threshold is not None:
        if not cfg.threshold > 0:
            raise ParameterError("threshold must be positive")
        return float(cfg.threshold)
    if cfg.rho is not None:
        return radius_for_rho(n_user, n_user / cfg.side**2, cfg.rho)
    raise ParameterError(f"{cfg.experiment}: config needs 'threshold' or 'rho'")


def _layout_seed(seed: int, resample: str, trial: int) -> np.random.SeedSequence:
    if resample == "per-trial":
        return np.random.SeedSequence(seed, spawn_key=(LAYOUT_SALT, trial))
    return np.random.SeedSequence(seed, spawn_key=(LAYOUT_SALT,))


# ---------------------------------------------------------------- baselines

def baseline_random_pilots(length: int, n_user: int, beta=1.0, p0: float = 1.0,
                           rng: np.random.Generator | None = None) -> PilotBook:
    """Independent CSCG pilot per user, matched in length and training power.

    Each row is normalized so the power constraint is met with equality, like
    the structured pilots; only the (local) orthogonality is given up.
    """
    if length < 1:
        raise ParameterError(f"length must be >= 1, got {length}")
    if not p0 > 0:
        raise ParameterError(f"p0 must be positive, got {p0}")
    if rng is None:
        rng = np.random.default_rng()
    b = _beta_array(beta, n_user)
    g = complex_gaussian(rng, (n_user, length))
    norms = np.linalg.norm(g, axis=1)
    pilots = g * (np.sqrt(length * b * p0) / norms)[:, None]
    return PilotBook(_frozen(pilots), b, float(p0), None)


def baseline_global_orthogonal(t_coherence: int, n_user: int,
                               rng: np.random.Generator | None = None,
                               beta: float = 1.0, p0: float = 1.0):
    """Classical network-wide orthogonal training.

    Half the frame is training, so at most t_coherence/2 users can be active;
    a uniformly random subset that size is selected (all users when fewer).
    Active users get rows of an orthonormal base scaled to the power
    constraint; inactive users transmit nothing in either phase.

    Returns (active_indices, PilotBook).
    """
    if t_coherence < 2 or t_coherence % 2:
        raise ParameterError(f"t_coherence must be even and >= 2, got {t_coherence}")
    if rng is None:
        rng = np.random.default_rng()
    cap = t_coherence // 2
    if n_user <= cap:
        active = np.arange(n_user, dtype=np.intp)
    else:
        active = np.sort(rng.choice(n_user, size=cap, replace=False)).astype(np.intp)
    length = active.size
    b = np.zeros(n_user)
    b[active] = beta
    pilots = np.zeros((n_user, length), dtype=complex)
    pilots[active] = np.sqrt(length * beta * p0) * dft_rows(length)
    return _frozen(active), PilotBook(_frozen(pilots), _frozen(b), float(p0), None)


def _global_orthogonal_assoc(n_rrh: int, active: np.ndarray, n_user: int) -> AssociationMap:
    # every RRH estimates every active user; association is not distance-based
    act = tuple(int(k) for k in active)
    act_set = set(act)
    all_rrh = tuple(range(n_rrh))
    serving = tuple(all_rrh if k in act_set else () for k in range(n_user))
    return AssociationMap((act,) * n_rrh, serving, float("inf"))


# ------------------------------------------------------------ trial kernels

def _coloring_trial(p: dict) -> dict:
    layout = generate_layout(p["n_rrh"], p["n_user"], p["side"],
                             _layout_seed(p["seed"], p["resample_layout"], p["trial"]))
    shared = build_conflict_graph(sparsify(layout, p["threshold"]))
    prox = build_proximity_graph(layout, p["threshold"])
    return {
        "colors_shared": dsatur(shared).num_colors,
        "colors_prox": dsatur(prox).num_colors,
        "maxdeg_shared": max_degree(shared),
        "maxdeg_prox": max_degree(prox),
    }


def _density_trial(p: dict) -> dict:
    layout = generate_layout(p["n_rrh"], p["n_user"], p["side"],
                             _layout_seed(p["seed"], p["resample_layout"], p["trial"]))
    assoc = sparsify(layout, p["threshold"])
    counts = np.array([len(u) for u in assoc.served_users])
    return {
        "histogram": np.bincount(counts),
        "mean_served": float(np.mean(counts)),
        "colors": dsatur(build_conflict_graph(assoc)).num_colors,
    }


def _throughput_trial(p: dict) -> dict:
    """All configured schemes at all SNRs on shared random draws."""
    seed, trial = p["seed"], p["trial"]
    n_user, t_coh, p0 = p["n_user"], p["t_coherence"], p["p0"]
    layout = generate_layout(p["n_rrh"], n_user, p["side"],
                             _layout_seed(seed, p["resample_layout"], trial))
    assoc = sparsify(layout, p["threshold"])
    col = dsatur(build_conflict_graph(assoc))
    chi = col.num_colors
    needs_coloring = any(s != "global-orthogonal" for s in p["schemes"])
    if needs_coloring and chi >= t_coh:
        if p["tolerate_infeasible"]:
            return {"infeasible": chi}
        raise TrainingLengthError(
            f"training length {chi} reaches the coherence time {t_coh}"
        )
    chan = generate_channel(layout, p["eta"],
                            np.random.SeedSequence(seed, spawn_key=(FADING_SALT, trial)),
                            p["min_distance"])
    # one standard-normal noise block per trial; schemes slice their training
    # length and scale by sqrt(n0), so comparisons are paired
    z0 = complex_gaussian(_rng(np.random.SeedSequence(seed, spawn_key=(NOISE_SALT, trial))),
                          (p["n_rrh"], t_coh))
    rates: dict = {}
    lengths: dict = {}
    for scheme in p["schemes"]:
        if scheme == "proposed":
            a_s, book = assoc, build_pilot_book(col, p["beta"], p0)
        elif scheme == "refined":
            a_s, book = refine(assoc, layout, col), build_pilot_book(col, p["beta"], p0)
        elif scheme == "random-pilot":
            rng_s = _rng(np.random.SeedSequence(
                seed, spawn_key=(SCHEME_SALT, trial, _SCHEME_STREAM[scheme])))
            a_s = assoc
            book = baseline_random_pilots(chi, n_user, p["beta"], p0, rng_s)
        else:  # global-orthogonal
            rng_s = _rng(np.random.SeedSequence(
                seed, spawn_key=(SCHEME_SALT, trial, _SCHEME_STREAM[scheme])))
            active, book = baseline_global_orthogonal(t_coh, n_user, rng_s, p["beta"], p0)
            a_s = _global_orthogonal_assoc(p["n_rrh"], active, n_user)
        length = book.training_length
        alpha = length / t_coh
        if scheme == "global-orthogonal":
            bp = np.zeros(n_user)
            bp[active] = data_power_coefficients(p["beta"], alpha, active.size)
        else:
            bp = data_power_coefficients(p["beta"], alpha, n_user)
        lengths[scheme] = length
        for snr in p["snr_db"]:
            n0 = snr_db_to_noise_power(snr, p0)
            est = mmse_estimate(chan, book, a_s, n0, noise=np.sqrt(n0) * z0[:, :length])
            rates[(scheme, snr)] = throughput_lower_bound(est, chan, alpha, bp, p0)
    return {"rates": rates, "lengths": lengths, "chi": chi}


def _trial_payload(cfg: ExperimentConfig, **extra) -> dict:
    base = dict(
        seed=cfg.seed, n_rrh=cfg.n_rrh, side=cfg.side, t_coherence=cfg.t_coherence,
        eta=cfg.eta, beta=cfg.beta, p0=cfg.p0, resample_layout=cfg.resample_layout,
        min_distance=cfg.min_distance, schemes=cfg.schemes, snr_db=cfg.snr_db,
        tolerate_infeasible=False,
    )
    base.update(extra)
    return base


# ----------------------------------------------------------------- runners

def run_scaling(cfg: ExperimentConfig) -> list:
    """Average DSATUR color counts on both graphs across the user-count grid,
    normalized by delta*r**2, alongside the asymptotic bounds."""
    if not cfg.k_grid:
        raise ParameterError("scaling requires k_grid")
    if cfg.rho is None:
        raise ParameterError("scaling requires rho (the radius tracks each K)")
    digest = config_hash(cfg)
    rows = []
    payloads = []
    for k in cfg.k_grid:
        r = radius_for_rho(k, k / cfg.side**2, cfg.rho)
        for t in range(cfg.trials):
            payloads.append(_trial_payload(cfg, n_user=k, threshold=r, trial=t))
    results = pool_map(_coloring_trial, payloads, cfg.workers)
    chrom_bound = chromatic_scaling_bound(cfg.rho)
    deg_bound = degree_scaling_bound(cfg.rho)
    for j, k in enumerate(cfg.k_grid):
        r = radius_for_rho(k, k / cfg.side**2, cfg.rho)
        norm = (k / cfg.side**2) * r**2  # equals rho * ln(k)
        chunk = results[j * cfg.trials:(j + 1) * cfg.trials]

        def row(scheme, metric, value, stderr, snr=None):
            rows.append(ResultRow(cfg.experiment, scheme, k, cfg.n_rrh, cfg.side, r,
                                  cfg.t_coherence, cfg.eta, snr, cfg.trials, metric,
                                  value, stderr, cfg.seed, digest))

        for scheme, key in (("shared-rrh", "colors_shared"), ("proximity-2r", "colors_prox")):
            vals = [c[key] for c in chunk]
            m, se = _mean_se(vals)
            row(scheme, "mean_colors", m, se)
            m, se = _mean_se([v / norm for v in vals])
            row(scheme, "normalized_colors", m, se)
        for scheme, key in (("shared-rrh", "maxdeg_shared"), ("proximity-2r", "maxdeg_prox")):
            m, se = _mean_se([(c[key] + 1) / norm for c in chunk])
            row(scheme, "normalized_max_degree_plus_one", m, se)
        exceed = sum(1 for c in chunk if c["colors_shared"] > c["colors_prox"])
        row("diagnostic", "dsatur_subgraph_exceeds_count", float(exceed), None)
        row("theory", "chromatic_scaling_bound", chrom_bound, None)
        row("theory", "degree_scaling_bound", deg_bound, None)
    return rows


def run_density(cfg: ExperimentConfig) -> list:
    """Empirical distribution of served-set sizes |U_i| plus the mean color
    count of the plain scheme at the same radius."""
    if cfg.n_user is None:
        raise ParameterError("density requires n_user")
    r = _resolve_threshold(cfg, cfg.n_user)
    digest = config_hash(cfg)
    payloads = [_trial_payload(cfg, n_user=cfg.n_user, threshold=r, trial=t)
                for t in range(cfg.trials)]
    results = pool_map(_density_trial, payloads, cfg.workers)
    width = max(res["histogram"].size for res in results)
    pdf = np.zeros((len(results), width))
    for i, res in enumerate(results):
        h = res["histogram"]
        pdf[i, : h.size] = h / h.sum()
    rows = []

    def row(metric, value, stderr):
        rows.append(ResultRow(cfg.experiment, "proposed", cfg.n_user, cfg.n_rrh,
                              cfg.side, r, cfg.t_coherence, cfg.eta, None, cfg.trials,
                              metric, value, stderr, cfg.seed, digest))

    for j in range(width):
        m, se = _mean_se(pdf[:, j])
        row(f"served_count_pdf_{j}", m, se)
    m, se = _mean_se([res["mean_served"] for res in results])
    row("mean_served_users", m, se)
    m, se = _mean_se([res["colors"] for res in results])
    row("mean_colors", m, se)
    return rows


def _throughput_rows(cfg: ExperimentConfig, k: int, r: float, results: list,
                     rows: list, digest: str) -> None:
    """Aggregate one grid point's trial results into CSV rows (rates in bits)."""
    feasible = [res for res in results if "infeasible" not in res]
    if len(feasible) < len(results):
        boundary = max(res["infeasible"] for res in results if "infeasible" in res)
        rows.append(ResultRow(cfg.experiment, "proposed", k, cfg.n_rrh, cfg.side, r,
                              cfg.t_coherence, cfg.eta, None, cfg.trials,
                              "infeasible_training_length", float(boundary), None,
                              cfg.seed, digest))
        return
    for scheme in cfg.schemes:
        for snr in cfg.snr_db:
            m, se = _mean_se([res["rates"][(scheme, snr)] for res in feasible])
            rows.append(ResultRow(cfg.experiment, scheme, k, cfg.n_rrh, cfg.side, r,
                                  cfg.t_coherence, cfg.eta, snr, cfg.trials,
                                  "throughput_bits_per_use", m * NATS_TO_BITS,
                                  se * NATS_TO_BITS, cfg.seed, digest))
        m, se = _mean_se([res["lengths"][scheme] for res in feasible])
        rows.append(ResultRow(cfg.experiment, scheme, k, cfg.n_rrh, cfg.side, r,
                              cfg.t_coherence, cfg.eta, None, cfg.trials,
                              "training_length", m, se, cfg.seed, digest))


def run_compare(cfg: ExperimentConfig) -> list:
    """Throughput of every configured scheme across the SNR grid."""
    if cfg.n_user is None:
        raise ParameterError("compare requires n_user")
    r = _resolve_threshold(cfg, cfg.n_user)
    digest = config_hash(cfg)
    payloads = [_trial_payload(cfg, n_user=cfg.n_user, threshold=r, trial=t)
                for t in range(cfg.trials)]
    results = pool_map(_throughput_trial, payloads, cfg.workers)
    rows: list = []
    _throughput_rows(cfg, cfg.n_user, r, results, rows, digest)
    return rows


def run_sweep_k(cfg: ExperimentConfig) -> list:
    """Throughput across the user-count grid at fixed (or rho-matched) radius."""
    if not cfg.k_grid:
        raise ParameterError("sweep-k requires k_grid")
    digest = config_hash(cfg)
    payloads = []
    for k in cfg.k_grid:
        r = _resolve_threshold(cfg, k)
        payloads.extend(_trial_payload(cfg, n_user=k, threshold=r, trial=t)
                        for t in range(cfg.trials))
    results = pool_map(_throughput_trial, payloads, cfg.workers)
    rows: list = []
    for j, k in enumerate(cfg.k_grid):
        r = _resolve_threshold(cfg, k)
        chunk = results[j * cfg.trials:(j + 1) * cfg.trials]
        _throughput_rows(cfg, k, r, chunk, rows, digest)
    return rows


def run_sweep_r(cfg: ExperimentConfig) -> list:
    """Throughput across a radius grid; radii whose coloring reaches the
    coherence time are recorded as infeasible instead of aborting the run."""
    if cfg.n_user is None:
        raise ParameterError("sweep-r requires n_user")
    if not cfg.r_grid:
        raise ParameterError("sweep-r requires r_grid")
    if any(not r > 0 for r in cfg.r_grid):
        raise ParameterError("r_grid radii must be positive")
    digest = config_hash(cfg)
    payloads = []
    for r in cfg.r_grid:
        payloads.extend(
            _trial_payload(cfg, n_user=cfg.n_user, threshold=float(r), trial=t,
                           tolerate_infeasible=True)
            for t in range(cfg.trials))
    results = pool_map(_throughput_trial, payloads, cfg.workers)
    rows: list = []
    for j, r in enumerate(cfg.r_grid):
        chunk = results[j * cfg.trials:(j + 1) * cfg.trials]
        _throughput_rows(cfg, cfg.n_user, float(r), chunk, rows, digest)
    return rows


RUNNERS = {
    "scaling": run_scaling,
    "density": run_density,
    "compare": run_compare,
    "sweep-k": run_sweep_k,
    "sweep-r": run_sweep_r,
}
