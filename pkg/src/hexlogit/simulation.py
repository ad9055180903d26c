"""Data-generating processes and the Monte Carlo harness.

Random numbers come from counter-based Philox streams keyed by
``(seed, replication, variate tag)``. Within a stream the ``t``-th uniform
belongs to triad ``t`` in row-major order, so a replication's network does not
depend on which worker draws it or in what order. Standard normals are
``ndtri(u)`` and standard logistic shocks ``logit(u)``, one uniform each.
"""

from __future__ import annotations

import logging
import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.special import logit, ndtri

from .condlogit import FitConfig
from .errors import HexLogitError, InsufficientDataError, InvalidArgumentError, NoInformationError
from .inference import critical_value
from .network import FixedEffects, TriadicNetwork, bipartite_network

log = logging.getLogger(__name__)

REGIMES = ("dense", "loglog", "logsqrt", "logn", "custom")
MODELS = ("dyad-fe", "node-fe", "dyadic")

_TAG_EPS = 0
_TAG_X = 1  # covariate p uses tag _TAG_X + p


def sparsity_scale(regime: str, n: int, delta: float | None = None) -> float:
    """The sparsity constant ``c_N`` of each regime."""
    if regime == "dense":
        return 0.0
    if regime == "loglog":
        return math.log(math.log(n))
    if regime == "logsqrt":
        return math.log(math.sqrt(n))
    if regime == "logn":
        return math.log(n)
    if regime == "custom":
        if delta is None:
            raise InvalidArgumentError("custom regime needs delta")
        return delta * math.log(n)
    raise InvalidArgumentError(f"unknown regime {regime!r}")


def tendency(r: int, n: int) -> float:
    """Node tendency ``(n - r) / (n - 1)`` for 1-based ``r``."""
    if n < 2 or not 1 <= r <= n:
        raise InvalidArgumentError(f"need 1 <= r <= n and n >= 2 (r={r}, n={n})")
    return (n - r) / (n - 1)


def tendencies(n: int) -> np.ndarray:
    return (n - np.arange(1, n + 1)) / (n - 1)


def build_fixed_effects(n: int, c_n: float) -> FixedEffects:
    """``A_ij = -(c/2)(phi_i + phi_j)`` and likewise for ``B_jk`` and ``C_ik``."""
    if c_n < 0:
        raise InvalidArgumentError("c_N must be nonnegative")
    phi = tendencies(n)
    m = -(c_n / 2) * (phi[:, None] + phi[None, :])
    return FixedEffects(m.copy(), m.copy(), m.copy())


@dataclass(frozen=True)
class NodeEffects:
    """Node-level effects (part 3 empty for the dyadic model)."""

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray


@dataclass
class SimulationConfig:
    n: int = 20
    beta0: tuple = (1.0,)
    regime: str = "dense"
    delta: float | None = None
    replications: int = 200
    seed: int = 42
    model: str = "dyad-fe"
    fit: FitConfig = field(default_factory=FitConfig)
    enumerator: str = "auto"
    workers: int = 1

    def __post_init__(self):
        self.beta0 = tuple(float(b) for b in np.atleast_1d(self.beta0))
        if self.replications < 1:
            raise InvalidArgumentError("need at least one replication")
        if self.n < 4:
            raise InvalidArgumentError("need n >= 4")
        if self.regime not in REGIMES:
            raise InvalidArgumentError(f"unknown regime {self.regime!r}")
        if self.model not in MODELS:
            raise InvalidArgumentError(f"unknown model {self.model!r}")
        if not 0 <= self.seed < 2**64:
            raise InvalidArgumentError("seed must fit in 64 bits")

    @property
    def c_n(self) -> float:
        return sparsity_scale(self.regime, self.n, self.delta)


def _uniforms(seed: int, rep: int, tag: int, size: int) -> np.ndarray:
    """Open-interval uniforms from the Philox stream of ``(seed, rep, tag)``."""
    key = np.array([seed, (rep << 8) | tag], dtype=np.uint64)
    gen = np.random.Generator(np.random.Philox(key=key))
    return gen.random(size) + 2.0**-54


def draw_covariates(cfg: SimulationConfig, rep: int, shape: tuple) -> np.ndarray:
    size = int(np.prod(shape))
    cols = [ndtri(_uniforms(cfg.seed, rep, _TAG_X + q, size)) for q in range(len(cfg.beta0))]
    return np.stack(cols, axis=-1).reshape(*shape, len(cfg.beta0))


def draw_shocks(cfg: SimulationConfig, rep: int, shape: tuple) -> np.ndarray:
    return logit(_uniforms(cfg.seed, rep, _TAG_EPS, int(np.prod(shape)))).reshape(shape)


def simulate_network(cfg: SimulationConfig, rep: int):
    """Draw replication ``rep``; returns ``(network, effects)``."""
    n, beta0, c = cfg.n, np.asarray(cfg.beta0), cfg.c_n
    phi = tendencies(n)
    if cfg.model == "dyadic":
        x = draw_covariates(cfg, rep, (n, n))
        eps = draw_shocks(cfg, rep, (n, n))
        a = -c * phi
        effects = NodeEffects(a, a.copy(), np.zeros(0))
        y = x @ beta0 + a[:, None] + a[None, :] - eps > 0
        return bipartite_network(n, np.argwhere(y), covariates=x), effects
    x = draw_covariates(cfg, rep, (n, n, n))
    eps = draw_shocks(cfg, rep, (n, n, n))
    if cfg.model == "dyad-fe":
        effects = build_fixed_effects(n, c)
        total = effects.total()
    else:
        a = -c * phi
        effects = NodeEffects(a, a.copy(), a.copy())
        total = a[:, None, None] + a[None, :, None] + a[None, None, :]
    y = x @ beta0 + total - eps >= 0
    return TriadicNetwork.from_adjacency(y, covariates=x), effects


def fit_network(net: TriadicNetwork, model: str, cfg: FitConfig, enumerator: str = "auto"):
    if model == "dyad-fe":
        from .hexad import fit
        return fit(net, cfg, method=enumerator)
    from .alt import nodefe_fit, tetrad_fit
    return nodefe_fit(net, cfg) if model == "node-fe" else tetrad_fit(net, cfg)


@dataclass
class ReplicationRecord:
    rep: int
    beta_hat: float | None
    se: float | None
    converged: bool
    n_informative: int
    n_links: int
    rho_hat: float
    error: str | None = None


def run_replication(cfg: SimulationConfig, rep: int, coord: int = 0) -> ReplicationRecord:
    net, _ = simulate_network(cfg, rep)
    rho = net.n_links / net.n_triads
    try:
        res = fit_network(net, cfg.model, cfg.fit, cfg.enumerator)
    except HexLogitError as exc:
        n_inf = getattr(exc, "n_informative", None) or 0
        return ReplicationRecord(rep, None, None, False, n_inf, net.n_links, rho, type(exc).__name__)
    return ReplicationRecord(rep, float(res.beta_hat[coord]), float(res.se[coord]), bool(res.converged),
                             res.n_informative, net.n_links, rho)


@dataclass
class MonteCarloSummary:
    """One design cell as a row: regime, N, density and Monte Carlo moments."""

    n: int
    regime: str
    c_n: float
    model: str
    replications: int
    seed: int
    beta0: float
    mean_beta: float | None
    sd_beta: float | None
    mean_se: float | None
    rmse: float | None
    se_ratio: float | None
    c90: float | None
    c95: float | None
    power: float | None
    mean_rho_hat: float
    mean_n_informative: float
    mean_n_links: float
    n_failed: int

    def to_dict(self) -> dict:
        return asdict(self)


def summarize(records: list[ReplicationRecord], cfg: SimulationConfig, coord: int = 0) -> MonteCarloSummary:
    ok = [r for r in records if r.converged and r.beta_hat is not None and r.se is not None and np.isfinite(r.se)]
    n_failed = len(records) - len(ok)
    if not ok:
        raise NoInformationError(f"all {len(records)} replications failed to produce an estimate")
    if n_failed:
        log.warning("%d of %d replications failed and are excluded from the moments", n_failed, len(records))
    beta0 = cfg.beta0[coord]
    b = np.array([r.beta_hat for r in ok])
    se = np.array([r.se for r in ok])
    z90, z95 = critical_value(0.90), critical_value(0.95)
    sd = None
    if len(b) >= 2:
        sd = float(b.std())
    else:
        warnings.warn("a single successful replication leaves the Monte Carlo SD undefined", RuntimeWarning)
    mean_se = float(se.mean())
    with np.errstate(divide="ignore"):
        power = float(np.mean(np.abs(b) / se > z95))
    return MonteCarloSummary(
        n=cfg.n, regime=cfg.regime, c_n=cfg.c_n, model=cfg.model, replications=len(records),
        seed=cfg.seed, beta0=beta0,
        mean_beta=float(b.mean()), sd_beta=sd, mean_se=mean_se,
        rmse=float(np.sqrt(np.mean((b - beta0) ** 2))),
        se_ratio=None if not sd else mean_se / sd,
        c90=float(np.mean(np.abs(b - beta0) <= z90 * se)),
        c95=float(np.mean(np.abs(b - beta0) <= z95 * se)),
        power=power,
        mean_rho_hat=float(np.mean([r.rho_hat for r in records])),
        mean_n_informative=float(np.mean([r.n_informative for r in records])),
        mean_n_links=float(np.mean([r.n_links for r in records])),
        n_failed=n_failed,
    )


def _run_chunk(args):
    cfg, reps = args
    return [run_replication(cfg, r) for r in reps]


def run_replications(cfg: SimulationConfig, progress=None) -> list[ReplicationRecord]:
    reps = list(range(cfg.replications))
    if cfg.workers <= 1:
        out = []
        for r in reps:
            out.append(run_replication(cfg, r))
            if progress:
                progress(r)
        return out
    chunks = [reps[w::cfg.workers] for w in range(cfg.workers)]
    with ProcessPoolExecutor(cfg.workers) as pool:
        parts = list(pool.map(_run_chunk, [(cfg, c) for c in chunks]))
    # deterministic fold in replication order
    return sorted((rec for part in parts for rec in part), key=lambda rec: rec.rep)


def run_monte_carlo(cfg: SimulationConfig, progress=None) -> tuple[MonteCarloSummary, list[ReplicationRecord]]:
    records = run_replications(cfg, progress)
    return summarize(records, cfg), records


def sparsity_sweep(ns, deltas, replications: int, seed: int = 0, beta0=(1.0,), enumerator: str = "auto") -> list[dict]:
    """Mean informative-hexad and link counts under ``c_N = delta * ln N``.

    Only enumerates; no fitting, so cells without any informative hexad are fine.
    """
    from .hexad import enumerate_informative

    rows = []
    for n in ns:
        for delta in deltas:
            cfg = SimulationConfig(n=n, beta0=beta0, regime="custom", delta=delta,
                                   replications=replications, seed=seed)
            n_inf, n_links, ratio = [], [], []
            for rep in range(replications):
                net, _ = simulate_network(cfg, rep)
                iset, _ = enumerate_informative(net, enumerator)
                n_inf.append(len(iset))
                n_links.append(net.n_links)
                ratio.append(len(iset) / net.n_links if net.n_links else 0.0)
            rows.append({
                "n": n, "delta": delta, "c_n": cfg.c_n,
                "mean_n_informative": float(np.mean(n_inf)),
                "mean_n_links": float(np.mean(n_links)),
                "mean_ratio": float(np.mean(ratio)),
            })
    return rows


def qq_points(betas, min_points: int = 10) -> np.ndarray:
    """``(K, 2)`` array of (theoretical, empirical) quantiles.

    Theoretical quantiles are ``mean + sd * ndtri((r - 0.5) / K)`` using the
    sample mean and SD (``ddof=1``) of ``betas``.
    """
    b = np.sort(np.asarray([x for x in betas if x is not None], dtype=float))
    b = b[np.isfinite(b)]
    if len(b) < min_points:
        raise InsufficientDataError(f"need at least {min_points} finite values, got {len(b)}")
    sd = b.std(ddof=1)
    if not sd > 0:
        raise InsufficientDataError("zero variance: Q-Q plot is degenerate")
    k = len(b)
    theo = b.mean() + sd * ndtri((np.arange(1, k + 1) - 0.5) / k)
    return np.column_stack([theo, b])
