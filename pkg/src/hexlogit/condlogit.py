"""Conditional logit objective and the Newton-Raphson solver shared by all estimators.

Every estimator in the package reduces to the same problem: a collection of
informative units (hexads or tetrads), each observed in one of ``C`` wirings,
with a covariate sum ``W[u, c]`` per wiring. The unit's contribution to the
composite log-likelihood is ``log softmax(W[u] @ beta)[label[u]]``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.special import expit, log_expit, logsumexp

from .errors import IdentificationError, InvalidArgumentError

log = logging.getLogger(__name__)


@dataclass
class FitConfig:
    tol: float = 1e-8
    max_iter: int = 1000
    ridge: float = 0.0
    start: np.ndarray | None = None
    max_halvings: int = 30
    separation_bound: float = 1e3

    def __post_init__(self):
        if not self.tol > 0:
            raise InvalidArgumentError("tol must be positive")
        if self.max_iter < 1:
            raise InvalidArgumentError("max_iter must be at least 1")
        if self.ridge < 0:
            raise InvalidArgumentError("ridge must be nonnegative")


class ConditionalLogit:
    """Composite conditional logit over ``n`` units with ``C`` wirings each.

    Parameters
    ----------
    w : ndarray of shape (n, C, P)
        Covariate sums per unit and wiring.
    labels : ndarray of shape (n,)
        1-based index of the observed wiring.
    """

    def __init__(self, w: np.ndarray, labels: np.ndarray):
        w = np.asarray(w, dtype=np.float64)
        if w.ndim != 3:
            raise InvalidArgumentError("w must have shape (n, C, P)")
        labels = np.asarray(labels).astype(np.int64)
        if labels.shape != w.shape[:1]:
            raise InvalidArgumentError("labels must have one entry per unit")
        if len(labels) and (labels.min() < 1 or labels.max() > w.shape[1]):
            raise InvalidArgumentError("labels out of range")
        self.w = w
        self.labels = labels
        self.n, self.n_cat, self.p = w.shape
        # Binary case: everything is a function of the observed-minus-other contrast.
        if self.n_cat == 2:
            rows = np.arange(self.n)
            self._v = w[rows, labels - 1] - w[rows, 2 - labels]
        else:
            self._v = None

    def _check(self, beta):
        beta = np.asarray(beta, dtype=np.float64).reshape(-1)
        if beta.shape != (self.p,):
            raise InvalidArgumentError(f"beta must have length {self.p}")
        return beta

    def probabilities(self, beta) -> np.ndarray:
        """``(n, C)`` conditional wiring probabilities."""
        beta = self._check(beta)
        u = self.w @ beta
        return np.exp(u - logsumexp(u, axis=1, keepdims=True))

    def loglik(self, beta) -> float:
        beta = self._check(beta)
        if self.n == 0:
            return 0.0
        if self._v is not None:
            return float(log_expit(self._v @ beta).sum())
        u = self.w @ beta
        return float((u[np.arange(self.n), self.labels - 1] - logsumexp(u, axis=1)).sum())

    def unit_scores(self, beta) -> np.ndarray:
        """Per-unit score ``W[label] - Wbar(beta)``, shape ``(n, P)``."""
        beta = self._check(beta)
        if self._v is not None:
            return expit(-(self._v @ beta))[:, None] * self._v
        p = self.probabilities(beta)
        wbar = np.einsum("nc,ncp->np", p, self.w)
        return self.w[np.arange(self.n), self.labels - 1] - wbar

    def score(self, beta) -> np.ndarray:
        return self.unit_scores(beta).sum(axis=0)

    def evaluate(self, beta) -> tuple[float, np.ndarray, np.ndarray]:
        """``(loglik, score, hessian)`` in one pass over the units."""
        beta = self._check(beta)
        if self.n == 0:
            return 0.0, np.zeros(self.p), np.zeros((self.p, self.p))
        if self._v is None:
            return self.loglik(beta), self.score(beta), self.hessian(beta)
        if self.p == 1:
            v = self._v[:, 0]
            t = v * beta[0]
            e = expit(t)
            # log(expit(t)) is accurate wherever expit(t) does not underflow
            if e.min() > 0:
                ll = float(np.log(e).sum())
            else:
                ll = float(log_expit(t).sum())
            ve = v - v * e
            return ll, np.array([ve.sum()]), np.array([[-np.dot(ve, v * e)]])
        t = self._v @ beta
        ll = float(log_expit(t).sum())
        e = expit(t)
        g = (1.0 - e) @ self._v
        h = -(self._v * (e * (1.0 - e))[:, None]).T @ self._v
        return ll, g, h

    def hessian(self, beta) -> np.ndarray:
        beta = self._check(beta)
        if self.n == 0:
            return np.zeros((self.p, self.p))
        if self._v is not None:
            t = self._v @ beta
            wt = expit(t) * expit(-t)
            return -(self._v * wt[:, None]).T @ self._v
        p = self.probabilities(beta)
        wbar = np.einsum("nc,ncp->np", p, self.w)
        dev = self.w - wbar[:, None, :]
        return -np.einsum("nc,ncp,ncq->pq", p, dev, dev)


@dataclass
class NewtonTrace:
    beta: np.ndarray
    loglik: float
    iterations: int
    converged: bool
    separated: bool = False
    ridge_used: float = 0.0
    history: list = field(default_factory=list)


def _solve(neg_h: np.ndarray, g: np.ndarray, ridge: float):
    """Solve ``(neg_h + r I) x = g`` escalating ``r`` on failure."""
    eye = np.eye(len(g))
    r = ridge
    while True:
        try:
            chol = np.linalg.cholesky(neg_h + r * eye)
        except np.linalg.LinAlgError:
            r = 1e-8 if r == 0 else r * 10
            if r > 1e-2 * (1 + 1e-9):
                raise IdentificationError("Hessian is singular even with ridge 1e-2")
            continue
        y = np.linalg.solve(chol, g)
        return np.linalg.solve(chol.T, y), r


def newton_maximize(model: ConditionalLogit, cfg: FitConfig) -> NewtonTrace:
    """Maximise ``model.loglik`` by Newton steps with step halving.

    Convergence requires both the Newton step and the per-unit average score to
    fall below ``cfg.tol`` in sup norm.
    """
    p = model.p
    beta = np.zeros(p) if cfg.start is None else np.asarray(cfg.start, dtype=np.float64).reshape(p).copy()
    ll, g, h = model.evaluate(beta)
    scale = max(model.n, 1)
    ridge_used = 0.0
    prev_step = None
    steady = 0
    history = [(beta.copy(), ll)]
    for it in range(1, cfg.max_iter + 1):
        step, r = _solve(-h, g, cfg.ridge)
        ridge_used = max(ridge_used, r)

        t = 1.0
        slack = 64 * np.finfo(float).eps * (1 + abs(ll))
        for _ in range(cfg.max_halvings + 1):
            cand = beta + t * step
            ll_new = model.loglik(cand) if t < 1.0 else None
            if ll_new is None:
                ll_new, g_new, h_new = model.evaluate(cand)
            if np.isfinite(ll_new) and ll_new >= ll - slack:
                break
            t *= 0.5
        else:
            # no ascent along the Newton direction: stationary to machine precision
            log.debug("line search exhausted at iteration %d", it)
            return NewtonTrace(beta, ll, it, bool(np.max(np.abs(g)) / scale < cfg.tol), False, ridge_used, history)
        if t < 1.0:
            ll_new, g_new, h_new = model.evaluate(cand)

        taken = t * step
        improved = ll_new > ll
        beta, ll, g, h = cand, ll_new, g_new, h_new
        history.append((beta.copy(), ll))
        step_norm = np.max(np.abs(taken), initial=0.0)
        score_ok = np.max(np.abs(g), initial=0.0) / scale < cfg.tol
        if step_norm < cfg.tol and (score_ok and r == 0.0 or r > 0.0):
            # with a ridge in play a vanishing step means a flat likelihood; stop either way
            return NewtonTrace(beta, ll, it, bool(score_ok), False, ridge_used, history)

        # separation: steps that keep their size and direction while the likelihood creeps up
        if prev_step is not None and improved:
            big = np.argmax(np.abs(taken))
            same_dir = np.sign(taken[big]) == np.sign(prev_step[big]) and taken[big] != 0
            if same_dir and np.abs(taken[big]) >= 0.5 * np.abs(prev_step[big]):
                steady += 1
            else:
                steady = 0
        prev_step = taken
        if improved and (np.max(np.abs(beta)) > cfg.separation_bound or steady >= 25):
            log.warning("likelihood keeps improving along a fixed direction; flagging separation")
            return NewtonTrace(beta, ll, it, False, True, ridge_used, history)
    return NewtonTrace(beta, ll, cfg.max_iter, False, False, ridge_used, history)


def check_identified(neg_h: np.ndarray, rel_tol: float = 1e-12) -> None:
    """Raise unless ``neg_h`` is numerically positive definite."""
    eig = np.linalg.eigvalsh(neg_h) if neg_h.size else np.array([0.0])
    top = eig.max()
    if top <= 0 or eig.min() <= rel_tol * top:
        raise IdentificationError(
            f"information matrix is singular at the estimate (eigenvalues {eig.min():.3g}..{top:.3g})"
        )
