"""Brute-force oracles for the conditional-probability formulas and the enumerators.

Nothing in the estimators imports this module. The exact probabilities come
from listing every outcome of a hexad (``2**8``) or tetrad (``2**4``) under the
logistic link and summing the ones in the conditioning event.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import expit, log_expit, softmax

from .errors import InvalidArgumentError
from .informative import _LOCAL
from .network import TriadicNetwork
from .wiring import INFORMATIVE_1, INFORMATIVE_2, NODE_FE_WIRINGS

_MASKS8 = np.arange(256)
_BITS8 = (_MASKS8[:, None] >> np.arange(8)) & 1


@dataclass
class HexadScenario:
    """Covariates, fixed effects and slope for one hexad.

    Attributes
    ----------
    x : ndarray of shape (8, P)
        One covariate vector per local triad, in wiring bit order.
    fe : ndarray
        Dyad level: shape ``(3, 2, 2)`` holding ``A[a, b]``, ``B[b, c]`` and
        ``C[a, c]``. Node level: shape ``(3, 2)`` holding ``A[a]``, ``B[b]``,
        ``C[c]``.
    beta : ndarray of shape (P,)
    """

    x: np.ndarray
    fe: np.ndarray
    beta: np.ndarray

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float).reshape(8, -1)
        self.fe = np.asarray(self.fe, dtype=float)
        self.beta = np.asarray(self.beta, dtype=float).reshape(-1)
        if self.fe.shape not in ((3, 2, 2), (3, 2)):
            raise InvalidArgumentError("fe must have shape (3, 2, 2) or (3, 2)")
        if self.x.shape[1] != len(self.beta):
            raise InvalidArgumentError("x and beta disagree on P")
        if not (np.all(np.isfinite(self.x)) and np.all(np.isfinite(self.fe)) and np.all(np.isfinite(self.beta))):
            raise InvalidArgumentError("scenario values must be finite")

    @property
    def level(self) -> str:
        return "dyad" if self.fe.ndim == 3 else "node"

    @classmethod
    def random(cls, rng: np.random.Generator, p: int = 1, level: str = "dyad", scale: float = 1.5):
        shape = (3, 2, 2) if level == "dyad" else (3, 2)
        return cls(rng.normal(size=(8, p)), rng.normal(scale=scale, size=shape), rng.normal(size=p))

    def with_fe(self, fe) -> "HexadScenario":
        return HexadScenario(self.x, fe, self.beta)

    def index(self) -> np.ndarray:
        """Latent index of each local triad."""
        a, b, c = _LOCAL.T
        if self.level == "dyad":
            fe = self.fe[0][a, b] + self.fe[1][b, c] + self.fe[2][a, c]
        else:
            fe = self.fe[0][a] + self.fe[1][b] + self.fe[2][c]
        return self.x @ self.beta + fe


def _outcome_logprobs(eta: np.ndarray, bits: np.ndarray) -> np.ndarray:
    """Log probability of every outcome row of ``bits`` for independent logistic links."""
    return bits @ log_expit(eta) + (1 - bits) @ log_expit(-eta)


def _conditional(logp: np.ndarray, targets) -> np.ndarray:
    terms = [math.exp(logp[m]) for m in targets]
    total = math.fsum(terms)
    return np.array([t / total for t in terms])


def exact_conditional_prob(sc: HexadScenario, model: str | None = None) -> np.ndarray:
    """Probability of each informative wiring given that one of them occurred.

    All ``2**8`` outcomes are scored; the result has two entries for the dyad
    model and four for the node model.
    """
    model = model or ("dyad-fe" if sc.level == "dyad" else "node-fe")
    if (model == "dyad-fe") != (sc.level == "dyad"):
        raise InvalidArgumentError(f"model {model!r} does not match {sc.level}-level effects")
    logp = _outcome_logprobs(sc.index(), _BITS8)
    targets = (INFORMATIVE_1, INFORMATIVE_2) if model == "dyad-fe" else NODE_FE_WIRINGS
    return _conditional(logp, targets)


def _wiring_sum(x: np.ndarray, mask: int) -> np.ndarray:
    return x[_BITS8[mask].astype(bool)].sum(axis=0)


def closed_form_prob(sc: HexadScenario) -> np.ndarray:
    """Logit (dyad level) or four-way softmax (node level) in the wiring covariate sums."""
    if sc.level == "dyad":
        t = float((_wiring_sum(sc.x, INFORMATIVE_1) - _wiring_sum(sc.x, INFORMATIVE_2)) @ sc.beta)
        return np.array([expit(t), expit(-t)])
    u = np.array([_wiring_sum(sc.x, m) @ sc.beta for m in NODE_FE_WIRINGS])
    return softmax(u)


@dataclass
class TetradScenario:
    """``x[a, b]`` covariates of the four dyads and node effects ``A[a]``, ``B[b]``."""

    x: np.ndarray
    a: np.ndarray
    b: np.ndarray
    beta: np.ndarray

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float).reshape(2, 2, -1)
        self.a = np.asarray(self.a, dtype=float).reshape(2)
        self.b = np.asarray(self.b, dtype=float).reshape(2)
        self.beta = np.asarray(self.beta, dtype=float).reshape(-1)

    @classmethod
    def random(cls, rng: np.random.Generator, p: int = 1, scale: float = 1.5):
        return cls(rng.normal(size=(2, 2, p)), rng.normal(scale=scale, size=2), rng.normal(scale=scale, size=2),
                   rng.normal(size=p))


# dyad order (1,1), (1,2), (2,1), (2,2)
_MASKS4 = np.arange(16)
_BITS4 = (_MASKS4[:, None] >> np.arange(4)) & 1
_T1, _T2 = 0b1001, 0b0110


def exact_conditional_prob_tetrad(sc: TetradScenario) -> tuple[float, float]:
    """``(p1, p2)`` over all ``2**4`` tetrad outcomes."""
    eta = (sc.x @ sc.beta + sc.a[:, None] + sc.b[None, :]).reshape(4)
    p = _conditional(_outcome_logprobs(eta, _BITS4), (_T1, _T2))
    return float(p[0]), float(p[1])


def closed_form_prob_tetrad(sc: TetradScenario) -> tuple[float, float]:
    w = (sc.x[0, 0] + sc.x[1, 1] - sc.x[0, 1] - sc.x[1, 0]) @ sc.beta
    return float(expit(w)), float(expit(-w))


def sufficiency_report(n_scenarios: int = 100, seed: int = 0, p: int = 1) -> dict:
    """Largest deviations of the oracles from the closed forms and across effect redraws."""
    rng = np.random.default_rng(seed)
    out = {}
    for level, name in (("dyad", "dyad-fe"), ("node", "node-fe")):
        dev = inv = 0.0
        for _ in range(n_scenarios):
            sc = HexadScenario.random(rng, p, level)
            exact = exact_conditional_prob(sc)
            redraw = exact_conditional_prob(sc.with_fe(HexadScenario.random(rng, p, level).fe))
            dev = max(dev, float(np.max(np.abs(exact - closed_form_prob(sc)))))
            inv = max(inv, float(np.max(np.abs(exact - redraw))))
        out[name] = {"max_abs_dev": dev, "max_fe_change": inv}
    dev = inv = 0.0
    for _ in range(n_scenarios):
        sc = TetradScenario.random(rng, p)
        exact = np.array(exact_conditional_prob_tetrad(sc))
        other = TetradScenario.random(rng, p)
        redraw = np.array(exact_conditional_prob_tetrad(TetradScenario(sc.x, other.a, other.b, sc.beta)))
        dev = max(dev, float(np.max(np.abs(exact - closed_form_prob_tetrad(sc)))))
        inv = max(inv, float(np.max(np.abs(exact - redraw))))
    out["dyadic"] = {"max_abs_dev": dev, "max_fe_change": inv}
    out["n_scenarios"] = n_scenarios
    out["passed"] = all(v["max_abs_dev"] < 1e-12 and v["max_fe_change"] < 1e-12
                        for k, v in out.items() if isinstance(v, dict))
    return out


def random_network(n: int, density: float, rng: np.random.Generator, p: int = 1) -> TriadicNetwork:
    y = rng.random((n, n, n)) < density
    return TriadicNetwork.from_adjacency(y, covariates=rng.normal(size=(n, n, n, p)))


def crosscheck_enumerators(n: int, density: float, seed: int = 0, trials: int = 100) -> dict:
    """Compare every enumerator with the dense reference on random networks."""
    from .alt import enumerate_nodefe, enumerate_nodefe_dense
    from .hexad import ENUMERATORS

    if n > 8:
        raise InvalidArgumentError("cross-checks are limited to n <= 8")
    rng = np.random.default_rng(seed)
    passed = failed = 0
    sizes = []
    for _ in range(trials):
        net = random_network(n, density, rng)
        ref = ENUMERATORS["dense"](net).as_set()
        ok = all(ENUMERATORS[m](net).as_set() == ref for m in ("sparse", "block"))
        ok &= enumerate_nodefe(net).as_set() == enumerate_nodefe_dense(net).as_set()
        sizes.append(len(ref))
        passed += ok
        failed += not ok
    return {"n": n, "density": density, "seed": seed, "trials": trials, "passed": passed, "failed": failed,
            "mean_informative": float(np.mean(sizes)) if sizes else 0.0}
