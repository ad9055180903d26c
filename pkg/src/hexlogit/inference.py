"""Triad-clustered sandwich variance, confidence intervals and Wald tests.

Each informative unit's score is credited in full to every triad (dyad, for
tetrads) it contains; the meat is the sum of outer products of these per-triad
sums.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import norm

from .condlogit import ConditionalLogit
from .errors import DegenerateInferenceError, IdentificationError, InvalidArgumentError
from .informative import _LOCAL, InformativeSet
from .network import triad_from_linear_index


@dataclass
class SandwichParts:
    bread: np.ndarray
    meat: np.ndarray
    n_clusters: int


def _member_columns(iset: InformativeSet):
    n = iset.n
    nodes = iset.nodes.astype(np.int64, copy=False)
    if iset.kind == "hexad":
        for a, b, c in _LOCAL:
            yield (nodes[:, a] * n + nodes[:, 2 + b]) * n + nodes[:, 4 + c]
    else:
        for a, b in ((0, 0), (0, 1), (1, 0), (1, 1)):
            yield nodes[:, a] * n + nodes[:, 2 + b]


def _n_units(iset: InformativeSet) -> int:
    return iset.n**3 if iset.kind == "hexad" else iset.n**2


def cluster_score_sums(iset: InformativeSet, unit_scores: np.ndarray) -> np.ndarray:
    """Dense ``(n_units, P)`` array of per-triad score sums."""
    size = _n_units(iset)
    g = np.zeros((size, unit_scores.shape[1]))
    for col in _member_columns(iset):
        for q in range(unit_scores.shape[1]):
            g[:, q] += np.bincount(col, weights=unit_scores[:, q], minlength=size)
    return g


def touched_units(iset: InformativeSet) -> np.ndarray:
    size = _n_units(iset)
    hit = np.zeros(size, dtype=bool)
    for col in _member_columns(iset):
        hit[col] = True
    return hit


def triad_cluster_scores(iset: InformativeSet, beta) -> dict:
    """``{Triad: g_t}`` for every triad belonging to at least one informative unit.

    Keys are 1-based :class:`Triad` (with ``k = 1`` for tetrads).
    """
    scores = ConditionalLogit(iset.w, iset.labels).unit_scores(beta)
    g = cluster_score_sums(iset, scores)
    n3 = iset.n if iset.kind == "hexad" else 1
    return {triad_from_linear_index(int(t), iset.n, n3): g[t] for t in np.flatnonzero(touched_units(iset))}


def sandwich_from_parts(hessian: np.ndarray, g: np.ndarray, n_clusters: int, dfc: bool = False):
    """``bread @ meat @ bread`` with ``bread = (-hessian)^-1`` and ``meat = g' g``."""
    neg_h = -np.asarray(hessian, dtype=float)
    try:
        bread = np.linalg.inv(neg_h)
    except np.linalg.LinAlgError as exc:
        raise IdentificationError("total Hessian is singular; sandwich bread undefined") from exc
    if not np.all(np.isfinite(bread)):
        raise IdentificationError("total Hessian is singular; sandwich bread undefined")
    bread = 0.5 * (bread + bread.T)
    meat = g.T @ g
    if dfc and n_clusters > 1:
        meat = meat * n_clusters / (n_clusters - 1)
    vcov = bread @ meat @ bread
    vcov = 0.5 * (vcov + vcov.T)
    return vcov, SandwichParts(bread, meat, n_clusters)


def sandwich_vcov(iset: InformativeSet, beta, dfc: bool = False, model: ConditionalLogit | None = None,
                  hessian: np.ndarray | None = None):
    """Triad-clustered sandwich variance at ``beta``; returns ``(vcov, parts)``.

    ``model`` and ``hessian`` may be passed to reuse work already done on ``iset``.
    """
    model = model or ConditionalLogit(iset.w, iset.labels)
    scores = model.unit_scores(beta)
    g = cluster_score_sums(iset, scores)
    nonzero = np.any(g != 0, axis=1)
    g = g[nonzero]
    hessian = model.hessian(beta) if hessian is None else hessian
    return sandwich_from_parts(hessian, g, int(nonzero.sum()), dfc)


def critical_value(level: float) -> float:
    if not 0 < level < 1:
        raise InvalidArgumentError("level must lie in (0, 1)")
    return float(norm.ppf(0.5 + level / 2))


def wald_and_ci(beta_hat, se, level: float = 0.95, null=None) -> dict:
    """Normal-approximation intervals and coordinate-wise Wald test.

    ``reject`` is true when any coordinate's ``|beta - null| / se`` exceeds the
    two-sided critical value for ``level``.
    """
    beta_hat = np.atleast_1d(np.asarray(beta_hat, dtype=float))
    se = np.atleast_1d(np.asarray(se, dtype=float))
    if not np.all(se > 0) or not np.all(np.isfinite(se)):
        raise DegenerateInferenceError("standard errors must be positive and finite")
    z = critical_value(level)
    null = np.zeros_like(beta_hat) if null is None else np.broadcast_to(np.asarray(null, dtype=float), beta_hat.shape)
    stat = np.abs(beta_hat - null) / se
    return {
        "ci": np.column_stack([beta_hat - z * se, beta_hat + z * se]),
        "reject": bool(np.any(stat > z)),
        "z": z,
        "wald_p": 2 * norm.sf(stat),
    }
