"""Companion estimators: node-level triadic hexad logit and dyadic tetrad logit.

Node-level heterogeneity (``A_i + B_j + C_k``) admits a richer conditioning
event than the dyad-level model. A hexad is informative when exactly two
node-disjoint triads are formed and the other six are absent; the four such
patterns share one sufficient statistic, giving a four-category conditional
logit over the covariate sums ``W~_c``.

The dyadic model (``A_i + B_j`` on a bipartite graph) conditions on tetrads
``(i1, i2 | j1, j2)`` with exactly one of the two diagonal pairs formed.

Both enumerators pair up node-disjoint links and then probe the complement
triads (dyads). Brute-force references are kept for testing.
"""

from __future__ import annotations

import logging
import time

import numpy as np

from .condlogit import FitConfig
from .errors import InvalidArgumentError, ResourceLimitError
from .hexad import DENSE_MAX_N, _canonical_pairs, _hexad0, fit_informative
from .informative import _LOCAL, InformativeSet
from .network import TriadicNetwork, average_degree_and_density
from .results import EstimationResult
from .wiring import NODE_FE_WIRINGS

log = logging.getLogger(__name__)

# local triads of each node-level wiring, label order
_NODE_LOCAL = [np.array([t for bit, t in enumerate(_LOCAL.tolist()) if mask >> bit & 1]) for mask in NODE_FE_WIRINGS]
_NODE_LABEL_OF_MASK = {mask: c + 1 for c, mask in enumerate(NODE_FE_WIRINGS)}


# -- node-level hexads ---------------------------------------------------------


def nodefe_indicators(net: TriadicNetwork, hexad) -> int:
    """Label in ``1..4`` of the node-level wiring realised on a 1-based hexad, or 0."""
    from .hexad import hexad_mask

    _hexad0(hexad)
    return _NODE_LABEL_OF_MASK.get(hexad_mask(net, hexad), 0)


def _nodefe_sums(net: TriadicNetwork, nodes: np.ndarray) -> np.ndarray:
    out = np.zeros((len(nodes), 4, net.p))
    if len(nodes) == 0:
        return out
    for c, local in enumerate(_NODE_LOCAL):
        for a, b, cc in local:
            out[:, c, :] += net.covariates(nodes[:, a], nodes[:, 2 + b], nodes[:, 4 + cc])
    return out


def _nodefe_set(net: TriadicNetwork, nodes, labels) -> InformativeSet:
    nodes = np.asarray(nodes, dtype=np.int64).reshape(-1, 6)
    labels = np.asarray(labels, dtype=np.int8)
    w = _nodefe_sums(net, nodes) if net.has_covariates else np.zeros((len(nodes), 4, max(net.p, 0)))
    return InformativeSet("hexad", net.n, nodes, labels, w).sorted()


def enumerate_nodefe_dense(net: TriadicNetwork, max_n: int = DENSE_MAX_N) -> InformativeSet:
    """Reference: read all eight triads of every canonical hexad."""
    if net.n > max_n:
        raise ResourceLimitError(f"dense enumeration is limited to N <= {max_n} (got {net.n})")
    pairs = _canonical_pairs(net.n)
    m = len(pairs)
    if m == 0:
        return _nodefe_set(net, np.zeros((0, 6)), np.zeros(0))
    ii, jj, kk = np.meshgrid(np.arange(m), np.arange(m), np.arange(m), indexing="ij")
    nodes = np.column_stack([pairs[ii.ravel()], pairs[jj.ravel()], pairs[kk.ravel()]])
    mask = np.zeros(len(nodes), dtype=np.int64)
    for bit, (a, b, c) in enumerate(_LOCAL):
        mask |= net.has_triads(nodes[:, a], nodes[:, 2 + b], nodes[:, 4 + c]).astype(np.int64) << bit
    labels = np.zeros(len(nodes), dtype=np.int8)
    for c, wmask in enumerate(NODE_FE_WIRINGS):
        labels[mask == wmask] = c + 1
    hit = labels > 0
    return _nodefe_set(net, nodes[hit], labels[hit])


def _node_label(ta: np.ndarray, tb: np.ndarray) -> np.ndarray:
    """Label from whether the link through ``i1`` also holds the smaller ``j`` and ``k``."""
    return np.select([ta & tb, ~ta & tb, ~ta & ~tb], [1, 2, 3], default=4).astype(np.int8)


def enumerate_nodefe(net: TriadicNetwork) -> InformativeSet:
    """Pairs of node-disjoint links whose six complement triads are all absent."""
    e = net.edges
    rows = np.argsort(e[:, 0], kind="stable")
    e = e[rows]
    starts = np.searchsorted(e[:, 0], np.arange(net.n + 1))
    found_nodes, found_labels = [], []
    for i in range(net.n):
        first = e[starts[i]:starts[i + 1]]
        rest = e[starts[i + 1]:]
        if len(first) == 0 or len(rest) == 0:
            continue
        a = np.repeat(np.arange(len(first)), len(rest))
        b = np.tile(np.arange(len(rest)), len(first))
        ja, ka = first[a, 1], first[a, 2]
        i2, jb, kb = rest[b, 0], rest[b, 1], rest[b, 2]
        ok = (ja != jb) & (ka != kb)
        ja, ka, i2, jb, kb = ja[ok], ka[ok], i2[ok], jb[ok], kb[ok]
        # the six triads mixing the two links: three through i, three through i2
        pivot = np.full(len(ja), i)
        ok = ~net.has_triads(pivot, ja, kb) & ~net.has_triads(pivot, jb, ka) & ~net.has_triads(pivot, jb, kb)
        ja, ka, i2, jb, kb = ja[ok], ka[ok], i2[ok], jb[ok], kb[ok]
        ok = ~net.has_triads(i2, ja, ka) & ~net.has_triads(i2, ja, kb) & ~net.has_triads(i2, jb, ka)
        ja, ka, i2, jb, kb = ja[ok], ka[ok], i2[ok], jb[ok], kb[ok]
        if len(ja) == 0:
            continue
        found_nodes.append(np.column_stack([
            np.full(len(ja), i), i2,
            np.minimum(ja, jb), np.maximum(ja, jb),
            np.minimum(ka, kb), np.maximum(ka, kb),
        ]))
        found_labels.append(_node_label(ja < jb, ka < kb))
    if not found_nodes:
        return _nodefe_set(net, np.zeros((0, 6)), np.zeros(0))
    return _nodefe_set(net, np.concatenate(found_nodes), np.concatenate(found_labels))


def nodefe_fit(net: TriadicNetwork, cfg: FitConfig | None = None, dfc: bool = False) -> EstimationResult:
    """Four-category conditional logit over node-level informative hexads."""
    if not net.has_covariates:
        raise InvalidArgumentError("network has no covariates to estimate a slope on")
    t0 = time.perf_counter()
    iset = enumerate_nodefe(net)
    t_enum = time.perf_counter() - t0
    log.info("enumerated %d node-level informative hexads in %.2fs", len(iset), t_enum)
    res = fit_informative(iset, cfg, n_links=net.n_links, n_triads=net.n_triads, model_name="node-fe",
                          enumerator="pairs", dfc=dfc, part_size=net.n)
    res.avg_degree, res.rho_hat = average_degree_and_density(net)
    res.timing["enumerate_seconds"] = t_enum
    return res


# -- dyadic tetrads ------------------------------------------------------------


def _check_bipartite(net: TriadicNetwork) -> None:
    if net.n3 != 1:
        raise InvalidArgumentError("tetrad logit needs a bipartite network (third part of size 1)")


def tetrad_indicators(net: TriadicNetwork, tetrad) -> int:
    """1 if only ``(i1,j1),(i2,j2)`` are formed, 2 if only ``(i1,j2),(i2,j1)``, else 0.

    ``tetrad`` is 1-based ``(i1, i2, j1, j2)``.
    """
    _check_bipartite(net)
    i1, i2, j1, j2 = (int(x) - 1 for x in tetrad)
    if i1 == i2 or j1 == j2:
        raise InvalidArgumentError(f"tetrad {tuple(tetrad)} repeats a node within a part")
    y = net.has_triads(np.array([i1, i2, i1, i2]), np.array([j1, j2, j2, j1]), np.zeros(4, dtype=np.int64))
    if y[0] and y[1] and not y[2] and not y[3]:
        return 1
    if y[2] and y[3] and not y[0] and not y[1]:
        return 2
    return 0


def _tetrad_set(net: TriadicNetwork, nodes, labels) -> InformativeSet:
    nodes = np.asarray(nodes, dtype=np.int64).reshape(-1, 4)
    labels = np.asarray(labels, dtype=np.int8)
    w = np.zeros((len(nodes), 2, max(net.p, 0)))
    if len(nodes) and net.has_covariates:
        i1, i2, j1, j2 = nodes.T
        zero = np.zeros(len(nodes), dtype=np.int64)
        w[:, 0] = net.covariates(i1, j1, zero) + net.covariates(i2, j2, zero)
        w[:, 1] = net.covariates(i1, j2, zero) + net.covariates(i2, j1, zero)
    return InformativeSet("tetrad", net.n, nodes, labels, w).sorted()


def enumerate_tetrads_dense(net: TriadicNetwork) -> InformativeSet:
    """Reference: check every canonical tetrad."""
    _check_bipartite(net)
    pairs = _canonical_pairs(net.n)
    if len(pairs) == 0:
        return _tetrad_set(net, np.zeros((0, 4)), np.zeros(0))
    a, b = np.meshgrid(np.arange(len(pairs)), np.arange(len(pairs)), indexing="ij")
    nodes = np.column_stack([pairs[a.ravel()], pairs[b.ravel()]])
    i1, i2, j1, j2 = nodes.T
    zero = np.zeros(len(nodes), dtype=np.int64)
    y11, y22 = net.has_triads(i1, j1, zero), net.has_triads(i2, j2, zero)
    y12, y21 = net.has_triads(i1, j2, zero), net.has_triads(i2, j1, zero)
    s1 = y11 & y22 & ~y12 & ~y21
    s2 = y12 & y21 & ~y11 & ~y22
    hit = s1 | s2
    return _tetrad_set(net, nodes[hit], np.where(s1[hit], 1, 2))


def enumerate_tetrads(net: TriadicNetwork) -> InformativeSet:
    """Pairs of node-disjoint links whose two cross dyads are absent."""
    _check_bipartite(net)
    e = net.edges[:, :2]
    a, b = np.triu_indices(len(e), 1)
    ia, ja, ib, jb = e[a, 0], e[a, 1], e[b, 0], e[b, 1]
    ok = (ia != ib) & (ja != jb)
    ia, ja, ib, jb = ia[ok], ja[ok], ib[ok], jb[ok]
    zero = np.zeros(len(ia), dtype=np.int64)
    ok = ~net.has_triads(ia, jb, zero) & ~net.has_triads(ib, ja, zero)
    ia, ja, ib, jb = ia[ok], ja[ok], ib[ok], jb[ok]
    nodes = np.column_stack([np.minimum(ia, ib), np.maximum(ia, ib), np.minimum(ja, jb), np.maximum(ja, jb)])
    labels = np.where((ia < ib) == (ja < jb), 1, 2)
    return _tetrad_set(net, nodes, labels)


def tetrad_fit(net: TriadicNetwork, cfg: FitConfig | None = None, dfc: bool = False) -> EstimationResult:
    """Binary conditional logit over informative tetrads of a bipartite network."""
    _check_bipartite(net)
    if not net.has_covariates:
        raise InvalidArgumentError("network has no covariates to estimate a slope on")
    t0 = time.perf_counter()
    iset = enumerate_tetrads(net)
    t_enum = time.perf_counter() - t0
    res = fit_informative(iset, cfg, n_links=net.n_links, n_triads=net.n_triads, model_name="dyadic",
                          enumerator="pairs", dfc=dfc, part_size=net.n)
    res.avg_degree, res.rho_hat = average_degree_and_density(net)
    res.timing["enumerate_seconds"] = t_enum
    return res
