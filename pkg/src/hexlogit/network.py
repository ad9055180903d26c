"""Sparse storage for 3-partite 3-uniform networks.

Nodes are 1-based at the public boundary (``Triad(1, 1, 1)`` is the first
triad) and 0-based everywhere inside the package. The conversion happens in
:func:`triad_linear_index`, :class:`TriadicNetwork.from_triads` and the CSV
reader only.

A bipartite (dyadic) network is stored as a triadic network whose third part
has a single node, so the tetrad estimator shares this storage.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable, NamedTuple

import numpy as np

from .errors import DataError, InvalidArgumentError

DENSE_BUDGET = 2**24


class Triad(NamedTuple):
    i: int
    j: int
    k: int


class NodeId(NamedTuple):
    part: int
    index: int


@dataclass(frozen=True)
class FixedEffects:
    """Dyad-level effects ``A[i, j]``, ``B[j, k]``, ``C[i, k]`` (0-based arrays)."""

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray

    def __post_init__(self):
        for name in ("a", "b", "c"):
            arr = getattr(self, name)
            if not np.all(np.isfinite(arr)):
                raise InvalidArgumentError(f"fixed effect matrix {name} has non-finite entries")

    def total(self) -> np.ndarray:
        """Array ``F[i, j, k] = A[i, j] + B[j, k] + C[i, k]``."""
        return self.a[:, :, None] + self.b[None, :, :] + self.c[:, None, :]


def triad_linear_index(t, n: int, n3: int | None = None) -> int:
    """Row-major position of a 1-based triad among the ``n**3`` triads."""
    n3 = n if n3 is None else n3
    i, j, k = t
    if not (1 <= i <= n and 1 <= j <= n and 1 <= k <= n3):
        raise InvalidArgumentError(f"triad {tuple(t)} out of range for n={n}")
    return ((i - 1) * n + (j - 1)) * n3 + (k - 1)


def triad_from_linear_index(idx: int, n: int, n3: int | None = None) -> Triad:
    n3 = n if n3 is None else n3
    if not 0 <= idx < n * n * n3:
        raise InvalidArgumentError(f"linear index {idx} out of range for n={n}")
    ij, k = divmod(idx, n3)
    i, j = divmod(ij, n)
    return Triad(i + 1, j + 1, k + 1)


def _group(keys: np.ndarray, values: np.ndarray) -> dict[tuple[int, int], np.ndarray]:
    """Map each distinct key row to the sorted values sharing it."""
    if len(values) == 0:
        return {}
    order = np.lexsort((values, keys[:, 1], keys[:, 0]))
    keys, values = keys[order], values[order]
    change = np.flatnonzero(np.any(np.diff(keys, axis=0) != 0, axis=1)) + 1
    starts = np.concatenate(([0], change))
    stops = np.concatenate((change, [len(values)]))
    return {(int(keys[s, 0]), int(keys[s, 1])): values[s:e] for s, e in zip(starts, stops)}


class TriadicNetwork:
    """Immutable hypergraph on three parts of equal size ``n``.

    Parameters
    ----------
    n : int
        Part size.
    edges : array_like of shape (L, 3)
        0-based ``(i, j, k)`` rows of formed hyperedges. Must be unique.
    covariates : ndarray of shape (n, n, n3, P), optional
        Dense covariate cube.
    covariate_fn : callable, optional
        ``fn(i, j, k) -> (m, P)`` array taking 1-based integer arrays. Used when
        the dense cube would be too large to hold.
    n3 : int, optional
        Size of the third part; only the bipartite wrapper sets this to 1.
    dense_budget : int
        Largest ``n * n * n3`` for which the dense adjacency bitset is built.
    missing_ok : bool
        Allow NaN entries in ``covariates`` for triads whose covariates are
        unknown. Reading one of them later raises :class:`DataError`.
    """

    def __init__(
        self,
        n: int,
        edges=None,
        covariates: np.ndarray | None = None,
        covariate_fn: Callable | None = None,
        p: int | None = None,
        n3: int | None = None,
        dense_budget: int = DENSE_BUDGET,
        missing_ok: bool = False,
    ):
        if n < 1:
            raise InvalidArgumentError("part size must be positive")
        self.n = int(n)
        self.n3 = self.n if n3 is None else int(n3)
        self.dense_budget = dense_budget

        arr = np.zeros((0, 3), dtype=np.int64) if edges is None else np.asarray(edges, dtype=np.int64)
        arr = arr.reshape(-1, 3)
        if arr.size and (arr.min(axis=0) < 0).any():
            raise InvalidArgumentError("negative node index")
        if arr.size and (arr[:, 0].max() >= self.n or arr[:, 1].max() >= self.n or arr[:, 2].max() >= self.n3):
            raise InvalidArgumentError("node index exceeds part size")
        lin = (arr[:, 0] * self.n + arr[:, 1]) * self.n3 + arr[:, 2]
        order = np.argsort(lin, kind="stable")
        lin = lin[order]
        if len(lin) > 1 and np.any(lin[1:] == lin[:-1]):
            raise InvalidArgumentError("duplicate triad in edge list")
        self._linear = lin
        self._edges = arr[order]
        self._edges.setflags(write=False)

        if covariates is not None:
            cov = np.asarray(covariates, dtype=np.float64)
            if cov.ndim == 3:
                cov = cov[..., None]
            if cov.shape[:3] != (self.n, self.n, self.n3):
                raise InvalidArgumentError(f"covariate cube has shape {cov.shape}")
            finite = np.isfinite(cov)
            if not np.all(finite | (missing_ok & np.isnan(cov))):
                raise InvalidArgumentError("covariates must be finite")
            missing_ok = missing_ok and not finite.all()
            cov.setflags(write=False)
            self._cov = cov
            self.p = cov.shape[3]
        else:
            self._cov = None
            self.p = int(p) if p is not None else 0
        self._cov_fn = covariate_fn
        self._missing = bool(missing_ok and self._cov is not None)
        if self._cov is None and covariate_fn is not None and p is None:
            self.p = int(np.asarray(covariate_fn(np.array([1]), np.array([1]), np.array([1]))).reshape(1, -1).shape[1])

    @classmethod
    def from_triads(cls, n: int, triads: Iterable, **kwargs) -> "TriadicNetwork":
        """Build from 1-based ``(i, j, k)`` triples."""
        arr = np.asarray(list(triads), dtype=np.int64).reshape(-1, 3) - 1
        return cls(n, arr, **kwargs)

    @classmethod
    def from_adjacency(cls, y: np.ndarray, **kwargs) -> "TriadicNetwork":
        y = np.asarray(y, dtype=bool)
        n, n2, n3 = y.shape
        if n != n2:
            raise InvalidArgumentError("first two parts must have equal size")
        kwargs.setdefault("n3", n3)
        return cls(n, np.argwhere(y), **kwargs)

    # -- basic accessors -------------------------------------------------

    @property
    def edges(self) -> np.ndarray:
        """0-based ``(L, 3)`` array of hyperedges, sorted row-major."""
        return self._edges

    @property
    def n_links(self) -> int:
        return len(self._linear)

    @property
    def n_triads(self) -> int:
        return self.n * self.n * self.n3

    def __len__(self) -> int:
        return self.n_links

    def __repr__(self) -> str:
        return f"TriadicNetwork(n={self.n}, links={self.n_links}, p={self.p})"

    def has_dense(self) -> bool:
        return self.n_triads <= self.dense_budget

    @cached_property
    def adjacency(self) -> np.ndarray:
        """Dense boolean cube ``Y[i, j, k]``; only within ``dense_budget``."""
        if not self.has_dense():
            raise InvalidArgumentError(
                f"dense bitset of {self.n_triads} triads exceeds budget {self.dense_budget}"
            )
        y = np.zeros(self.n_triads, dtype=bool)
        y[self._linear] = True
        y = y.reshape(self.n, self.n, self.n3)
        y.setflags(write=False)
        return y

    @cached_property
    def _edge_set(self) -> frozenset:
        return frozenset(self._linear.tolist())

    def contains(self, i, j, k) -> bool:
        """Membership test for a 0-based triad."""
        return ((i * self.n + j) * self.n3 + k) in self._edge_set

    def has_triads(self, i, j, k) -> np.ndarray:
        """Vectorised 0-based membership test."""
        i, j, k = np.broadcast_arrays(np.asarray(i), np.asarray(j), np.asarray(k))
        if self.has_dense():
            return self.adjacency[i, j, k]
        lin = (i.astype(np.int64) * self.n + j) * self.n3 + k
        pos = np.searchsorted(self._linear, lin)
        pos = np.minimum(pos, max(len(self._linear) - 1, 0))
        if len(self._linear) == 0:
            return np.zeros(lin.shape, dtype=bool)
        return self._linear[pos] == lin

    def __contains__(self, t) -> bool:
        i, j, k = t
        if not (1 <= i <= self.n and 1 <= j <= self.n and 1 <= k <= self.n3):
            return False
        return self.contains(i - 1, j - 1, k - 1)

    # -- secondary indexes -------------------------------------------------

    @cached_property
    def index_jk(self) -> dict[tuple[int, int], np.ndarray]:
        """``(j, k) -> sorted i`` over formed hyperedges (0-based)."""
        e = self._edges
        return _group(e[:, [1, 2]], e[:, 0])

    @cached_property
    def index_ik(self) -> dict[tuple[int, int], np.ndarray]:
        e = self._edges
        return _group(e[:, [0, 2]], e[:, 1])

    @cached_property
    def index_ij(self) -> dict[tuple[int, int], np.ndarray]:
        e = self._edges
        return _group(e[:, [0, 1]], e[:, 2])

    @cached_property
    def _rows_by_i(self) -> list[np.ndarray]:
        """Edges grouped by part-1 node, each block sorted by (j, k)."""
        counts = np.bincount(self._edges[:, 0], minlength=self.n)
        bounds = np.concatenate(([0], np.cumsum(counts)))
        return [self._edges[bounds[r]:bounds[r + 1], 1:] for r in range(self.n)]

    def edges_of(self, i: int) -> np.ndarray:
        """``(d, 2)`` array of ``(j, k)`` for hyperedges on part-1 node ``i`` (0-based)."""
        return self._rows_by_i[i]

    # -- covariates --------------------------------------------------------

    @property
    def has_covariates(self) -> bool:
        return self._cov is not None or self._cov_fn is not None

    def covariates(self, i, j, k) -> np.ndarray:
        """Covariates for 0-based index arrays; returns shape ``(*i.shape, P)``."""
        i, j, k = np.broadcast_arrays(np.asarray(i), np.asarray(j), np.asarray(k))
        if self._cov is not None:
            lin = (i.astype(np.int64, copy=False) * self.n + j) * self.n3 + k
            out = self._cov.reshape(-1, self.p)[lin]
            if self._missing and np.isnan(out).any():
                bad = np.unravel_index(lin[np.isnan(out).any(axis=-1)].flat[0], (self.n, self.n, self.n3))
                raise DataError(f"covariates of triad {tuple(int(v) + 1 for v in bad)} are needed but missing")
            return out
        if self._cov_fn is None:
            raise InvalidArgumentError("network carries no covariates")
        flat = np.asarray(self._cov_fn(i.ravel() + 1, j.ravel() + 1, k.ravel() + 1), dtype=np.float64)
        flat = flat.reshape(i.size, self.p)
        if not np.all(np.isfinite(flat)):
            raise InvalidArgumentError("covariate generator returned non-finite values")
        return flat.reshape(*i.shape, self.p)

    @property
    def covariate_cube(self) -> np.ndarray | None:
        return self._cov


def degree(net: TriadicNetwork, v) -> int:
    """Number of hyperedges containing the 1-based node ``v = (part, index)``."""
    part, index = v
    size = net.n3 if part == 3 else net.n
    if part not in (1, 2, 3) or not 1 <= index <= size:
        raise InvalidArgumentError(f"invalid node {tuple(v)}")
    return int(np.count_nonzero(net.edges[:, part - 1] == index - 1))


def average_degree_and_density(net: TriadicNetwork) -> tuple[float, float]:
    """``(N**2 * rho_hat, rho_hat)`` with ``rho_hat = links / triads``."""
    rho = net.n_links / net.n_triads
    return net.n_links / net.n, rho


def bipartite_network(n: int, edges=None, covariates=None, **kwargs) -> TriadicNetwork:
    """Dyadic network on an ``n x n`` bipartite graph.

    ``edges`` is an ``(L, 2)`` array of 0-based ``(i, j)`` pairs and
    ``covariates`` an ``(n, n, P)`` array.
    """
    arr = np.zeros((0, 2), dtype=np.int64) if edges is None else np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    arr = np.column_stack([arr, np.zeros(len(arr), dtype=np.int64)])
    cov = None
    if covariates is not None:
        cov = np.asarray(covariates, dtype=np.float64)
        if cov.ndim == 2:
            cov = cov[..., None]
        cov = cov[:, :, None, :]
    return TriadicNetwork(n, arr, covariates=cov, n3=1, **kwargs)
