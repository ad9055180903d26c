"""Columnar containers for informative hexads and tetrads."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Local triad order (a, b, c) in {0,1}^3, row-major; matches the wiring bit order.
_LOCAL = np.array([(a, b, c) for a in (0, 1) for b in (0, 1) for c in (0, 1)])


@dataclass(frozen=True)
class InformativeHexad:
    """One informative hexad with canonical 1-based nodes ``(i1, i2, j1, j2, k1, k2)``."""

    nodes: tuple[int, int, int, int, int, int]
    label: int
    w: tuple  # one P-vector per wiring

    @property
    def w1(self) -> np.ndarray:
        return np.asarray(self.w[0])

    @property
    def w2(self) -> np.ndarray:
        return np.asarray(self.w[1])

    @property
    def contrast(self) -> np.ndarray:
        return self.w1 - self.w2


@dataclass(frozen=True)
class InformativeTetrad:
    nodes: tuple[int, int, int, int]
    label: int
    w1: np.ndarray
    w2: np.ndarray


@dataclass
class InformativeSet:
    """Informative units of one network, stored column-wise.

    Attributes
    ----------
    kind : {"hexad", "tetrad"}
    n : int
        Part size of the source network.
    nodes : ndarray of shape (m, 6) or (m, 4)
        0-based canonical nodes: ``(i1, i2, j1, j2, k1, k2)`` with each pair
        increasing, or ``(i1, i2, j1, j2)`` for tetrads.
    labels : ndarray of shape (m,)
        1-based observed wiring.
    w : ndarray of shape (m, C, P)
        Covariate sums per wiring.
    """

    kind: str
    n: int
    nodes: np.ndarray
    labels: np.ndarray
    w: np.ndarray

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def p(self) -> int:
        return self.w.shape[2]

    @property
    def n_categories(self) -> int:
        return self.w.shape[1]

    @classmethod
    def empty(cls, kind: str, n: int, n_categories: int, p: int) -> "InformativeSet":
        width = 6 if kind == "hexad" else 4
        return cls(kind, n, np.zeros((0, width), dtype=np.int64), np.zeros(0, dtype=np.int8),
                   np.zeros((0, n_categories, p)))

    @classmethod
    def concat(cls, parts: list["InformativeSet"]) -> "InformativeSet":
        first = parts[0]
        return cls(first.kind, first.n, np.concatenate([q.nodes for q in parts]),
                   np.concatenate([q.labels for q in parts]), np.concatenate([q.w for q in parts]))

    def keys(self) -> np.ndarray:
        """Integer key per unit encoding its nodes (for sorting and set comparison)."""
        key = np.zeros(len(self), dtype=np.int64)
        for col in range(self.nodes.shape[1]):
            key = key * self.n + self.nodes[:, col]
        return key

    def sorted(self) -> "InformativeSet":
        order = np.argsort(self.keys(), kind="stable")
        return InformativeSet(self.kind, self.n, self.nodes[order], self.labels[order], self.w[order])

    def as_set(self) -> set[tuple]:
        """``{(nodes..., label)}`` with 1-based nodes; handy in tests."""
        return {tuple(int(x) + 1 for x in row) + (int(lab),) for row, lab in zip(self.nodes, self.labels)}

    def member_units(self, n3: int | None = None) -> np.ndarray:
        """Linear indices of the triads (or dyads) each unit touches, shape ``(m, 8)`` / ``(m, 4)``."""
        n = self.n
        if self.kind == "hexad":
            n3 = n if n3 is None else n3
            i = self.nodes[:, 0:2][:, _LOCAL[:, 0]]
            j = self.nodes[:, 2:4][:, _LOCAL[:, 1]]
            k = self.nodes[:, 4:6][:, _LOCAL[:, 2]]
            return (i.astype(np.int64) * n + j) * n3 + k
        i = self.nodes[:, [0, 0, 1, 1]]
        j = self.nodes[:, [2, 3, 2, 3]]
        return i.astype(np.int64) * n + j

    def __iter__(self):
        for row, lab, w in zip(self.nodes, self.labels, self.w):
            nodes = tuple(int(x) + 1 for x in row)
            if self.kind == "hexad":
                yield InformativeHexad(nodes, int(lab), tuple(w))
            else:
                yield InformativeTetrad(nodes, int(lab), w[0], w[1])
