"""Combinatorics of hexad wirings.

A wiring is an 8-bit mask over the eight triads of a hexad. Bit ``b`` stands
for the local triad ``(a, b, c)`` with ``b = 4*(a-1) + 2*(b-1) + (c-1)``, i.e.
the fixed order::

    111, 112, 121, 122, 211, 212, 221, 222

where the digits are the local labels of the part-1, part-2 and part-3 nodes.
Every module in the package uses this order.
"""

from __future__ import annotations

import itertools
from collections import Counter

import numpy as np

from .errors import InvalidArgumentError, ResourceLimitError

LOCAL_TRIADS: tuple[tuple[int, int, int], ...] = tuple(itertools.product((1, 2), repeat=3))


def bit_of(a: int, b: int, c: int) -> int:
    return 4 * (a - 1) + 2 * (b - 1) + (c - 1)


def mask_from_triads(triads) -> int:
    mask = 0
    for t in triads:
        mask |= 1 << bit_of(*t)
    return mask


def triads_of(mask: int) -> list[tuple[int, int, int]]:
    return [t for bit, t in enumerate(LOCAL_TRIADS) if mask >> bit & 1]


def popcount(mask: int) -> int:
    return bin(mask).count("1")


# The two wirings of degree sequence (2,2,2,2,2,2) with equal fixed-effect content.
INFORMATIVE_1 = mask_from_triads([(1, 1, 1), (1, 2, 2), (2, 1, 2), (2, 2, 1)])
INFORMATIVE_2 = mask_from_triads([(2, 2, 2), (2, 1, 1), (1, 2, 1), (1, 1, 2)])

# Degree sequence (1,1,1,1,1,1) wirings used under node-level heterogeneity, in label order.
NODE_FE_WIRINGS = (
    mask_from_triads([(1, 1, 1), (2, 2, 2)]),
    mask_from_triads([(1, 2, 1), (2, 1, 2)]),
    mask_from_triads([(2, 1, 1), (1, 2, 2)]),
    mask_from_triads([(1, 1, 2), (2, 2, 1)]),
)

DYAD_LABELS = tuple(f"{p}{x}{y}" for p in "ABC" for x in (1, 2) for y in (1, 2))
NODE_LABELS = tuple(f"{p}{x}" for p in "ABC" for x in (1, 2))


def degree_sequence_of(mask: int) -> tuple[int, ...]:
    """Degrees of the local nodes ordered ``(i1, j1, k1, i2, j2, k2)``."""
    deg = [0] * 6
    for a, b, c in triads_of(mask):
        deg[(a - 1) * 3 + 0] += 1
        deg[(b - 1) * 3 + 1] += 1
        deg[(c - 1) * 3 + 2] += 1
    return tuple(deg)


def enumerate_wirings(d) -> list[int]:
    """All masks with degree sequence ``d``, ascending."""
    d = tuple(int(x) for x in d)
    if len(d) != 6 or any(x < 0 for x in d):
        raise InvalidArgumentError(f"degree sequence must be six nonnegative integers, got {d}")
    return [m for m in range(256) if degree_sequence_of(m) == d]


def fe_multiset(mask: int, level: str = "dyad") -> Counter:
    """Fixed effects touched by the wiring, with multiplicity.

    ``level="dyad"`` uses the twelve local dyad labels ``A11 .. C22`` (``A`` on
    the (part 1, part 2) pair, ``B`` on (2, 3), ``C`` on (1, 3)); ``level="node"``
    uses ``A1, A2, B1, B2, C1, C2``.
    """
    out: Counter = Counter()
    for a, b, c in triads_of(mask):
        if level == "dyad":
            out[f"A{a}{b}"] += 1
            out[f"B{b}{c}"] += 1
            out[f"C{a}{c}"] += 1
        elif level == "node":
            out[f"A{a}"] += 1
            out[f"B{b}"] += 1
            out[f"C{c}"] += 1
        else:
            raise InvalidArgumentError(f"unknown heterogeneity level {level!r}")
    return out


def find_identifying_pairs(ws, level: str = "dyad") -> list[tuple[int, int]]:
    """Unordered pairs of distinct wirings with identical fixed-effect multisets."""
    ws = list(ws)
    sets = [fe_multiset(w, level) for w in ws]
    return [
        (ws[a], ws[b])
        for a, b in itertools.combinations(range(len(ws)), 2)
        if ws[a] != ws[b] and sets[a] == sets[b]
    ]


def verify_minimality(level: str = "dyad", include_top: bool = False, predicate=None) -> dict:
    """Sweep degree sequences pointwise below ``(2,)*6`` for identifying pairs.

    Returns a report with ``passed`` true iff no sequence other than
    ``(2,2,2,2,2,2)`` admits an identifying pair. ``predicate`` restricts the
    sweep to sequences for which it returns true.
    """
    top = (2,) * 6
    counterexamples = []
    flagged = {}
    swept = 0
    for d in itertools.product(range(3), repeat=6):
        if d == top and not include_top:
            continue
        if predicate is not None and not predicate(d):
            continue
        swept += 1
        pairs = find_identifying_pairs(enumerate_wirings(d), level)
        if pairs:
            flagged[d] = pairs
            if d != top:
                counterexamples.append({"degree_sequence": list(d), "pairs": [list(p) for p in pairs]})
    return {
        "level": level,
        "sequences_swept": swept,
        "passed": not counterexamples,
        "counterexamples": counterexamples,
        "flagged": {",".join(map(str, d)): [list(p) for p in v] for d, v in flagged.items()},
    }


def _ordered_pairs(n: int) -> np.ndarray:
    return np.array([(a, b) for a in range(n) for b in range(n) if a != b], dtype=np.int64)


def count_hexad_pairs_by_overlap(n: int, max_n: int = 4) -> dict[tuple[int, int, int], int]:
    """Exhaustive count of ordered hexad pairs by per-part node overlap.

    Hexads are ordered (``i1 != i2`` etc., ``n**3 (n-1)**3`` of them). The double
    loop over all pairs is done in vectorised blocks of first hexads.
    """
    if n < 2:
        raise InvalidArgumentError("need n >= 2")
    if n > max_n:
        raise ResourceLimitError(f"exhaustive pair count is limited to n <= {max_n} (got {n})")
    pairs = _ordered_pairs(n)
    m = len(pairs)
    idx = np.array(list(itertools.product(range(m), repeat=3)), dtype=np.int64)
    hexads = np.concatenate([pairs[idx[:, 0]], pairs[idx[:, 1]], pairs[idx[:, 2]]], axis=1)

    counts = np.zeros((3, 3, 3), dtype=np.int64)
    other = hexads[None, :, :]
    for start in range(0, len(hexads), 256):
        h = hexads[start:start + 256, None, :]
        q = []
        for part in range(3):
            a1, a2 = h[..., 2 * part], h[..., 2 * part + 1]
            b1, b2 = other[..., 2 * part], other[..., 2 * part + 1]
            q.append((a1 == b1).astype(np.int64) + (a1 == b2) + (a2 == b1) + (a2 == b2))
        code = (q[0] * 3 + q[1]) * 3 + q[2]
        counts += np.bincount(code.ravel(), minlength=27).reshape(3, 3, 3)
    return {
        (q1, q2, q3): int(counts[q1, q2, q3])
        for q1, q2, q3 in itertools.product(range(3), repeat=3)
        if counts[q1, q2, q3]
    }


def n_ordered_hexads(n: int) -> int:
    return n**3 * (n - 1) ** 3
