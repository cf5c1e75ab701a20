"""Statistics over many seeds: scaled stopping time records, equal-neighbour
counts, orbit-vector angles and level-set growth.

Nothing here asserts a conjecture.  Functions return the numbers and any
violations they found; callers decide what to do with them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .accel import WindowTable
from .levelsets import level_sets
from .orbit import DEFAULT_CAP, UnresolvedOrbit, curve_params, orbit, total_stopping_time
from .scan import BLOCK, UNRESOLVED, scan_block, sigma_range

ROOSENDAAL_CANDIDATES = (
    6_649_279,
    8_400_511,
    11_200_681,
    15_733_191,
    63_728_127,
    3_743_559_068_799,
    100_759_293_214_567,
)

AN_RECORD = "AN-record"
CANDIDATE = "candidate"


@dataclass(frozen=True)
class RecordEntry:
    seed: int
    sigma: int
    gamma: float
    kind: str = AN_RECORD


def _sigma_or_raise(n: int, cap: int) -> int:
    s = total_stopping_time(n, cap)
    if s is None:
        raise UnresolvedOrbit(n, cap)
    return s


def gamma(n: int, cap: int = DEFAULT_CAP) -> float:
    """Total stopping time divided by ``ln n``."""
    if n < 2:
        raise ValueError(f"gamma needs n >= 2, got {n}")
    return _sigma_or_raise(n, cap) / math.log(n)


def cross_check(lo: int, sigmas: np.ndarray, every: int = 100, cap: int = DEFAULT_CAP) -> int:
    """Re-derive every ``every``-th entry with the direct iteration.

    Returns how many seeds were checked; raises ``RuntimeError`` on any
    disagreement between the vectorised and direct paths.
    """
    checked = 0
    for i in range(0, len(sigmas), every):
        expect = total_stopping_time(lo + i, cap)
        got = int(sigmas[i])
        if (UNRESOLVED if expect is None else expect) != got:
            raise RuntimeError(f"sigma({lo + i}): accelerated {got}, direct {expect}")
        checked += 1
    return checked


def an_scan(
    limit: int,
    table: WindowTable | None = None,
    cap: int = DEFAULT_CAP,
    start_gamma_seed: int = 2,
) -> list[RecordEntry]:
    """Seeds in ``3..limit`` whose gamma beats every earlier one.

    The running maximum starts at ``gamma(2)``; ties never make a record.
    """
    if limit < 3:
        raise ValueError(f"limit must be >= 3, got {limit}")
    best = gamma(start_gamma_seed, cap)
    out: list[RecordEntry] = []
    for a in range(3, limit + 1, BLOCK):
        b = min(a + BLOCK, limit + 1)
        sig = scan_block(a, b, table, cap)[1]
        cross_check(a, sig, cap=cap)
        if (sig == UNRESOLVED).any():
            bad = a + int(np.flatnonzero(sig == UNRESOLVED)[0])
            raise UnresolvedOrbit(bad, cap)
        g = sig / np.log(np.arange(a, b, dtype=np.float64))
        # only seeds that beat the block-entry maximum can be records
        for i in np.flatnonzero(g > best):
            n = a + int(i)
            s = int(sig[i])
            gn = s / math.log(n)
            if gn > best:
                out.append(RecordEntry(n, s, gn, AN_RECORD))
                best = gn
    return out


def candidate_check(
    seeds: Sequence[int] = ROOSENDAAL_CANDIDATES, cap: int = DEFAULT_CAP
) -> tuple[list[RecordEntry], bool]:
    """Gamma for each candidate and whether the sequence strictly increases."""
    rows = []
    for n in seeds:
        s = _sigma_or_raise(n, cap)
        rows.append(RecordEntry(n, s, s / math.log(n), CANDIDATE))
    increasing = all(x.gamma < y.gamma for x, y in zip(rows, rows[1:]))
    return rows, increasing


def zeta_series(m: int, cap: int = DEFAULT_CAP) -> list[int]:
    """``[zeta(0), zeta(1), ..., zeta(m)]`` with zeta of 0 and 1 set to 0."""
    if m < 0:
        raise ValueError("m must be non-negative")
    sig = sigma_range(1, max(m, 1), cap=cap)
    equal = np.zeros(max(m, 1) + 1, dtype=np.int64)
    # equal[k] = 1 when sigma(k) == sigma(k-1), k >= 2
    equal[2:] = sig[1:] == sig[:-1]
    if (sig == UNRESOLVED).any():
        bad = 1 + int(np.flatnonzero(sig == UNRESOLVED)[0])
        raise UnresolvedOrbit(bad, cap)
    return np.cumsum(equal)[: m + 1].tolist()


def zeta(m: int, cap: int = DEFAULT_CAP) -> int:
    """Number of ``2 <= k <= m`` with ``sigma(k) == sigma(k-1)``."""
    if m < 2:
        raise ValueError(f"zeta needs m >= 2, got {m}")
    return zeta_series(m, cap)[m]


def zeta_ratio(m: int, cap: int = DEFAULT_CAP) -> float:
    return zeta(m, cap) / m


def orbit_vector_products(m: int, cap: int = DEFAULT_CAP) -> tuple[int, int]:
    """``(<V, LV>, <V, V>)`` for the orbit vector ``V`` and its cyclic left shift."""
    rec = orbit(m, cap)
    if not rec.resolved:
        raise UnresolvedOrbit(m, cap)
    v = rec.values
    dot = sum(a * b for a, b in zip(v, v[1:] + v[:1]))
    norm2 = sum(a * a for a in v)
    return dot, norm2


def orbit_angle(m: int, cap: int = DEFAULT_CAP) -> float:
    """Cosine of the angle between the orbit vector of ``m`` and its shift."""
    if m < 2:
        raise ValueError(f"orbit_angle needs m >= 2, got {m}")
    dot, norm2 = orbit_vector_products(m, cap)
    return dot / norm2


def angle_bound_violations(limit: int, cap: int = DEFAULT_CAP) -> dict[str, list[int]]:
    """Seeds in ``2..limit`` outside ``1/2 < cos < 7/8`` (all) or ``3/4 < cos < 7/8`` (odd).

    Bounds are checked exactly on the integer dot products.
    """
    out: dict[str, list[int]] = {"all": [], "odd": []}
    for m in range(2, limit + 1):
        dot, norm2 = orbit_vector_products(m, cap)
        if not (norm2 < 2 * dot and 8 * dot < 7 * norm2):
            out["all"].append(m)
        if m % 2 and not (3 * norm2 < 4 * dot and 8 * dot < 7 * norm2):
            out["odd"].append(m)
    return out


def log_bound_violations(limit: int, cap: int = DEFAULT_CAP) -> list[int]:
    """Seeds ``n <= limit`` with ``sigma(n) < log2(n)``, i.e. ``2**sigma < n``."""
    sig = sigma_range(1, limit, cap=cap)
    n = np.arange(1, limit + 1, dtype=np.int64)
    pow2 = np.left_shift(np.int64(1), np.arange(63, dtype=np.int64))
    # least s with 2**s >= n
    need = np.searchsorted(pow2, n, side="left")
    bad = np.flatnonzero((sig < need) | (sig == UNRESOLVED))
    return [int(i) + 1 for i in bad]


def curve_ordering_violations(limit: int, cap: int = DEFAULT_CAP) -> list[int]:
    """Seeds in ``2..limit`` whose curve parameters have ``i > j``."""
    out = []
    for n in range(2, limit + 1):
        i, j = curve_params(n, cap)
        if i > j:
            out.append(n)
    return out


@dataclass(frozen=True)
class GrowthRow:
    k: int
    count: int
    ratio: float | None  # count / previous count


def level_set_growth(K: int) -> list[GrowthRow]:
    if not 0 <= K <= 40:
        raise ValueError(f"K must be in [0, 40], got {K}")
    counts = [len(s) for s in level_sets(K)]
    rows = [GrowthRow(0, counts[0], None)]
    for k in range(1, K + 1):
        rows.append(GrowthRow(k, counts[k], counts[k] / counts[k - 1]))
    return rows


def gamma_series(seeds: Iterable[int], cap: int = DEFAULT_CAP) -> list[tuple[int, float]]:
    """``(n, gamma(n))`` pairs for plotting."""
    return [(n, gamma(n, cap)) for n in seeds]
