"""Block-vectorised range scans with resumable checkpoints.

Seeds are processed in contiguous blocks held in ``int64`` arrays.  Each
block is first single-stepped until every seed has dropped below its start
value (the stopping time), then carried on to 1 with window jumps.  Any
seed whose trajectory would leave the safe ``int64`` range is finished with
Python ints instead, so results never depend on the word size.
"""

from __future__ import annotations

import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable

import numpy as np

from .accel import DEFAULT_WINDOW, WindowTable, cached_table
from .orbit import DEFAULT_CAP, stopping_time, total_stopping_time

log = logging.getLogger(__name__)

FORMAT_VERSION = 1
BLOCK = 1 << 16
_INT64_MAX = (1 << 63) - 1

UNRESOLVED = -1


class CheckpointError(ValueError):
    """A checkpoint cannot be used for the requested scan."""


def _safe_limit(table: WindowTable) -> int:
    # largest value for which both a window jump and a single step fit in int64
    worst = (_INT64_MAX - max(table.offsets)) // 3**table.w
    return min(worst, (_INT64_MAX - 1) // 3)


def scan_block(
    lo: int,
    hi: int,
    table: WindowTable | None = None,
    cap: int = DEFAULT_CAP,
    limit: int | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Stopping times and total stopping times for every seed in ``[lo, hi)``.

    Returns two ``int64`` arrays; ``UNRESOLVED`` marks a seed that did not
    finish within ``cap`` steps.  The stopping time of seed 1 is reported
    as 0.  ``limit`` overrides the overflow guard (used by tests).
    """
    if lo < 1 or hi < lo:
        raise ValueError(f"bad block [{lo}, {hi})")
    if table is None:
        table = cached_table(DEFAULT_WINDOW)
    if limit is None:
        limit = _safe_limit(table)
    count = hi - lo
    stop = np.full(count, UNRESOLVED, dtype=np.int64)
    sigma = np.full(count, UNRESOLVED, dtype=np.int64)
    if count == 0:
        return stop, sigma
    if hi - 1 > limit:
        big_from = max(lo, limit + 1)
        for n in range(big_from, hi):
            i = n - lo
            s = stopping_time(n, cap) if n >= 2 else 0
            t = total_stopping_time(n, cap)
            stop[i] = UNRESOLVED if s is None else s
            sigma[i] = UNRESOLVED if t is None else t
        hi = big_from
        if hi <= lo:
            return stop, sigma
    seeds = np.arange(lo, hi, dtype=np.int64)
    overflow: list[int] = []

    # descent: single steps until below the seed
    idx = np.arange(hi - lo, dtype=np.int64)
    x = seeds.copy()
    reached = np.zeros(hi - lo, dtype=np.int64)
    descended = np.zeros(hi - lo, dtype=bool)
    k = 0
    if lo == 1:
        stop[0] = 0
        sigma[0] = 0
        idx, x = idx[1:], x[1:]
    while idx.size and k < cap:
        hot = x > limit
        if hot.any():
            overflow.extend(idx[hot].tolist())
            keep = ~hot
            idx, x = idx[keep], x[keep]
        x = np.where(x & 1, (3 * x + 1) >> 1, x >> 1)
        k += 1
        done = x < seeds[idx]
        if done.any():
            stop[idx[done]] = k
            reached[idx[done]] = x[done]
            descended[idx[done]] = True
            keep = ~done
            idx, x = idx[keep], x[keep]

    # totals: carry on from the descent value with window jumps
    w = table.w
    threshold = np.int64(1 << w)
    mask = np.int64(table.mask)
    mult = np.asarray([3**e for e in table.odd_counts], dtype=np.int64)
    offsets = np.asarray(table.offsets, dtype=np.int64)

    idx = np.flatnonzero(descended)
    x = reached[idx]
    steps = stop[idx].copy()

    while idx.size:
        finished = x == 1
        if finished.any():
            sigma[idx[finished]] = steps[finished]
            keep = ~finished
            idx, x, steps = idx[keep], x[keep], steps[keep]
            if not idx.size:
                break
        over_cap = steps >= cap
        if over_cap.any():
            keep = ~over_cap
            idx, x, steps = idx[keep], x[keep], steps[keep]
            if not idx.size:
                break
        hot = x > limit
        if hot.any():
            overflow.extend(idx[hot].tolist())
            keep = ~hot
            idx, x, steps = idx[keep], x[keep], steps[keep]
            if not idx.size:
                break
        jump = (x >= threshold) & (steps + w <= cap)
        if jump.any():
            xj = x[jump]
            r = xj & mask
            x[jump] = (mult[r] * xj + offsets[r]) >> w
            steps[jump] += w
        single = ~jump
        if single.any():
            xs = x[single]
            x[single] = np.where(xs & 1, (3 * xs + 1) >> 1, xs >> 1)
            steps[single] += 1

    for i in sorted(set(overflow)):
        n = lo + i
        s = stopping_time(n, cap) if n >= 2 else 0
        t = total_stopping_time(n, cap)
        stop[i] = UNRESOLVED if s is None else s
        sigma[i] = UNRESOLVED if t is None else t
    return stop, sigma


def sigma_range(
    lo: int, hi: int, table: WindowTable | None = None, cap: int = DEFAULT_CAP
) -> np.ndarray:
    """Total stopping times of ``lo .. hi`` inclusive as an ``int64`` array."""
    parts = []
    for a in range(lo, hi + 1, BLOCK):
        b = min(a + BLOCK, hi + 1)
        parts.append(scan_block(a, b, table, cap)[1])
    if not parts:
        return np.empty(0, dtype=np.int64)
    return np.concatenate(parts)


def gamma_greater(s1: int, n1: int, s2: int, n2: int) -> bool:
    """``s1/ln(n1) > s2/ln(n2)``, evaluated the same way everywhere."""
    return s1 / math.log(n1) > s2 / math.log(n2)


@dataclass
class ScanStats:
    """Mergeable summary of a set of verified seeds.

    Maxima keep the smallest seed on ties, so merging is associative and
    does not depend on the order chunks finish in.
    """

    count: int = 0
    max_stop: tuple[int, int] | None = None  # (value, seed)
    max_sigma: tuple[int, int] | None = None
    max_gamma: tuple[int, int] | None = None  # (sigma, seed)
    non_descending: list[int] = field(default_factory=list)

    @staticmethod
    def _best(a, b):
        if a is None:
            return b
        if b is None:
            return a
        if a[0] != b[0]:
            return a if a[0] > b[0] else b
        return a if a[1] < b[1] else b

    @staticmethod
    def _best_gamma(a, b):
        if a is None:
            return b
        if b is None:
            return a
        if gamma_greater(a[0], a[1], b[0], b[1]):
            return a
        if gamma_greater(b[0], b[1], a[0], a[1]):
            return b
        return a if a[1] < b[1] else b

    def merge(self, other: "ScanStats") -> "ScanStats":
        return ScanStats(
            count=self.count + other.count,
            max_stop=self._best(self.max_stop, other.max_stop),
            max_sigma=self._best(self.max_sigma, other.max_sigma),
            max_gamma=self._best_gamma(self.max_gamma, other.max_gamma),
            non_descending=sorted(self.non_descending + other.non_descending),
        )

    @classmethod
    def from_block(cls, lo: int, stop: np.ndarray, sigma: np.ndarray) -> "ScanStats":
        stats = cls(count=int(stop.size))
        if not stop.size:
            return stats
        bad = np.flatnonzero(stop == UNRESOLVED)
        stats.non_descending = [lo + int(i) for i in bad]
        if bad.size < stop.size:
            i = int(np.argmax(stop))  # argmax returns the first maximum
            stats.max_stop = (int(stop[i]), lo + i)
        ok = np.flatnonzero(sigma != UNRESOLVED)
        if ok.size:
            i = int(np.argmax(sigma))
            stats.max_sigma = (int(sigma[i]), lo + i)
            seeds = lo + ok
            valid = seeds >= 2
            if valid.any():
                seeds = seeds[valid]
                sig = sigma[ok][valid]
                g = sig / np.log(seeds.astype(np.float64))
                # the float pass only nominates; _best_gamma makes the final call
                best = None
                for t in np.flatnonzero(g >= g.max() * (1 - 1e-12)):
                    best = cls._best_gamma(best, (int(sig[t]), int(seeds[t])))
                stats.max_gamma = best
        return stats


@dataclass
class Checkpoint:
    range_lo: int
    range_hi: int
    next_unverified: int
    window_width: int = DEFAULT_WINDOW
    stats: ScanStats = field(default_factory=ScanStats)
    format_version: int = FORMAT_VERSION

    def __post_init__(self):
        if not self.range_lo <= self.next_unverified <= self.range_hi + 1:
            raise CheckpointError(
                f"next_unverified {self.next_unverified} outside "
                f"[{self.range_lo}, {self.range_hi + 1}]"
            )

    @property
    def done(self) -> bool:
        return self.next_unverified > self.range_hi

    def records(self) -> list[dict]:
        out = []
        s = self.stats
        for kind, rec in (
            ("max_stopping_time", s.max_stop),
            ("max_total_stopping_time", s.max_sigma),
            ("max_gamma", s.max_gamma),
        ):
            if rec is not None:
                out.append({"seed": rec[1], "kind": kind, "value": rec[0]})
        out.extend({"seed": n, "kind": "non_descending", "value": 0} for n in s.non_descending)
        return out

    def to_text(self) -> str:
        doc = {
            "format_version": self.format_version,
            "range_lo": self.range_lo,
            "range_hi": self.range_hi,
            "next_unverified": self.next_unverified,
            "window_width": self.window_width,
            "verified_count": self.stats.count,
            "records": self.records(),
        }
        return json.dumps(doc, indent=2) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Checkpoint":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise CheckpointError(f"unreadable checkpoint: {exc}") from None
        version = doc.get("format_version")
        if version != FORMAT_VERSION:
            raise CheckpointError(
                f"checkpoint format_version {version!r}, expected {FORMAT_VERSION}"
            )
        try:
            stats = ScanStats(count=int(doc["verified_count"]))
            for rec in doc["records"]:
                pair = (int(rec["value"]), int(rec["seed"]))
                kind = rec["kind"]
                if kind == "max_stopping_time":
                    stats.max_stop = pair
                elif kind == "max_total_stopping_time":
                    stats.max_sigma = pair
                elif kind == "max_gamma":
                    stats.max_gamma = pair
                elif kind == "non_descending":
                    stats.non_descending.append(pair[1])
                else:
                    raise CheckpointError(f"unknown record kind {kind!r}")
            return cls(
                range_lo=int(doc["range_lo"]),
                range_hi=int(doc["range_hi"]),
                next_unverified=int(doc["next_unverified"]),
                window_width=int(doc["window_width"]),
                stats=stats,
                format_version=version,
            )
        except (KeyError, TypeError) as exc:
            raise CheckpointError(f"malformed checkpoint: {exc!r}") from None

    def save(self, path: str | Path) -> None:
        path = Path(path)
        tmp = path.with_name(path.name + ".tmp")
        tmp.write_text(self.to_text())
        tmp.replace(path)

    @classmethod
    def load(cls, path: str | Path) -> "Checkpoint":
        return cls.from_text(Path(path).read_text())


@dataclass(frozen=True)
class ScanReport:
    lo: int
    hi: int
    stats: ScanStats

    @property
    def all_descend(self) -> bool:
        return not self.stats.non_descending

    def render(self) -> str:
        s = self.stats
        lines = [
            f"range={self.lo}..{self.hi}",
            f"verified={s.count}",
            f"non_descending={len(s.non_descending)}",
        ]
        if s.max_stop:
            lines.append(f"max_stopping_time={s.max_stop[0]} seed={s.max_stop[1]}")
        if s.max_sigma:
            lines.append(f"max_total_stopping_time={s.max_sigma[0]} seed={s.max_sigma[1]}")
        if s.max_gamma:
            g = s.max_gamma[0] / math.log(s.max_gamma[1])
            lines.append(f"max_gamma={g:.10f} seed={s.max_gamma[1]} sigma={s.max_gamma[0]}")
        for n in s.non_descending:
            lines.append(f"non_descending_seed={n}")
        if self.lo > 2:
            lines.append(
                f"note=every seed descends; convergence of the range to 1 "
                f"additionally needs all seeds below {self.lo}"
            )
        else:
            lines.append("note=every seed descends; convergence to 1 follows by induction")
        if s.non_descending:
            lines[-1] = "note=some seeds did not descend within the step cap"
        return "\n".join(lines) + "\n"


def _chunks(lo: int, hi: int, size: int) -> Iterable[tuple[int, int]]:
    a = lo
    while a <= hi:
        b = min(a + size - 1, hi)
        yield a, b
        a = b + 1


def _scan_chunk(a: int, b: int, table: WindowTable, cap: int) -> ScanStats:
    stop, sigma = scan_block(a, b + 1, table, cap)
    return ScanStats.from_block(a, stop, sigma)


def verify_range(
    lo: int,
    hi: int,
    table: WindowTable | None = None,
    checkpoint: Checkpoint | None = None,
    *,
    cap: int = DEFAULT_CAP,
    checkpoint_every: int | None = None,
    on_checkpoint: Callable[[Checkpoint], None] | None = None,
    stop_at: int | None = None,
    threads: int = 1,
) -> tuple[ScanReport, Checkpoint]:
    """Check that every seed in ``[lo, hi]`` eventually drops below itself.

    Alongside the descent check the scan keeps the range maxima of stopping
    time, total stopping time and scaled total stopping time.  Passing the
    checkpoint from an interrupted run continues it; ``stop_at`` simulates
    an interruption by halting before that seed.  ``on_checkpoint`` is
    called every ``checkpoint_every`` seeds and at the end.
    """
    if lo < 2 or hi < lo:
        raise ValueError(f"need 2 <= lo <= hi, got lo={lo} hi={hi}")
    if table is None:
        table = cached_table(DEFAULT_WINDOW)
    if checkpoint is None:
        checkpoint = Checkpoint(lo, hi, lo, table.w)
    else:
        if checkpoint.format_version != FORMAT_VERSION:
            raise CheckpointError("checkpoint format_version mismatch")
        if (checkpoint.range_lo, checkpoint.range_hi) != (lo, hi):
            raise CheckpointError(
                f"checkpoint covers [{checkpoint.range_lo}, {checkpoint.range_hi}], "
                f"not [{lo}, {hi}]"
            )
    end = hi if stop_at is None else min(hi, stop_at - 1)
    every = checkpoint_every or (end - lo + 1)
    stats = checkpoint.stats
    start = checkpoint.next_unverified
    while start <= end:
        seg_end = min(end, start + every - 1)
        chunks = list(_chunks(start, seg_end, BLOCK))
        if threads > 1:
            with ThreadPoolExecutor(threads) as pool:
                parts = list(pool.map(lambda c: _scan_chunk(c[0], c[1], table, cap), chunks))
        else:
            parts = [_scan_chunk(a, b, table, cap) for a, b in chunks]
        for part in parts:
            stats = stats.merge(part)
        start = seg_end + 1
        checkpoint = Checkpoint(lo, hi, start, table.w, stats)
        log.info("verified up to %d", start - 1)
        if on_checkpoint is not None:
            on_checkpoint(checkpoint)
    return ScanReport(lo, hi, checkpoint.stats), checkpoint
