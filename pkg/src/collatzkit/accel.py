"""k-step acceleration of the shortcut map by residue class.

For every residue ``j`` modulo ``2**w`` the first ``w`` steps of any
``x = j (mod 2**w)`` follow the same parity pattern, so

    T^w(x) = (3**e_j * x + c_j) / 2**w

with ``e_j`` the number of odd steps and ``c_j`` a fixed offset.  A
:class:`WindowTable` stores those pairs for all ``2**w`` residues.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .orbit import DEFAULT_CAP, _check_seed

MAX_WINDOW = 24
DEFAULT_WINDOW = 8


@lru_cache(maxsize=None)
def _pow3(limit: int) -> tuple[int, ...]:
    return tuple(3**e for e in range(limit + 1))


@dataclass(frozen=True)
class WindowTable:
    w: int
    odd_counts: tuple[int, ...]
    offsets: tuple[int, ...]

    def __post_init__(self):
        size = 1 << self.w
        if len(self.odd_counts) != size or len(self.offsets) != size:
            raise ValueError(f"window {self.w} needs {size} entries")

    @property
    def mask(self) -> int:
        return (1 << self.w) - 1

    def entry(self, j: int) -> tuple[int, int]:
        """``(e_j, c_j)`` for residue ``j``."""
        return self.odd_counts[j], self.offsets[j]

    def apply(self, n: int) -> int:
        j = n & self.mask
        e = self.odd_counts[j]
        return (_pow3(self.w)[e] * n + self.offsets[j]) >> self.w

    def affine(self, j: int) -> str:
        """Human readable form, e.g. ``(27x+19)/8``."""
        e, c = self.entry(j)
        head = "x" if e == 0 else f"{3**e}x"
        if c:
            head = f"({head}+{c})"
        return f"{head}/{1 << self.w}"

    def compose(self, other: "WindowTable") -> "WindowTable":
        """Table for ``self.w + other.w`` steps: ``self`` first, then ``other``."""
        w = self.w + other.w
        p3 = _pow3(w)
        odd, off = [], []
        for j in range(1 << w):
            e1, c1 = self.entry(j & self.mask)
            # residue of the intermediate value mod 2**other.w is fixed by j
            y = (p3[e1] * j + c1) >> self.w
            e2, c2 = other.entry(y & other.mask)
            odd.append(e1 + e2)
            off.append(p3[e2] * c1 + (c2 << self.w))
        return WindowTable(w, tuple(odd), tuple(off))


def build_window_table(w: int) -> WindowTable:
    """Tabulate ``f_{w,j}`` for every residue ``j`` modulo ``2**w``.

    Each residue is run forward ``w`` steps while the affine form
    ``(3**e * x + c) / 2**t`` is tracked; the parity at step ``t < w`` only
    depends on ``j``.
    """
    if not isinstance(w, int) or not 1 <= w <= MAX_WINDOW:
        raise ValueError(f"window width must be in [1, {MAX_WINDOW}], got {w!r}")
    odd = [0] * (1 << w)
    off = [0] * (1 << w)
    for j in range(1 << w):
        e = c = 0
        v = j
        for t in range(w):
            if v & 1:
                e += 1
                c = 3 * c + (1 << t)
                v = (3 * v + 1) >> 1
            else:
                v >>= 1
        odd[j] = e
        off[j] = c
    return WindowTable(w, tuple(odd), tuple(off))


@lru_cache(maxsize=32)
def cached_table(w: int) -> WindowTable:
    return build_window_table(w)


def accel_step(table: WindowTable, n: int) -> int:
    """``T^w(n)`` from a single table lookup."""
    _check_seed(n)
    return table.apply(n)


def accel_total_stopping_time(
    n: int, table: WindowTable | None = None, cap: int = DEFAULT_CAP
) -> int | None:
    """Total stopping time using window jumps; same answer as the direct count.

    Jumps are only taken while the value is at least ``2**w``: from there
    ``w`` steps cannot pass through 1, so the first arrival is never skipped.
    """
    _check_seed(n)
    if table is None:
        table = cached_table(DEFAULT_WINDOW)
    w = table.w
    threshold = 1 << w
    mask = table.mask
    odd_counts, offsets = table.odd_counts, table.offsets
    p3 = _pow3(w)
    k = 0
    while n >= threshold and k + w <= cap:
        j = n & mask
        n = (p3[odd_counts[j]] * n + offsets[j]) >> w
        k += w
    while n != 1:
        if k >= cap:
            return None
        n = (3 * n + 1) >> 1 if n & 1 else n >> 1
        k += 1
    return k


def c4_witness(n: int, cap: int = DEFAULT_CAP) -> tuple[int, int] | None:
    """First ``(m, k)`` with ``n = k (mod 2**m)`` and slope of ``f_{m,k}`` below 1.

    Steps are simulated while counting total steps ``t`` and odd steps
    ``e``; the witness is the first ``t`` with ``3**e < 2**t``.  Returns
    ``None`` when no witness appears within ``cap`` steps.
    """
    _check_seed(n, least=2)
    x = n
    e = 0
    p3 = 1  # 3**e
    for t in range(1, cap + 1):
        if x & 1:
            e += 1
            p3 *= 3
            x = (3 * x + 1) >> 1
        else:
            x >>= 1
        if p3 < (1 << t):
            return t, n & ((1 << t) - 1)
    return None
