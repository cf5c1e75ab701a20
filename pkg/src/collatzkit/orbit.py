"""Exact single-step and iterated dynamics of the shortcut Collatz map.

``T(n) = (3n + 1) / 2`` for odd ``n`` and ``n / 2`` for even ``n``.  All
arithmetic is on Python ints, so there is no overflow at any size.

Functions that count steps take a ``cap``.  Running out of steps is not an
error: ``total_stopping_time`` and ``stopping_time`` return ``None`` and
``orbit`` marks its record unresolved.  Operations whose result only exists
for a finished orbit (``parity_trace``, ``curve_params``) raise
:class:`UnresolvedOrbit` instead.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

DEFAULT_CAP = 100_000


class UnresolvedOrbit(RuntimeError):
    """The orbit did not reach 1 within the step cap."""

    def __init__(self, seed: int, cap: int):
        super().__init__(f"orbit of {seed} did not reach 1 within {cap} steps")
        self.seed = seed
        self.cap = cap


def _check_seed(n: int, least: int = 1) -> None:
    if not isinstance(n, int) or isinstance(n, bool):
        raise TypeError(f"expected an int, got {type(n).__name__}")
    if n < least:
        raise ValueError(f"seed must be >= {least}, got {n}")


def step(n: int) -> int:
    """One application of the shortcut map."""
    _check_seed(n)
    if n & 1:
        return (3 * n + 1) >> 1
    return n >> 1


def step_trig(n: int) -> int:
    """The map written as ``(n + 1/2) sin^2(pi n / 2) + n/2``.

    ``sin^2(pi n / 2)`` is exactly the parity bit of ``n``, so the whole
    expression is evaluated in integers: ``((2n + 1) * s + n) / 2``.
    """
    _check_seed(n)
    s = n & 1
    num = (2 * n + 1) * s + n
    assert num % 2 == 0
    return num // 2


def iterate(n: int) -> Iterator[int]:
    """Yield ``n, T(n), T(T(n)), ...`` forever, without storing anything."""
    _check_seed(n)
    while True:
        yield n
        n = (3 * n + 1) >> 1 if n & 1 else n >> 1


@dataclass(frozen=True)
class OrbitRecord:
    seed: int
    values: tuple[int, ...]
    parities: tuple[int, ...]
    cap: int
    sigma: int | None = None  # None means unresolved under cap

    @property
    def resolved(self) -> bool:
        return self.sigma is not None


def orbit(seed: int, cap: int = DEFAULT_CAP) -> OrbitRecord:
    """Full trajectory of ``seed`` up to the first 1, or ``cap`` steps."""
    _check_seed(seed)
    if cap < 0:
        raise ValueError("cap must be non-negative")
    values = [seed]
    n = seed
    steps = 0
    while n != 1 and steps < cap:
        n = (3 * n + 1) >> 1 if n & 1 else n >> 1
        values.append(n)
        steps += 1
    sigma = steps if n == 1 else None
    return OrbitRecord(
        seed=seed,
        values=tuple(values),
        parities=tuple(v & 1 for v in values),
        cap=cap,
        sigma=sigma,
    )


def total_stopping_time(n: int, cap: int = DEFAULT_CAP) -> int | None:
    """Least ``k`` with ``T^k(n) == 1``, or ``None`` if not reached in ``cap`` steps."""
    _check_seed(n)
    k = 0
    while n != 1:
        if k >= cap:
            return None
        n = (3 * n + 1) >> 1 if n & 1 else n >> 1
        k += 1
    return k


def stopping_time(n: int, cap: int = DEFAULT_CAP) -> int | None:
    """Least ``k`` with ``T^k(n) < n`` (descent), or ``None`` under ``cap``."""
    _check_seed(n, least=2)
    x = n
    k = 0
    while x >= n:
        if k >= cap:
            return None
        x = (3 * x + 1) >> 1 if x & 1 else x >> 1
        k += 1
    return k


def _resolved_orbit(n: int, cap: int) -> OrbitRecord:
    rec = orbit(n, cap)
    if not rec.resolved:
        raise UnresolvedOrbit(n, cap)
    return rec


def parity_trace(n: int, cap: int = DEFAULT_CAP) -> list[int]:
    """Parity bits of ``x_0 .. x_sigma``; the last bit is always 1."""
    return list(_resolved_orbit(n, cap).parities)


def curve_params(n: int, cap: int = DEFAULT_CAP) -> tuple[int, int]:
    """The pair ``(i, j)`` with ``2**sigma == 3**i * n + j``.

    ``i`` counts the odd values among ``x_0 .. x_{sigma-1}``.
    """
    _check_seed(n, least=2)
    rec = _resolved_orbit(n, cap)
    m = rec.sigma
    i = sum(rec.parities[:m])
    j = (1 << m) - 3**i * n
    return i, j


def curve_ordering_holds(n: int, cap: int = DEFAULT_CAP) -> bool:
    """Whether ``i <= j`` holds for the curve parameters of ``n``."""
    i, j = curve_params(n, cap)
    return i <= j
