"""Level sets of the total stopping time and their rational representation.

A tuple ``(l, b_1, ..., b_l, m)`` stands for the number

    2**m / 3**l - sum_{k=1..l} 2**b_k / 3**k

and ``Lambda_m`` is the set of positive integers reachable this way with
``0 <= b_1 < ... < b_l <= m - 4`` (and ``Lambda_m = {2**m}`` for ``m <= 3``).
``level_set(m)`` computes ``S_m = {n : sigma(n) = m}`` from the inverse map;
``check_equality`` compares the two.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .orbit import DEFAULT_CAP, UnresolvedOrbit, orbit, step, total_stopping_time

LAMBDA_GUARD = 26
LEVEL_GUARD = 200


@dataclass(frozen=True, order=True)
class TupleRep:
    m: int
    b: tuple[int, ...] = ()

    @property
    def l(self) -> int:
        return len(self.b)

    def validate(self) -> None:
        m, b = self.m, self.b
        if m < 0:
            raise ValueError(f"m must be non-negative, got {m}")
        if m <= 3:
            if b:
                raise ValueError(f"m={m} admits only l=0")
            return
        if len(b) > m - 3:
            raise ValueError(f"l={len(b)} exceeds m-3={m - 3}")
        if b and (b[0] < 0 or b[-1] > m - 4):
            raise ValueError(f"b must lie in [0, {m - 4}], got {b}")
        if any(x >= y for x, y in zip(b, b[1:])):
            raise ValueError(f"b must be strictly increasing, got {b}")

    def as_tuple(self) -> tuple[int, ...]:
        """The flat ``(l, b_1, ..., b_l, m)`` form."""
        return (self.l, *self.b, self.m)

    @classmethod
    def from_tuple(cls, flat: Iterable[int]) -> "TupleRep":
        flat = tuple(flat)
        if len(flat) < 2 or flat[0] != len(flat) - 2:
            raise ValueError(f"malformed tuple {flat}")
        rep = cls(m=flat[-1], b=tuple(flat[1:-1]))
        rep.validate()
        return rep

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.as_tuple())) + ")"


def tuple_value(rep: TupleRep) -> Fraction:
    """Exact value ``2**m/3**l - sum 2**b_k/3**k``."""
    rep.validate()
    l = rep.l
    num = 1 << rep.m
    for k, bk in enumerate(rep.b, start=1):
        num -= (1 << bk) * 3 ** (l - k)
    return Fraction(num, 3**l)


def enumerate_lambda(m: int) -> list[tuple[int, TupleRep]]:
    """All ``(value, tuple)`` pairs of ``Lambda_m``, sorted by value.

    Brute force over every increasing ``b`` sequence, depth first.  With
    ``A_j = sum_{k<=j} 2**b_k 3**(j-k)`` the candidate for ``l = j`` is
    ``(2**m - A_j) / 3**j``; ``A`` only grows, so a branch is dropped once
    ``A_j >= 2**m``.
    """
    if not isinstance(m, int) or not 0 <= m <= LAMBDA_GUARD:
        raise ValueError(f"m must be in [0, {LAMBDA_GUARD}], got {m!r}")
    top = 1 << m
    if m <= 3:
        return [(top, TupleRep(m))]
    out: list[tuple[int, TupleRep]] = []
    max_b = m - 4

    def walk(acc: int, pow3: int, prefix: tuple[int, ...], nxt: int) -> None:
        num = top - acc
        if num % pow3 == 0:
            out.append((num // pow3, TupleRep(m, prefix)))
        for b in range(nxt, max_b + 1):
            a2 = 3 * acc + (1 << b)
            if a2 >= top:
                # larger b only makes A bigger
                break
            walk(a2, pow3 * 3, prefix + (b,), b + 1)

    walk(0, 1, (), 0)
    out.sort()
    return out


def lambda_values(m: int) -> list[int]:
    return [v for v, _ in enumerate_lambda(m)]


def preimages(n: int) -> list[int]:
    """Children of ``n`` in the inverse tree, excluding the trivial cycle."""
    out = [2 * n]
    if n % 3 == 2:
        odd = (2 * n - 1) // 3
        if odd > 1:
            out.append(odd)
    return out


def level_sets(k_max: int) -> list[list[int]]:
    """``[S_0, S_1, ..., S_kmax]``, each sorted ascending."""
    if k_max < 0:
        raise ValueError("k must be non-negative")
    if k_max > LEVEL_GUARD:
        raise ValueError(f"k must be at most {LEVEL_GUARD}")
    levels = [[1]]
    frontier = [1]
    for _ in range(k_max):
        frontier = sorted(c for n in frontier for c in preimages(n))
        levels.append(frontier)
    return levels


def level_set(k: int, bound: int | None = None) -> list[int]:
    """``S_k`` by breadth-first expansion of the inverse map from 1.

    ``bound`` only filters the result; the expansion itself is never pruned
    because small members can descend from large ones.
    """
    s = level_sets(k)[k]
    if bound is not None:
        s = [n for n in s if n <= bound]
    return s


def descending(values: Iterable[int]) -> list[int]:
    """``s_1 > s_2 > ...`` view of a level set."""
    return sorted(values, reverse=True)


def rep_from_orbit(s: int, cap: int = DEFAULT_CAP) -> TupleRep:
    """Tuple of ``s`` read off its parity trace: ``b`` are the odd steps before ``sigma``."""
    rec = orbit(s, cap)
    if not rec.resolved:
        raise UnresolvedOrbit(s, cap)
    m = rec.sigma
    b = tuple(k for k in range(m) if rec.parities[k])
    rep = TupleRep(m, b)
    rep.validate()
    return rep


def l1_members(m: int) -> list[int]:
    """The ``l = 1`` members ``(2**m - 2**b) / 3`` with ``b = m (mod 2)``, ``b <= m - 4``."""
    if m < 4:
        raise ValueError(f"m must be >= 4, got {m}")
    return sorted(((1 << m) - (1 << b)) // 3 for b in range(m % 2, m - 3, 2))


def l2_odd_members(m: int) -> list[int]:
    """Odd ``l = 2`` members ``(2**m - 3 - 2**b2) / 9`` from the closed form.

    Even ``m >= 10`` uses ``b2 = m - 2 - 6k`` for ``1 <= k <= (m-2)/6``;
    odd ``m >= 5`` uses ``b2 = m - 4 - 6k`` for ``0 <= k <= (m-4)/6``.
    Exponents with ``b2 < 1`` would collide with ``b1 = 0`` and are
    skipped.
    """
    if m < 5 or m in (6, 8):
        raise ValueError(f"m must be >= 5 and not 6 or 8, got {m}")
    if m % 2 == 0:
        exps = [m - 2 - 6 * k for k in range(1, (m - 2) // 6 + 1)]
    else:
        exps = [m - 4 - 6 * k for k in range(0, (m - 4) // 6 + 1)]
    out = []
    for b2 in exps:
        if b2 < 1:
            continue
        num = (1 << m) - 3 - (1 << b2)
        assert num % 9 == 0, (m, b2)
        out.append(num // 9)
    return sorted(out)


@dataclass
class EqualityVerdict:
    m: int
    lambda_count: int
    level_count: int
    # Lambda_m members whose total stopping time is not m
    lambda_not_in_s: list[int] = field(default_factory=list)
    # S_m members whose orbit tuple does not reproduce them
    s_not_in_lambda: list[int] = field(default_factory=list)
    same_set: bool = True

    @property
    def equal(self) -> bool:
        return self.same_set and not self.lambda_not_in_s and not self.s_not_in_lambda


def check_equality(m: int, cap: int = DEFAULT_CAP) -> EqualityVerdict:
    """Compare brute-force ``Lambda_m`` against the inverse-tree ``S_m``."""
    lam = enumerate_lambda(m)
    s_m = level_set(m)
    verdict = EqualityVerdict(m, len(lam), len(s_m))
    for v, _ in lam:
        if total_stopping_time(v, cap) != m:
            verdict.lambda_not_in_s.append(v)
    for s in s_m:
        try:
            rep = rep_from_orbit(s, cap)
        except (UnresolvedOrbit, ValueError):
            verdict.s_not_in_lambda.append(s)
            continue
        if rep.m != m or tuple_value(rep) != s:
            verdict.s_not_in_lambda.append(s)
    verdict.same_set = sorted(v for v, _ in lam) == s_m
    return verdict


def lemma1_violations(m: int) -> list[int]:
    """Members of ``Lambda_m`` whose image under the map is not in ``Lambda_{m-1}``."""
    if m < 1:
        raise ValueError("m must be >= 1")
    below = set(lambda_values(m - 1))
    return [v for v in lambda_values(m) if step(v) not in below]


def consecutive_pairs(values: Iterable[int], gap: int = 1) -> list[tuple[int, int]]:
    """Pairs ``(a, a + gap)`` with both ends in ``values``."""
    vs = set(values)
    return sorted((a, a + gap) for a in vs if a + gap in vs)
