"""Binary encoding of orbits (``tau``) and its rational decoder (``phi``).

``tau(n)`` packs the parity trace of ``n`` into an integer, bit ``k`` being
the parity of ``T^k(n)``; its top bit sits at position ``sigma(n)``.
``phi`` reads any positive integer as such a trace and solves the affine
recurrence backwards, which gives a rational number in general and ``n``
again on ``tau(n)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .levelsets import descending, enumerate_lambda, level_set
from .orbit import DEFAULT_CAP, parity_trace


def tau(n: int, cap: int = DEFAULT_CAP) -> int:
    return sum(bit << k for k, bit in enumerate(parity_trace(n, cap)))


def bits(n: int) -> list[int]:
    """Binary digits of ``n``, least significant first."""
    if n < 1:
        raise ValueError(f"need a positive integer, got {n}")
    return [(n >> k) & 1 for k in range(n.bit_length())]


def phi(n: int) -> Fraction:
    """Decode ``n`` as a parity trace.

    ``m`` is the index of the leading 1 bit, which plays the role of the
    final arrival at 1 and is left out of both the sum and the running
    count of ones::

        phi(n) = 2**m / 3**Phi(m-1) - sum_{k<m} 2**k beta_k / 3**Phi(k)

    with ``Phi(k) = beta_0 + ... + beta_k``.
    """
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"phi is defined on positive integers, got {n!r}")
    m = n.bit_length() - 1
    ones = 0
    # common denominator 3**l with l = Phi(m-1)
    terms = []
    for k in range(m):
        if (n >> k) & 1:
            ones += 1
            terms.append((k, ones))
    l = ones
    num = (1 << m) - sum((1 << k) * 3 ** (l - c) for k, c in terms)
    return Fraction(num, 3**l)


def tau_image_lambda(m: int) -> list[int]:
    return sorted(tau(v) for v, _ in enumerate_lambda(m))


def alpha_sequence(m: int) -> list[int]:
    """``tau(Lambda_m) - 2**m`` in descending order; the last entry is 0."""
    return [t - (1 << m) for t in reversed(tau_image_lambda(m))]


def alpha_floor(m: int, which: int) -> int:
    """The conjectured closed forms ``floor(3*2**(m-5))`` and ``floor(605*2**(m-13))``."""
    coef, shift = {1: (3, 5), 2: (605, 13)}[which]
    e = m - shift
    return coef << e if e >= 0 else coef >> -e


@dataclass
class AlphaVerdict:
    m: int
    alpha1: int
    alpha2: int | None
    formula1: int
    formula2: int

    @property
    def alpha1_matches(self) -> bool:
        return self.alpha1 == self.formula1

    @property
    def alpha2_matches(self) -> bool:
        return self.alpha2 == self.formula2

    @property
    def matches(self) -> bool:
        return self.alpha1_matches and self.alpha2_matches


def check_alpha_formulas(m: int) -> AlphaVerdict:
    if not 4 <= m <= 26:
        raise ValueError(f"m must be in [4, 26], got {m}")
    seq = alpha_sequence(m)
    return AlphaVerdict(
        m=m,
        alpha1=seq[0],
        alpha2=seq[1] if len(seq) > 1 else None,
        formula1=alpha_floor(m, 1),
        formula2=alpha_floor(m, 2),
    )


@dataclass
class CorrespondenceVerdict:
    m: int
    # (k, code, phi(code), s_{k+2}) for every index examined
    rows: list[tuple[int, int, Fraction, int | None]] = field(default_factory=list)

    @property
    def mismatches(self) -> list[tuple[int, int, Fraction, int | None]]:
        return [r for r in self.rows if r[2] != r[3]]

    @property
    def holds(self) -> bool:
        return not self.mismatches


def check_phi_s_correspondence(m: int) -> CorrespondenceVerdict:
    """Compare ``phi(2**m + 2**(2k))`` (even m) or ``phi(2**m + 2**(2k+1))`` (odd m)
    with the ``(k+2)``-th largest member of ``S_m``."""
    if not 4 <= m <= 26:
        raise ValueError(f"m must be in [4, 26], got {m}")
    s_desc = descending(level_set(m))
    verdict = CorrespondenceVerdict(m)
    odd = m % 2
    for k in range(0, (m - 4 - odd) // 2 + 1):
        code = (1 << m) + (1 << (2 * k + odd))
        target = s_desc[k + 1] if k + 1 < len(s_desc) else None
        verdict.rows.append((k, code, phi(code), target))
    return verdict


def level_set_from_phi(m: int) -> list[int]:
    """Positive integers among ``phi(2**m), ..., phi(2**m + alpha_1)``.

    Should reproduce ``level_set(m)``; the test suite checks that it does.
    """
    a1 = alpha_sequence(m)[0]
    out = set()
    for code in range(1 << m, (1 << m) + a1 + 1):
        v = phi(code)
        if v.denominator == 1 and v > 0:
            out.add(int(v))
    return sorted(out)
