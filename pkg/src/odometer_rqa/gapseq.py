"""The gap sequence ``a_i = (1/alpha)^{v_2(i)}`` and its partial sums.

Consecutive intervals ``I(u)`` and ``I(u [+] 1)`` of level ``k`` are separated
by a gap of length ``alpha^{k-1} (1 - 2 alpha) a_{gamma(u)}``.  Partial sums are
stored as a histogram of dyadic valuations, which keeps them exact and lets
them be turned into a polynomial in ``alpha`` once a level ``k`` is fixed.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from .exact import DomainError, ExactDistance, parse_alpha
from .words import Word, gamma

__all__ = [
    "DIRECT_LIMIT",
    "valuation",
    "GapTerm",
    "GapSum",
    "gap",
    "gap_sum",
    "rho_gap",
]

DIRECT_LIMIT = 1 << 16


def valuation(i: int) -> int:
    """Dyadic valuation ``v_2(i)`` of a positive integer."""
    if i <= 0:
        raise DomainError("valuation needs a positive integer")
    return (i & -i).bit_length() - 1


@dataclass(frozen=True)
class GapTerm:
    i: int
    j: int
    alpha: Fraction

    @property
    def value(self) -> Fraction:
        return (1 / self.alpha) ** self.j


def gap(i: int, alpha) -> GapTerm:
    """The term ``a_i``."""
    if i < 1:
        raise DomainError("gap indices start at 1")
    return GapTerm(i, valuation(i), parse_alpha(alpha))


@dataclass(frozen=True)
class GapSum:
    """``A(m, n) = a_m + ... + a_{m+n-1}`` stored as valuation counts.

    ``counts[j]`` is the number of summed indices with valuation ``j``.
    """

    m: int
    n: int
    alpha: Fraction
    counts: tuple[int, ...]

    @property
    def value(self) -> Fraction:
        inv = 1 / self.alpha
        return sum((c * inv**j for j, c in enumerate(self.counts)), Fraction(0))

    def scaled(self, k: int) -> ExactDistance:
        """``alpha^{k-1} A(m, n)`` as a polynomial in alpha (needs ``v_2 <= k-1``)."""
        if len(self.counts) > k:
            raise DomainError("valuation exceeds k - 1; the scaled sum is not a polynomial")
        coeffs = [Fraction(0)] * max(k, 1)
        for j, c in enumerate(self.counts):
            coeffs[k - 1 - j] += c
        return ExactDistance(tuple(coeffs), self.alpha)


def _counts_upto(x: int) -> list[int]:
    # #{1 <= i <= x : v_2(i) = j} = floor(x/2^j) - floor(x/2^(j+1))
    out = []
    j = 0
    while (x >> j) > 0:
        out.append((x >> j) - (x >> (j + 1)))
        j += 1
    return out


def _counts_direct(m: int, n: int) -> list[int]:
    c = Counter(valuation(i) for i in range(m, m + n))
    return [c.get(j, 0) for j in range(max(c, default=-1) + 1)]


def _counts_dyadic(m: int, n: int) -> list[int]:
    hi = _counts_upto(m + n - 1)
    lo = _counts_upto(m - 1)
    out = [h - (lo[j] if j < len(lo) else 0) for j, h in enumerate(hi)]
    while out and out[-1] == 0:
        out.pop()
    return out


def gap_sum(m: int, n: int, alpha, method: str = "auto") -> GapSum:
    """Exact ``A(m, n)``.

    ``method`` is ``"direct"`` (term by term), ``"dyadic"`` (closed-form
    valuation counts, O(log(m + n))) or ``"auto"`` (direct up to
    ``DIRECT_LIMIT`` terms).
    """
    if m < 1 or n < 0:
        raise DomainError("gap_sum needs m >= 1 and n >= 0")
    a = parse_alpha(alpha)
    if method == "auto":
        method = "direct" if n <= DIRECT_LIMIT else "dyadic"
    if method == "direct":
        counts = _counts_direct(m, n)
    elif method == "dyadic":
        counts = _counts_dyadic(m, n)
    else:
        raise ValueError(f"unknown method {method!r}")
    return GapSum(m, n, a, tuple(counts))


def rho_gap(u: Word, v: Word, alpha) -> ExactDistance:
    """Distance of ``kappa(u)`` and ``kappa(v)`` written through gap sums.

    ``(g_v - g_u) alpha^k + alpha^{k-1} (1 - 2 alpha) A(g_u, g_v - g_u)`` for
    ``g_u = gamma(u) <= gamma(v) = g_v``.
    """
    if u.k != v.k:
        raise DomainError(f"length mismatch: {u.k} vs {v.k}")
    a = parse_alpha(alpha)
    k = u.k
    gu, gv = gamma(u), gamma(v)
    if gu > gv:
        gu, gv = gv, gu
    if gu == gv:
        return ExactDistance((), a)
    steps = ExactDistance.monomial(k, a, gv - gu)
    spread = gap_sum(gu, gv - gu, a, method="dyadic").scaled(k)
    return steps + spread * ExactDistance((Fraction(1), Fraction(-2)), a)
