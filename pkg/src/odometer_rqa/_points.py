"""Vectorised level-k skeleton: the points ``kappa(u)``, u in Sigma^k.

For ``alpha = p/q`` every ``kappa(u) * q^k`` is an integer
``sum u_i (q - p) p^{i-1} q^{k-i}``.  When ``q^k`` fits in int64 these keys are
used directly and every comparison is exact.  Otherwise keys are float
``kappa`` values; comparisons within ``GUARD_BAND`` of the threshold are
re-decided on exact Python integers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache

import numpy as np

from .exact import GUARD_BAND, as_threshold, parse_alpha

INT_LIMIT = 1 << 62
CHUNK = 1 << 20


def bitrev_perm(k: int) -> np.ndarray:
    """``perm[r]`` is the k-bit reversal of ``r`` (an involution)."""
    r = np.zeros(1, dtype=np.int64)
    for _ in range(k):
        r = np.concatenate([2 * r, 2 * r + 1])
    return r


@dataclass(frozen=True)
class Threshold:
    """A threshold prepared for one point set."""

    value: Fraction
    scaled: int | None  # floor(eps * q^k) in exact-integer mode
    approx: float


class PointSet:
    """Skeleton points of level ``k``.

    ``odo[n]`` is the key of ``0^k (+) n`` (orbit order of ``f_{alpha,k}``),
    ``gam[g]`` the key of the word with ``gamma = g + 1`` (ascending).
    """

    def __init__(self, alpha, k: int):
        self.alpha = parse_alpha(alpha)
        self.k = k
        self.N = 1 << k
        self.p, self.q = self.alpha.numerator, self.alpha.denominator
        self.scale = self.q**k
        self.exact_int = self.scale < INT_LIMIT

    # integer weights of the letters u_1..u_k
    @cached_property
    def weights(self) -> list[int]:
        p, q, k = self.p, self.q, self.k
        return [(q - p) * p**i * q ** (k - 1 - i) for i in range(k)]

    @cached_property
    def odo(self) -> np.ndarray:
        if self.exact_int:
            w = [np.int64(x) for x in self.weights]
            out = np.zeros(1, dtype=np.int64)
        else:
            a = float(self.alpha)
            w = [(1 - a) * a**i for i in range(self.k)]
            out = np.zeros(1, dtype=np.float64)
        for wi in w:
            out = np.concatenate([out, out + wi])
        return out

    @cached_property
    def perm(self) -> np.ndarray:
        return bitrev_perm(self.k)

    @cached_property
    def gam(self) -> np.ndarray:
        return self.odo[self.perm]

    def exact_key(self, n: int) -> int:
        """Exact integer key of ``0^k (+) n``."""
        key, i = 0, 0
        n %= self.N
        while n:
            if n & 1:
                key += self.weights[i]
            n >>= 1
            i += 1
        return key

    def threshold(self, eps) -> Threshold:
        e = as_threshold(eps, self.alpha)
        v = e.value
        scaled = None
        if self.exact_int:
            scaled = (v * self.scale).__floor__()
            scaled = max(min(scaled, self.scale), -1)
        return Threshold(v, scaled, float(v))

    def _exact_diff_le(self, a: np.ndarray, b: np.ndarray, thr: Threshold) -> np.ndarray:
        lim = thr.value * self.scale
        return np.array(
            [abs(self.exact_key(int(i)) - self.exact_key(int(j))) <= lim for i, j in zip(a, b)],
            dtype=bool,
        )

    def close(self, a: np.ndarray, b: np.ndarray, thr: Threshold) -> np.ndarray:
        """``rho(0^k (+) a, 0^k (+) b) <= eps`` elementwise (odometer indices)."""
        a = np.asarray(a)
        b = np.asarray(b)
        diff = np.abs(self.odo[a] - self.odo[b])
        if self.exact_int:
            return diff <= thr.scaled
        out = diff <= thr.approx
        amb = np.abs(diff - thr.approx) <= GUARD_BAND
        if amb.any():
            out[amb] = self._exact_diff_le(a[amb].ravel(), b[amb].ravel(), thr)
        return out

    def close_diff(self, diff: np.ndarray, a: np.ndarray, b: np.ndarray, thr: Threshold) -> np.ndarray:
        """Same as :meth:`close` for a precomputed ``|odo[a] - odo[b]|``."""
        if self.exact_int:
            return diff <= thr.scaled
        out = diff <= thr.approx
        amb = np.abs(diff - thr.approx) <= GUARD_BAND
        if amb.any():
            aa = np.broadcast_to(a, diff.shape)[amb]
            bb = np.broadcast_to(b, diff.shape)[amb]
            out[amb] = self._exact_diff_le(aa, bb, thr)
        return out

    # -- counting ---------------------------------------------------------
    def count_rho_le(self, eps) -> int:
        """Ordered pairs ``(u, v)`` with ``rho(u, v) <= eps`` (the ones of ``D_k(eps)``)."""
        thr = self.threshold(eps)
        if thr.value < 0:
            return 0
        g = self.gam
        upper = 0
        for start in range(0, self.N, CHUNK):
            gc = g[start : start + CHUNK]
            idx = np.arange(start, start + gc.size)
            if self.exact_int:
                hi = np.searchsorted(g, gc + thr.scaled, side="right")
                upper += int((hi - idx - 1).sum())
                continue
            lo_hi = np.searchsorted(g, gc + (thr.approx - GUARD_BAND), side="right")
            hi_hi = np.searchsorted(g, gc + (thr.approx + GUARD_BAND), side="right")
            upper += int((lo_hi - idx - 1).clip(min=0).sum())
            for t in np.nonzero(hi_hi > lo_hi)[0]:
                i = start + t
                js = np.arange(max(lo_hi[t], i + 1), hi_hi[t])
                if js.size:
                    a = np.full(js.size, self.perm[i])
                    upper += int(self._exact_diff_le(a, self.perm[js], thr).sum())
        return self.N + 2 * upper

    @cached_property
    def neg_index(self) -> np.ndarray:
        n = np.arange(self.N)
        return (-n) % self.N

    def rho_inf_row(self) -> tuple[np.ndarray, np.ndarray]:
        """Keys of ``rho_inf(0^k, 0^k (+) n)`` for all n, by the two-candidate rule.

        With ``h`` trailing zero bits in ``n`` (leading zeros of the word), the
        value is ``kappa(d)`` when bit ``h + 1`` of ``n`` is set or ``h = k - 1``,
        otherwise ``kappa(-d)``.  Returns the keys and the odometer index of
        the word whose ``kappa`` realises each value.
        """
        n = np.arange(self.N)
        low = n & -n
        use_self = ((n & (low << 1)) != 0) | (low == (self.N >> 1)) | (n == 0)
        witness = np.where(use_self, n, self.neg_index)
        return self.odo[witness], witness

    def count_rho_inf_le_row(self, eps) -> int:
        """Words ``d`` with ``rho_inf(0^k, d) <= eps`` by scanning row one."""
        thr = self.threshold(eps)
        if thr.value < 0:
            return 0
        row, witness = self.rho_inf_row()
        zero = np.zeros(self.N, dtype=np.int64)
        return int(self.close_diff(row, zero, witness, thr).sum())


@lru_cache(maxsize=2)
def point_set(alpha, k: int) -> PointSet:
    """Shared, cached :class:`PointSet` (its arrays are never mutated)."""
    return PointSet(alpha, k)
