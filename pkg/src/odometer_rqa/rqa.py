"""Correlation sums, recurrence rates and determinism.

Finite-orbit statistics are exact: orbit points are rationals, distances are
compared as integers after scaling by a common denominator, and every count
is an integer.  Correlation integrals of ``f_{alpha,k}`` are exact rationals
(ones of the distance matrix over ``4^k``); those of ``f_alpha`` are certified
approximations built on them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .distmatrix import (
    INF,
    WINDOW_MAX_K,
    count_close_pairs,
    parse_ell,
)
from .exact import (
    DomainError,
    ToleranceUnreachable,
    as_threshold,
    max_k,
    parse_alpha,
)
from .maps import ApproxMap, DelahayeMap, periodic_point
from .words import Word, gamma, index_of, kappa_value, rho, succ_rl, word_from_index

__all__ = [
    "RqaPoint",
    "ApproxValue",
    "LimitClass",
    "orbit_values",
    "closeness_matrix",
    "corr_sum",
    "rec_rate",
    "rec_rate_identity",
    "det",
    "corr_integral_fk",
    "asymptotic_det",
    "conditional_integral",
    "corr_bound",
    "det_bound",
    "corr_integral_f",
    "det_inf_f",
    "det_bracket",
    "scale_index",
    "level_cap",
    "epsilon_threshold",
    "boundary_words",
    "c1_bounds",
    "classify_point",
]

C1_MAX_K = 24


# -- points ------------------------------------------------------------------

@dataclass(frozen=True)
class RqaPoint:
    """Starting point of an orbit.

    ``kind`` is ``"word"`` (``kappa(u)``, exact), ``"one"`` (the point 1),
    ``"periodic"`` (the point of least period ``2^k`` of ``f_alpha``) or
    ``"seed"`` (an arbitrary float, iterated in floating point).
    """

    kind: str
    word: Word | None = None
    k: int | None = None
    x: float | None = None

    @classmethod
    def of_word(cls, u: Word) -> "RqaPoint":
        return cls("word", word=u)

    @classmethod
    def zero(cls) -> "RqaPoint":
        return cls("word", word=Word(0, 0))

    @classmethod
    def one(cls) -> "RqaPoint":
        return cls("one")

    @classmethod
    def periodic(cls, k: int) -> "RqaPoint":
        if k < 0:
            raise DomainError("period exponent must be non-negative")
        return cls("periodic", k=k)

    @classmethod
    def seed(cls, x: float) -> "RqaPoint":
        return cls("seed", x=float(x))

    def __post_init__(self):
        if self.kind not in ("word", "one", "periodic", "seed"):
            raise DomainError(f"unknown point kind {self.kind!r}")


@dataclass(frozen=True)
class ApproxValue:
    """A value with a certified error radius.

    ``exact`` holds the rational value of the ``f_{alpha,k}`` quantity the
    approximation was read from (None for float-only values).
    """

    value: float
    error_radius: float
    k_used: int
    exact: Fraction | None = None

    @property
    def lower(self) -> float:
        return self.value - self.error_radius

    @property
    def upper(self) -> float:
        return self.value + self.error_radius

    def contains(self, y: float) -> bool:
        return self.lower <= y <= self.upper

    def as_dict(self) -> dict:
        return {
            "value": self.value,
            "error_radius": self.error_radius,
            "k_used": self.k_used,
            "exact": None if self.exact is None else str(self.exact),
        }


# -- orbits ------------------------------------------------------------------

def _map_kind(g) -> tuple[str, int | None]:
    if isinstance(g, ApproxMap):
        return "fk", g.k
    if isinstance(g, DelahayeMap):
        return "f", None
    raise DomainError("map must be a DelahayeMap or an ApproxMap")


def _period(g, x: RqaPoint) -> int | None:
    kind, k = _map_kind(g)
    if x.kind == "word" and kind == "fk":
        return 1 << k
    if x.kind == "periodic" and kind == "f":
        return 1 << x.k
    return None


def orbit_values(g, x: RqaPoint, n: int) -> list:
    """The first ``n`` orbit points; Fractions for exact kinds, floats for seeds."""
    kind, k = _map_kind(g)
    a = g.alpha
    if x.kind == "seed":
        out, y = [], x.x
        for _ in range(n):
            out.append(y)
            y = g(y)
        return out
    if x.kind == "word":
        n0 = index_of(x.word)
        if kind == "fk":
            if x.word.k > k:
                raise DomainError("word points of f_{alpha,k} need |u| <= k")
            return [kappa_value(word_from_index(n0 + i, k), a) for i in range(n)]
        # orbit of an eventually-zero infinite word: kappa of binary counters
        return [
            kappa_value(word_from_index(n0 + i, max(x.word.k, (n0 + i).bit_length(), 1)), a)
            for i in range(n)
        ]
    if x.kind == "one":
        out, y = [], Fraction(1)
        for _ in range(n):
            out.append(y)
            y = g(y)
        return out
    # periodic point: iterate one period exactly and repeat
    if kind != "f":
        raise DomainError("declared periodic points are orbits of f_alpha")
    P = 1 << x.k
    cycle, y = [], periodic_point(a, x.k)
    for _ in range(min(P, n)):
        cycle.append(y)
        y = g(y)
    return [cycle[i % P] for i in range(n)]


def _int_keys(vals: Sequence[Fraction], extra: Sequence[Fraction] = ()) -> tuple[np.ndarray, int]:
    den = 1
    for v in list(vals) + list(extra):
        den = math.lcm(den, v.denominator)
    keys = [v.numerator * (den // v.denominator) for v in vals]
    if keys and max(abs(v) for v in keys) < (1 << 62):
        return np.array(keys, dtype=np.int64), den
    return np.array(keys, dtype=object), den


def _rho_inf_generic(D: int, alpha: Fraction) -> Fraction:
    """``rho_inf`` between orbit points ``i`` and ``i + D`` of the orbit of 0 under f.

    The partner word is the 2-adic integer ``D`` (or ``-D``).  With
    ``D = 2^h * odd``: if bit ``h + 1`` of ``D`` is set the supremum is
    ``kappa(bin D)``, otherwise it is ``kappa`` of ``-D``, whose binary
    expansion ends in infinitely many ones: ``kappa(w 1^inf) = kappa(w) + alpha^|w|``.
    """
    if D == 0:
        return Fraction(0)
    h = (D & -D).bit_length() - 1
    if (D >> (h + 1)) & 1:
        return kappa_value(word_from_index(D, D.bit_length()), alpha)
    L = D.bit_length()
    w = word_from_index((1 << L) - D, L)
    return kappa_value(w, alpha) + alpha**L


def closeness_matrix(g, x: RqaPoint, ell, n: int, eps) -> np.ndarray:
    """Boolean ``n x n`` matrix of ``rho_ell(g^i x, g^j x) <= eps``."""
    ell = parse_ell(ell)
    if n < 1:
        raise DomainError("n must be at least 1")
    a = g.alpha
    period = _period(g, x)
    if ell != INF and period is not None and ell >= period:
        ell = INF
    if x.kind == "seed":
        if ell == INF:
            raise DomainError("infinite horizon is not computable for float seeds")
        vals = np.array(orbit_values(g, x, n + ell - 1), dtype=float)
        e = float(as_threshold(eps, a).value)
        worst = np.zeros((n, n))
        for t in range(ell):
            v = vals[t : t + n]
            worst = np.maximum(worst, np.abs(v[:, None] - v[None, :]))
        return worst <= e
    e = as_threshold(eps, a).value
    if ell == INF:
        idx = np.arange(n)
        D = np.abs(idx[:, None] - idx[None, :])
        if period is not None:
            cyc = orbit_values(g, x, period)
            keys, den = _int_keys(cyc)
            lim = e * den
            ok = np.array(
                [np.max(np.abs(keys - np.roll(keys, -d))) <= lim for d in range(period)], dtype=bool
            )
            return ok[D % period]
        if x.kind != "word" or _map_kind(g)[0] != "f":
            raise DomainError("infinite horizon needs a periodic orbit or a word point of f")
        ok = np.array([_rho_inf_generic(d, a) <= e for d in range(n)], dtype=bool)
        return ok[D]
    vals = orbit_values(g, x, n + ell - 1)
    keys, den = _int_keys(vals)
    lim = e * den
    worst = np.zeros((n, n), dtype=keys.dtype)
    for t in range(ell):
        v = keys[t : t + n]
        worst = np.maximum(worst, np.abs(v[:, None] - v[None, :]))
    if keys.dtype == object:
        return np.vectorize(lambda w: w <= lim, otypes=[bool])(worst)
    return worst <= math.floor(lim)


def corr_sum(g, x: RqaPoint, ell, n: int, eps) -> Fraction:
    """``C_ell(x, n, eps)``: fraction of index pairs below ``n`` that are ``eps``-close."""
    C = closeness_matrix(g, x, ell, n, eps)
    return Fraction(int(C.sum()), n * n)


def _recurrence_matrix(C: np.ndarray, ell) -> np.ndarray:
    n = C.shape[0]
    back = n - 1 if ell == INF else min(int(ell) - 1, n - 1)
    E = C.copy()
    for s in range(1, back + 1):
        E[s:, s:] |= C[:-s, :-s]
    return E


def rec_rate(g, x: RqaPoint, ell, n: int, eps) -> Fraction:
    """``RR_ell(x, n, eps)`` from the backtracking definition (pairs ``(i - s, j - s)``)."""
    ell = parse_ell(ell)
    E = _recurrence_matrix(closeness_matrix(g, x, ell, n, eps), ell)
    return Fraction(int(E.sum()), n * n)


def rec_rate_identity(g, x: RqaPoint, ell, n: int, eps) -> Fraction:
    """``ell C_ell - (ell - 1) C_{ell+1}`` (``C_inf`` for ``ell = inf``)."""
    ell = parse_ell(ell)
    if ell == INF:
        return corr_sum(g, x, INF, n, eps)
    return ell * corr_sum(g, x, ell, n, eps) - (ell - 1) * corr_sum(g, x, ell + 1, n, eps)


def det(g, x: RqaPoint, ell, n: int, eps) -> Fraction:
    """``DET_ell = RR_ell / RR_1``."""
    rr1 = rec_rate(g, x, 1, n, eps)
    if rr1 == 0:
        raise ZeroDivisionError("RR_1 vanishes")
    return rec_rate(g, x, ell, n, eps) / rr1


# -- correlation integrals ----------------------------------------------------

def level_cap(ell) -> int:
    """Largest k for which the ``f_{alpha,k}`` integral is computed."""
    ell = parse_ell(ell)
    if ell == 1:
        cap = C1_MAX_K
    elif ell == INF:
        cap = 30
    else:
        cap = WINDOW_MAX_K
    return min(cap, max_k())


def corr_integral_fk(alpha, k: int, ell, eps) -> Fraction:
    """Exact ``c_ell`` of ``f_{alpha,k}`` (uniform measure on the orbit of 0)."""
    if k < 1:
        raise DomainError("k must be at least 1")
    ell = parse_ell(ell)
    cap = C1_MAX_K if ell == 1 else 30 if ell == INF else WINDOW_MAX_K
    if k > cap:
        raise DomainError(f"k = {k} exceeds the resource cap {cap} for ell = {ell}")
    return Fraction(count_close_pairs(k, alpha, ell, eps), 1 << (2 * k))


def asymptotic_det(alpha, k: int, ell, eps) -> Fraction:
    """``det_ell`` of ``f_{alpha,k}``: ``(ell c_ell - (ell-1) c_{ell+1}) / c_1``."""
    ell = parse_ell(ell)
    c1 = corr_integral_fk(alpha, k, 1, eps)
    if ell == INF:
        return corr_integral_fk(alpha, k, INF, eps) / c1
    num = ell * corr_integral_fk(alpha, k, ell, eps) - (ell - 1) * corr_integral_fk(alpha, k, ell + 1, eps)
    return num / c1


def conditional_integral(alpha, k: int, ell2, ell1, eps) -> Fraction:
    """``c^{ell2 | ell1} = c_{ell2} / c_{ell1}`` for ``f_{alpha,k}``."""
    return corr_integral_fk(alpha, k, ell2, eps) / corr_integral_fk(alpha, k, ell1, eps)


def corr_bound(ell, k: int) -> float:
    """Approximation error of ``c_ell`` of ``f_alpha`` by that of ``f_{alpha,k}``."""
    ell = parse_ell(ell)
    if ell == 1:
        return 8 / 2**k
    if ell == INF:
        return 4 / 2**k
    return 16 * ell / 2**k


def scale_index(alpha, eps) -> int:
    """``h >= 0`` with ``alpha^{h+1} < eps <= alpha^h`` (0 for ``eps > 1``)."""
    a = parse_alpha(alpha)
    e = as_threshold(eps, a).value
    if e <= 0:
        raise DomainError("eps must be positive")
    h = 0
    while a ** (h + 1) >= e:
        h += 1
    return h


def det_bound(k: int, h: int) -> float:
    """``24 / (2^{k-h-1} - 8)``; infinite when the denominator is not positive."""
    d = 2 ** (k - h - 1) - 8
    return math.inf if d <= 0 else 24 / d


def _min_level(a: Fraction, e: Fraction) -> int:
    k = 1
    while a**k >= e:
        k += 1
    return k


def corr_integral_f(alpha, ell, eps, tol: float) -> ApproxValue:
    """``c_ell`` of ``f_alpha`` within a certified radius below ``tol``.

    ``k`` is the smallest level with ``eps > alpha^k`` and ``corr_bound(ell, k) < tol``.
    """
    if not tol > 0:
        raise DomainError("tol must be positive")
    a = parse_alpha(alpha)
    ell = parse_ell(ell)
    e = as_threshold(eps, a).value
    if e <= 0:
        raise DomainError("eps must be positive")
    cap = level_cap(ell)
    k = _min_level(a, e)
    while corr_bound(ell, k) >= tol and k <= cap:
        k += 1
    if k > cap:
        raise ToleranceUnreachable(
            f"tolerance {tol} needs k > {cap}", best_radius=corr_bound(ell, cap), k_used=cap
        )
    c = corr_integral_fk(a, k, ell, e)
    return ApproxValue(float(c), corr_bound(ell, k), k, c)


def det_inf_f(alpha, eps, tol: float) -> ApproxValue:
    """``det_inf`` of ``f_alpha`` with radius ``24 / (2^{k-h-1} - 8) < tol``."""
    if not tol > 0:
        raise DomainError("tol must be positive")
    a = parse_alpha(alpha)
    e = as_threshold(eps, a).value
    h = scale_index(a, e)
    cap = min(level_cap(1), h + 30)
    k = max(_min_level(a, e), h + 5)
    while det_bound(k, h) >= tol and k <= cap:
        k += 1
    if k > cap:
        raise ToleranceUnreachable(
            f"tolerance {tol} needs k > {cap} at scale h = {h}",
            best_radius=det_bound(cap, h),
            k_used=cap,
        )
    d = corr_integral_fk(a, k, INF, e) / corr_integral_fk(a, k, 1, e)
    return ApproxValue(float(d), det_bound(k, h), k, d)


def det_bracket(alpha, k: int, eps_lo, eps_hi=None) -> tuple[float, float]:
    """Certified enclosure of ``det_inf`` of ``f_alpha`` on ``[eps_lo, eps_hi]``.

    Uses the monotonicity of both integrals in eps together with the
    integral error bounds:
    ``(c_inf(lo) - 4/2^k) / (c_1(hi) + 8/2^k) <= det <= (c_inf(hi) + 4/2^k) / (c_1(lo) - 8/2^k)``.
    Requires ``eps_lo > alpha^k``.
    """
    a = parse_alpha(alpha)
    lo = as_threshold(eps_lo, a).value
    hi = lo if eps_hi is None else as_threshold(eps_hi, a).value
    if not lo > a**k:
        raise DomainError("the bracket needs eps > alpha^k")
    ci_lo = float(corr_integral_fk(a, k, INF, lo))
    ci_hi = ci_lo if hi == lo else float(corr_integral_fk(a, k, INF, hi))
    c1_lo = float(corr_integral_fk(a, k, 1, lo))
    c1_hi = c1_lo if hi == lo else float(corr_integral_fk(a, k, 1, hi))
    r1, ri = 8 / 2**k, 4 / 2**k
    lower = max(0.0, (ci_lo - ri) / (c1_hi + r1))
    upper = (ci_hi + ri) / (c1_lo - r1) if c1_lo > r1 else math.inf
    return lower, min(upper, 1.0)


def epsilon_threshold(alpha, ell) -> tuple[int, Fraction]:
    """Constructive (not sharp) radius below which ``DET_ell = 1``.

    Returns ``(h, e0)`` with ``h`` the least integer such that ``ell <= 2^h``
    and ``e0 = (1 - 2 alpha) alpha^{h-1}``; every ``eps < e0`` qualifies.
    """
    a = parse_alpha(alpha)
    ell = parse_ell(ell)
    if ell == INF:
        raise DomainError("no finite-horizon threshold for ell = inf")
    h = max(0, (int(ell) - 1).bit_length())
    return h, (1 - 2 * a) * a ** (h - 1) if h >= 1 else (1 - 2 * a) / a


# -- correlation sandwich from boundary words ------------------------------

def _last_close(row: Word, alpha: Fraction, e: Fraction) -> Word:
    """Largest ``v >= row`` (gamma order) with ``rho(row, v) <= eps``."""
    lo, hi = 0, (1 << row.k) - 1 - row.packed
    base = kappa_value(row, alpha)
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if kappa_value(succ_rl(row, mid), alpha) - base <= e:
            lo = mid
        else:
            hi = mid - 1
    return succ_rl(row, lo)


def boundary_words(alpha, k: int, h: int, eps) -> list[Word]:
    """Boundary words ``u_1 .. u_{h+1}`` of length ``k + h`` for :func:`c1_bounds`.

    ``u_1`` is the last word close to ``0^{k+h}``; ``u_m`` (m >= 2) the last
    word close to ``0^{h-m+2} 1^{k+m-2}``.
    """
    a = parse_alpha(alpha)
    e = as_threshold(eps, a).value
    n = k + h
    words = [_last_close(Word.zeros(n), a, e)]
    for m in range(2, h + 2):
        row = Word(n, (1 << (k + m - 2)) - 1)
        words.append(_last_close(row, a, e))
    return words


def c1_bounds(alpha, k: int, h: int, eps, words: Sequence[Word] | None = None) -> tuple[Fraction, Fraction]:
    """Sandwich on ``c_1`` of ``f_{alpha,k+h}`` from boundary-word offsets.

    With ``j_1 = 2^k - gamma(u_1)`` and ``j_m = gamma(u_m) - 2^{k+m-2}``:

    lower = ``[2^{h+1} (2^{2k-1} - j_1^2) + sum 2^{h-m+1} j_m^2] / 4^{k+h}``
    upper = ``[2^h (2^{2k} - j_1^2) + sum 2^{h-m+2} j_m^2] / 4^{k+h}``
    """
    a = parse_alpha(alpha)
    e = as_threshold(eps, a).value
    if not (a ** (h + 1) < e <= a**h):
        raise DomainError("eps must lie in (alpha^{h+1}, alpha^h]")
    n = k + h
    if words is None:
        words = boundary_words(a, k, h, e)
    words = list(words)
    if len(words) != h + 1 or any(w.k != n for w in words):
        raise DomainError(f"need h + 1 = {h + 1} boundary words of length {n}")
    rows = [Word.zeros(n)] + [Word(n, (1 << (k + m - 2)) - 1) for m in range(2, h + 2)]
    for m, (row, u) in enumerate(zip(rows, words), start=1):
        if rho(row, u, a).value > e:
            raise DomainError(f"boundary word u_{m} = {u} is not eps-close to its row")
        if u.packed + 1 < (1 << n) and rho(row, succ_rl(u, 1), a).value <= e:
            raise DomainError(f"the successor of u_{m} = {u} is still eps-close")
    g1 = gamma(words[0])
    if not (2 ** (k - 1) < g1 <= 2**k):
        raise DomainError("gamma(u_1) must lie in (2^{k-1}, 2^k]")
    js = [2**k - g1]
    for m in range(2, h + 2):
        g = gamma(words[m - 1])
        if not (2 ** (k + m - 2) <= g < 2 ** (k + m - 1)):
            raise DomainError(f"gamma(u_{m}) must lie in [2^{k + m - 2}, 2^{k + m - 1})")
        js.append(g - 2 ** (k + m - 2))
    lower = 2 ** (h + 1) * (2 ** (2 * k - 1) - js[0] ** 2)
    upper = 2**h * (2 ** (2 * k) - js[0] ** 2)
    for m in range(2, h + 2):
        lower += 2 ** (h - m + 1) * js[m - 1] ** 2
        upper += 2 ** (h - m + 2) * js[m - 1] ** 2
    norm = 4**n
    return Fraction(lower, norm), Fraction(upper, norm)


# -- classification of starting points ------------------------------------

@dataclass(frozen=True)
class LimitClass:
    """Which correlation integrals are the limits of the correlation sums at ``x``."""

    periodic: bool
    k: int | None
    description: str

    def integral(self, alpha, ell, eps, tol: float = 1e-3):
        """Exact ``c_ell`` of ``f_{alpha,k}`` or a certified ``c_ell`` of ``f_alpha``."""
        if self.periodic:
            return corr_integral_fk(alpha, self.k, ell, eps) if self.k else Fraction(1)
        return corr_integral_f(alpha, ell, eps, tol)


def classify_point(x: RqaPoint, alpha=None) -> LimitClass:
    """Classify a symbolically given point.

    Periodic points of period ``2^k`` have limits ``c_ell`` of ``f_{alpha,k}``;
    every other point (orbit points of 0, and the point 1 with ``f(1) = 0``)
    has the limits ``c_ell`` of ``f_alpha``.  Float seeds are refused because
    eventual periodicity cannot be decided numerically.
    """
    if alpha is not None:
        parse_alpha(alpha)
    if x.kind == "seed":
        raise DomainError("float seeds cannot be classified; give the point symbolically")
    if x.kind == "periodic":
        return LimitClass(True, x.k, f"periodic of period 2^{x.k}: limits are c_ell of f_(alpha,{x.k})")
    if x.kind == "one":
        return LimitClass(False, None, "f(1) = 0: limits are c_ell of f_alpha")
    return LimitClass(False, None, "orbit of 0 (not eventually periodic): limits are c_ell of f_alpha")
