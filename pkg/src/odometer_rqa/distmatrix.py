"""Distance matrices ``D_{k,alpha,ell}(eps)`` and fast pair counts.

Entry ``[gamma(u), gamma(v)]`` of the matrix is 1 iff the word trajectories of
``u`` and ``v`` stay within ``eps`` for ``ell`` steps (all ties count as close).
Trajectories of level-k words are ``2^k``-periodic, so ``ell = inf`` means one
full period.

Three counting paths are provided and cross-checked in the tests:

* ``brute_force_count``: every pair, every time step (O(4^k ell)).
* diagonal windows: pairs ``(n, n + d)`` in orbit order share one
  closeness vector per ``d``; an ``ell``-window test is a cumulative sum.
* row one: ``rho_inf(u, v) = rho_inf(0^k, v (+) (-u))`` so for ``ell = inf``
  only the first row matters, and the closed-form boundary count needs a
  single binary search.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ._points import PointSet, point_set
from .exact import DomainError, ExactDistance, as_threshold, parse_alpha
from .words import Word, add_lr, add_lr_n, kappa, kappa_value, neg_lr

__all__ = [
    "INF",
    "MATRIX_MAX_K",
    "WINDOW_MAX_K",
    "BRUTE_MAX_K",
    "parse_ell",
    "rho_ell",
    "rho_inf_fast",
    "DistanceMatrix",
    "build_matrix",
    "PatternReport",
    "verify_patterns",
    "close_pair_count_inf",
    "row_one_count_inf",
    "window_count",
    "brute_force_count",
    "count_close_pairs",
    "boundary_word_inf",
]

INF = math.inf
MATRIX_MAX_K = 15
WINDOW_MAX_K = 14
BRUTE_MAX_K = 11
ROW_BLOCK = 256


def parse_ell(ell) -> float | int:
    """Accept an integer >= 1, ``math.inf`` or the strings ``"inf"``/``"∞"``."""
    if isinstance(ell, str):
        s = ell.strip().lower()
        if s in ("inf", "infinity", "∞"):
            return INF
        try:
            ell = int(s)
        except ValueError as exc:
            raise DomainError(f"ell must be a positive integer or 'inf', got {ell!r}") from exc
    if ell == INF:
        return INF
    if isinstance(ell, float) and ell.is_integer():
        ell = int(ell)
    if not isinstance(ell, int) or isinstance(ell, bool) or ell < 1:
        raise DomainError(f"ell must be a positive integer or inf, got {ell!r}")
    return ell


def ell_str(ell) -> str:
    return "inf" if ell == INF else str(ell)


def _steps(ell, k: int) -> int:
    """Number of distinct time steps to inspect (trajectories have period 2^k)."""
    n = 1 << k
    return n if ell == INF else min(int(ell), n)


# -- single pairs ------------------------------------------------------------

def rho_ell(u: Word, v: Word, ell, alpha) -> ExactDistance:
    """``max_{0 <= i < ell} rho(u (+) i, v (+) i)`` over at most one period."""
    if u.k != v.k:
        raise DomainError(f"length mismatch: {u.k} vs {v.k}")
    a = parse_alpha(alpha)
    ell = parse_ell(ell)
    best, best_i = Fraction(-1), 0
    for i in range(_steps(ell, u.k)):
        d = abs(kappa_value(add_lr_n(u, i), a) - kappa_value(add_lr_n(v, i), a))
        if d > best:
            best, best_i = d, i
    return abs(kappa(add_lr_n(u, best_i), a) - kappa(add_lr_n(v, best_i), a))


def rho_inf_fast(u: Word, v: Word, alpha) -> ExactDistance:
    """``rho_inf(u, v)`` from a single aligned distance.

    Shift so that ``u`` becomes ``0^k``; the partner is ``d = v (+) (-u)``.
    Writing ``d = 0^h 1 x``, the supremum is ``kappa(d)`` when ``x`` starts
    with 1 (or is empty) and ``kappa(-d)`` otherwise, where ``-d = 0^h 1 1 x'``.
    """
    if u.k != v.k:
        raise DomainError(f"length mismatch: {u.k} vs {v.k}")
    a = parse_alpha(alpha)
    if u == v:
        return ExactDistance((), a)
    d = add_lr(v, neg_lr(u))
    k = d.k
    h = k - d.packed.bit_length()
    if h == k - 1 or d[h + 2] == 1:
        return kappa(d, a)
    return kappa(neg_lr(d), a)


# -- counting ----------------------------------------------------------------

def _diag_windows(ps: PointSet, thr, d: int, steps: int) -> np.ndarray:
    """``ok[n]``: pair ``(n, n + d)`` is close at all times ``0..steps-1`` (cyclic)."""
    N = ps.N
    n = np.arange(N)
    c = ps.close(n, (n + d) % N, thr)
    if steps >= N:
        return np.full(N, bool(c.all()))
    if steps == 1:
        return c
    ext = np.concatenate([c, c[: steps - 1]])
    bad = np.concatenate([[0], np.cumsum(~ext)])
    return (bad[n + steps] - bad[n]) == 0


def window_count(k: int, alpha, ell, eps) -> int:
    """Ordered close pairs via per-diagonal window sums (O(4^k), independent of ell)."""
    if k > WINDOW_MAX_K:
        raise DomainError(f"window counting is capped at k <= {WINDOW_MAX_K}")
    ps = PointSet(alpha, k)
    thr = ps.threshold(eps)
    steps = _steps(parse_ell(ell), k)
    N = ps.N
    total = 0
    for d in range(N // 2 + 1):
        c = int(_diag_windows(ps, thr, d, steps).sum())
        # (n, n + d) and (n + d, n + d + (N - d)) describe the same pairs
        total += c if d in (0, N - d) else 2 * c
    return total


def brute_force_count(k: int, alpha, ell, eps) -> int:
    """Reference count: every ordered pair, every time step, exact integers."""
    if k > BRUTE_MAX_K:
        raise DomainError(f"brute force is capped at k <= {BRUTE_MAX_K}")
    ps = PointSet(alpha, k)
    N = ps.N
    steps = _steps(parse_ell(ell), k)
    keys = np.array([ps.exact_key(n) for n in range(N)], dtype=object)
    if ps.exact_int:
        keys = keys.astype(np.int64)
    lim = as_threshold(eps, ps.alpha).value * ps.scale
    n = np.arange(N)
    worst = np.zeros((N, N), dtype=keys.dtype)
    for t in range(steps):
        x = keys[(n + t) % N]
        worst = np.maximum(worst, np.abs(x[:, None] - x[None, :]))
    if ps.exact_int:
        return int((worst <= math.floor(lim)).sum()) if lim >= 0 else 0
    return int(sum(1 for w in worst.ravel() if w <= lim))


def row_one_count_inf(k: int, alpha, eps) -> int:
    """``2^k * #{d : rho_inf(0^k, d) <= eps}``, one pass over the first row."""
    ps = point_set(parse_alpha(alpha), k)
    return ps.N * ps.count_rho_inf_le_row(eps)


def _key_cmp(word_packed: int, k: int, ps_alpha: Fraction, eps_value: Fraction) -> bool:
    return kappa_value(Word(k, word_packed), ps_alpha) <= eps_value


def boundary_word_inf(k: int, alpha, eps) -> tuple[int, Word | None]:
    """Locate the boundary of row one for ``ell = inf``.

    Returns ``(h, u)`` with ``alpha^{h+1} < eps <= alpha^h`` and ``u`` the
    largest ``w`` of length ``k - h - 2`` with ``kappa(0^h 1 1 w) <= eps``
    (None if no such ``w`` exists).
    """
    a = parse_alpha(alpha)
    e = as_threshold(eps, a).value
    if e <= 0:
        raise DomainError("eps must be positive")
    h = 0
    while a ** (h + 1) >= e:
        h += 1
    if e > 1:
        h = -1
    m = k - h - 2
    if h < 0 or m < 0:
        return h, None
    prefix = (1 << (m + 1)) | (1 << m)  # 0^h 1 1 in front of m free letters
    lo, hi = 0, (1 << m) - 1
    if not _key_cmp(prefix, k, a, e):
        return h, None
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if _key_cmp(prefix | mid, k, a, e):
            lo = mid
        else:
            hi = mid - 1
    return h, Word(m, lo)


def close_pair_count_inf(k: int, alpha, eps) -> int:
    """Ordered pairs with ``rho_inf <= eps`` from the boundary word alone.

    For ``alpha^{h+1} < eps <= alpha^h`` and ``k >= h + 2`` the count is
    ``2^k (2^{k-h-1} + 2 gamma(u))`` with ``u`` from :func:`boundary_word_inf`
    (``gamma(u) = 0`` when no boundary word exists).  Other cases fall back to
    scanning row one.
    """
    a = parse_alpha(alpha)
    e = as_threshold(eps, a).value
    N = 1 << k
    if e < 0:
        return 0
    if e == 0:
        return N
    if e >= 1:
        return N * N
    h, u = boundary_word_inf(k, a, e)
    if k < h + 2:
        return row_one_count_inf(k, a, e)
    g = 0 if u is None else u.packed + 1
    return N * ((1 << (k - h - 1)) + 2 * g)


def count_close_pairs(k: int, alpha, ell, eps) -> int:
    """Ones in ``D_{k,alpha,ell}(eps)`` by the fastest applicable path."""
    ell = parse_ell(ell)
    if ell == 1:
        return point_set(parse_alpha(alpha), k).count_rho_le(eps)
    if ell == INF or ell >= (1 << k):
        return close_pair_count_inf(k, alpha, eps)
    return window_count(k, alpha, ell, eps)


# -- materialised matrices ----------------------------------------------------

@dataclass(frozen=True)
class DistanceMatrix:
    """Symmetric bit matrix, rows packed with :func:`numpy.packbits`.

    ``M[i, j]`` uses 1-based gamma indices like the mathematical notation.
    """

    k: int
    alpha: Fraction
    ell: float | int
    eps: ExactDistance
    packed: np.ndarray = field(repr=False)

    @property
    def size(self) -> int:
        return 1 << self.k

    def dense(self) -> np.ndarray:
        return np.unpackbits(self.packed, axis=1, count=self.size).astype(bool)

    def __getitem__(self, ij) -> int:
        i, j = ij
        if not (1 <= i <= self.size and 1 <= j <= self.size):
            raise IndexError(ij)
        byte = self.packed[i - 1, (j - 1) >> 3]
        return int((byte >> (7 - ((j - 1) & 7))) & 1)

    def ones_count(self) -> int:
        return int(np.unpackbits(self.packed, axis=1, count=self.size).sum(dtype=np.int64))

    def summary(self) -> dict:
        return {
            "k": self.k,
            "alpha": str(self.alpha),
            "ell": ell_str(self.ell),
            "eps": self.eps.poly_str(),
            "eps_value": str(self.eps.value),
            "ones_count": self.ones_count(),
        }

    def to_json(self) -> str:
        return json.dumps(self.summary(), sort_keys=True)

    def to_pbm(self, header: str = "") -> bytes:
        """Binary PBM (P4); a 1 entry (close pair) is drawn black."""
        lines = [b"P4"]
        if header:
            lines.append(b"# " + header.encode("ascii", "replace"))
        lines.append(f"{self.size} {self.size}".encode())
        return b"\n".join(lines) + b"\n" + np.ascontiguousarray(self.packed).tobytes()


def build_matrix(k: int, alpha, ell, eps) -> DistanceMatrix:
    """Materialise ``D_{k,alpha,ell}(eps)`` in gamma order."""
    ell = parse_ell(ell)
    if k < 1:
        raise DomainError("k must be at least 1")
    if k > MATRIX_MAX_K:
        raise DomainError(f"full matrices are capped at k <= {MATRIX_MAX_K}")
    ps = PointSet(alpha, k)
    thr = ps.threshold(eps)
    N = ps.N
    steps = _steps(ell, k)
    perm = ps.perm  # gamma index -> orbit index
    packed = np.zeros((N, (N + 7) // 8), dtype=np.uint8)
    cols = perm[np.newaxis, :]

    if steps == 1:
        def block(rows):
            a = perm[rows][:, None]
            return ps.close(np.broadcast_to(a, (len(rows), N)), np.broadcast_to(cols, (len(rows), N)), thr)
    elif steps >= N:
        row, witness = ps.rho_inf_row()
        ok = ps.close_diff(row, np.zeros(N, dtype=np.int64), witness, thr)

        def block(rows):
            a = perm[rows][:, None]
            return ok[(cols - a) % N]
    else:
        if k > WINDOW_MAX_K - 1:
            raise DomainError(f"finite-horizon matrices with ell > 1 are capped at k <= {WINDOW_MAX_K - 1}")
        W = np.stack([_diag_windows(ps, thr, d, steps) for d in range(N // 2 + 1)])

        def block(rows):
            a = perm[rows][:, None]
            d = (cols - a) % N
            low = d <= N // 2
            return np.where(low, W[np.minimum(d, N // 2), a], W[np.minimum(N - d, N // 2), cols])

    for start in range(0, N, ROW_BLOCK):
        rows = np.arange(start, min(start + ROW_BLOCK, N))
        packed[rows] = np.packbits(block(rows), axis=1)
    return DistanceMatrix(k, ps.alpha, ell, as_threshold(eps, ps.alpha), packed)


# -- patterns -----------------------------------------------------------------

PATTERNS = ("A0", "A1", "B0", "B1", "C0", "C1")


@dataclass(frozen=True)
class PatternReport:
    """Outcome of :func:`verify_patterns`; coordinates are 1-based ``(i, j)``."""

    holds: dict
    first_violation: dict

    @property
    def all_hold(self) -> bool:
        return all(self.holds.values())

    def as_dict(self) -> dict:
        return {
            name: {"holds": self.holds[name], "violation": self.first_violation[name]}
            for name in PATTERNS
        }


def _s_of(j: int) -> int:
    """The integer ``s`` with ``2^s < j <= 2^{s+1}`` (j >= 2)."""
    return (j - 1).bit_length() - 1


def _monotone_violation(M: np.ndarray):
    """First place where a 0 sits closer to the diagonal than a 1 on the same
    row or column (checked on both triangles).  Returns (zero_ij, one_ij)."""
    N = M.shape[0]
    for i in range(N):
        for seg, coord in (
            (M[i, i:], lambda t: (i, i + t)),               # right of the diagonal
            (M[i, : i + 1][::-1], lambda t: (i, i - t)),     # left of the diagonal
            (M[: i + 1, i][::-1], lambda t: (i - t, i)),     # above
            (M[i:, i], lambda t: (i + t, i)),                # below
        ):
            zeros = np.flatnonzero(~seg)
            if zeros.size:
                z = zeros[0]
                later = np.flatnonzero(seg[z:])
                if later.size:
                    zi, zj = coord(z)
                    oi, oj = coord(z + later[0])
                    return (zi + 1, zj + 1), (oi + 1, oj + 1)
    return None


def verify_patterns(M: DistanceMatrix | np.ndarray) -> PatternReport:
    """Check the six structural patterns of an ``ell = 1`` distance matrix.

    Index conventions (1-based, ``s = s_j``):

    * A0 / A1: along a row or a column a 0 stays 0 moving away from the
      diagonal, equivalently a 1 stays 1 moving towards it.
    * B0: ``M[1, j] = 0`` implies ``M[1+n, j+n] = 0``.
    * B1: ``M[1, j] = 1`` implies ``M[1+h 2^{s+1}, j+h 2^{s+1}] = 1`` and
      ``M[1+(h+1) 2^{s+1}-j, (h+1) 2^{s+1}] = 1``.
    * C0: ``M[2^m, j] = 0`` (``2^m <= 2^s``) implies
      ``M[2^m+h 2^{s+1}, j+h 2^{s+1}] = 0`` and
      ``M[1+(h+1) 2^{s+1}-j, 1+(h+1) 2^{s+1}-2^m] = 0``.
    * C1: ``M[2^m, j] = 1`` implies ``M[2^m+h 2^{s+1}-n, j+h 2^{s+1}-n] = 1``
      for every ``0 <= n < 2^m``.
    """
    if isinstance(M, DistanceMatrix):
        if M.ell != 1:
            raise DomainError("patterns are stated for ell = 1 matrices")
        D = M.dense()
    else:
        D = np.asarray(M, dtype=bool)
    N = D.shape[0]
    holds = {p: True for p in PATTERNS}
    first = {p: None for p in PATTERNS}

    def fail(name, ij):
        if holds[name]:
            holds[name] = False
            first[name] = (int(ij[0]) + 1, int(ij[1]) + 1)

    mono = _monotone_violation(D)
    if mono is not None:
        zero_ij, one_ij = mono
        holds["A0"] = holds["A1"] = False
        first["A0"] = one_ij   # the 1 that should have been 0
        first["A1"] = zero_ij  # the 0 that should have been 1

    # B0: whole diagonal through (1, j) vanishes once its first entry does
    for j in range(N):
        if not D[0, j]:
            diag = np.diagonal(D, offset=j)
            bad = np.flatnonzero(diag)
            if bad.size:
                fail("B0", (bad[0], bad[0] + j))

    for j1 in range(2, N + 1):  # 1-based column index
        s = _s_of(j1)
        step = 1 << (s + 1)
        hs = np.arange(N // step) if step <= N else np.arange(0)
        if hs.size == 0:
            continue
        # B1
        if D[0, j1 - 1]:
            r1, c1 = 1 + hs * step, j1 + hs * step
            r2, c2 = 1 + (hs + 1) * step - j1, (hs + 1) * step
            for r, c in ((r1, c1), (r2, c2)):
                vals = D[r - 1, c - 1]
                if not vals.all():
                    t = np.flatnonzero(~vals)[0]
                    fail("B1", (r[t] - 1, c[t] - 1))
        for m in range(0, s + 1):
            row = 1 << m
            if row >= j1:
                continue
            if not D[row - 1, j1 - 1]:
                r1, c1 = row + hs * step, j1 + hs * step
                r2, c2 = 1 + (hs + 1) * step - j1, 1 + (hs + 1) * step - row
                for r, c in ((r1, c1), (r2, c2)):
                    vals = D[r - 1, c - 1]
                    if vals.any():
                        t = np.flatnonzero(vals)[0]
                        fail("C0", (r[t] - 1, c[t] - 1))
            else:
                ns = np.arange(row)
                r = (row + hs[:, None] * step - ns[None, :]).ravel()
                c = (j1 + hs[:, None] * step - ns[None, :]).ravel()
                vals = D[r - 1, c - 1]
                if not vals.all():
                    t = np.flatnonzero(~vals)[0]
                    fail("C1", (r[t] - 1, c[t] - 1))
    return PatternReport(holds, first)
