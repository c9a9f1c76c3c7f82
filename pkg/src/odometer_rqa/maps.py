"""The interval maps ``f_alpha`` and their periodic approximations ``f_{alpha,k}``.

Both maps accept floats or :class:`fractions.Fraction` arguments.  With a
Fraction argument every operation is exact, which is how the symbolic
skeleton (points ``kappa(u)``) is followed without rounding.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .exact import DomainError, parse_alpha
from .words import Word, kappa_value

__all__ = [
    "BRANCH_CAP",
    "SNAP_TO_ONE",
    "DelahayeMap",
    "ApproxMap",
    "f_eval",
    "fk_eval",
    "orbit",
    "IntervalU",
    "interval_of",
    "locate",
    "periodic_point",
    "periodic_point_float",
    "scan_period",
]

BRANCH_CAP = 64
SNAP_TO_ONE = 1e-15

Real = Union[float, Fraction]


def _check_unit(x: Real) -> None:
    if not (0 <= x <= 1):
        raise DomainError(f"x = {x} lies outside [0, 1]")


@dataclass(frozen=True)
class DelahayeMap:
    """``f_alpha``: a translation on ``I(1^{j-1} 0)`` glued by expanding linear
    pieces, one pair per branch ``1 - alpha^{j-1} <= x < 1 - alpha^j``."""

    alpha: Fraction
    branch_count_cap: int = BRANCH_CAP

    def __init__(self, alpha, branch_count_cap: int = BRANCH_CAP):
        object.__setattr__(self, "alpha", parse_alpha(alpha))
        object.__setattr__(self, "branch_count_cap", branch_count_cap)

    def __call__(self, x: Real) -> Real:
        return f_eval(self, x)

    def branch(self, x: Real) -> int:
        """Branch index ``j >= 1`` with ``1 - a^{j-1} <= x < 1 - a^j`` (0 for x = 1)."""
        _check_unit(x)
        exact = isinstance(x, Fraction)
        if x == 1 or (not exact and 1 - x < SNAP_TO_ONE):
            return 0
        a = self.alpha if exact else float(self.alpha)
        aj = a
        for j in range(1, (10**9 if exact else self.branch_count_cap) + 1):
            if x < 1 - aj:
                return j
            aj *= a
        return self.branch_count_cap


def _branch_value(alpha: Real, j: int, x: Real) -> Real:
    a = alpha
    a_prev = a ** (j - 1)
    a_j = a_prev * a
    if x <= 1 - a_prev + a_j:
        return x - 1 + 2 * a_prev - a_j
    return (1 - a + a * a) / (2 * a - 1) * (x - 1) + a_j * a * (2 - a) / (2 * a - 1)


def f_eval(m: DelahayeMap, x: Real) -> Real:
    """Evaluate ``f_alpha``; exact for Fraction input."""
    j = m.branch(x)
    if j == 0:
        return Fraction(0) if isinstance(x, Fraction) else 0.0
    a = m.alpha if isinstance(x, Fraction) else float(m.alpha)
    return _branch_value(a, j, x)


@dataclass(frozen=True)
class ApproxMap:
    """``f_{alpha,k}``: equals ``f_alpha`` up to ``1 - a^{k-1} + a^k``, is the
    translation ``x - 1 + a^k`` on ``[1 - a^k, 1]`` and linear in between.
    ``k = 0`` is the identity."""

    alpha: Fraction
    k: int

    def __init__(self, alpha, k: int):
        if k < 0:
            raise DomainError("approximation order must be non-negative")
        object.__setattr__(self, "alpha", parse_alpha(alpha))
        object.__setattr__(self, "k", k)

    def __call__(self, x: Real) -> Real:
        return fk_eval(self, x)


def fk_eval(m: ApproxMap, x: Real) -> Real:
    """Evaluate ``f_{alpha,k}``; exact for Fraction input."""
    _check_unit(x)
    if m.k == 0:
        return x
    exact = isinstance(x, Fraction)
    a = m.alpha if exact else float(m.alpha)
    ak = a**m.k
    x1 = 1 - ak / a + ak
    if x <= x1:
        return f_eval(DelahayeMap(m.alpha), x)
    if x >= 1 - ak:
        return x - 1 + ak
    # straight line from (x1, a^{k-1}) down to (1 - a^k, 0)
    return (ak / a) * (1 - ak - x) / (1 - ak - x1)


def orbit(g, x: Real, n: int) -> list:
    """``[x, g(x), ..., g^{n-1}(x)]``."""
    if n < 0:
        raise DomainError("n must be non-negative")
    out = []
    for _ in range(n):
        out.append(x)
        x = g(x)
    return out


@dataclass(frozen=True)
class IntervalU:
    """``I(u) = [kappa(u), kappa(u) + alpha^{|u|}]``."""

    u: Word
    alpha: Fraction

    @property
    def left(self) -> Fraction:
        return kappa_value(self.u, self.alpha)

    @property
    def right(self) -> Fraction:
        return self.left + self.alpha**self.u.k

    @property
    def length(self) -> Fraction:
        return self.alpha**self.u.k

    def __contains__(self, x) -> bool:
        return self.left <= x <= self.right


def interval_of(u: Word, alpha) -> IntervalU:
    return IntervalU(u, parse_alpha(alpha))


def locate(x: Real, k: int, alpha, tol: float = 0.0) -> Word | None:
    """The word ``u`` of length ``k`` with ``x`` in ``I(u)``, or None if ``x`` is in a gap.

    ``tol`` widens every interval on both sides (only meaningful for floats).
    """
    _check_unit(x)
    a = parse_alpha(alpha)
    exact = isinstance(x, Fraction)
    if exact:
        tol = Fraction(tol)
    else:
        a = float(a)
    left = Fraction(0) if exact else 0.0
    width = Fraction(1) if exact else 1.0
    packed = 0
    for _ in range(k):
        sub = width * a
        if x <= left + sub + tol:
            packed = packed << 1
        elif x >= left + width - sub - tol:
            packed = (packed << 1) | 1
            left = left + width - sub
        else:
            return None
        width = sub
    return Word(k, packed)


def periodic_point(alpha, k: int) -> Fraction:
    """The point of least period ``2^k`` lying in ``I(0^k)`` but in no interval of level ``k + 1``.

    ``f^{2^k}`` maps the gap between ``I(0^{k+1})`` and ``I(0^k 1)`` into
    itself and is affine there; the fixed point is solved exactly.
    """
    a = parse_alpha(alpha)
    f = DelahayeMap(a)
    lo, hi = a ** (k + 1), (1 - a) * a**k
    probes = [lo + (hi - lo) * Fraction(t, 4) for t in (1, 2, 3)]
    images = []
    for p in probes:
        y = p
        for _ in range(1 << k):
            y = f(y)
        images.append(y)
    slope = (images[1] - images[0]) / (probes[1] - probes[0])
    if images[2] - images[1] != slope * (probes[2] - probes[1]):
        raise ArithmeticError("return map is not affine on the gap")
    offset = images[0] - slope * probes[0]
    return offset / (1 - slope)


def periodic_point_float(alpha, k: int, xtol: float = 1e-13) -> float:
    """Bisection for the same periodic point using float iteration."""
    a = float(parse_alpha(alpha))
    f = DelahayeMap(alpha)
    lo, hi = a ** (k + 1), (1 - a) * a**k

    def g(x):
        y = x
        for _ in range(1 << k):
            y = f(y)
        return y - x

    glo = g(lo)
    if glo * g(hi) > 0:
        raise ArithmeticError("no sign change on the gap")
    while hi - lo > xtol:
        mid = 0.5 * (lo + hi)
        gm = g(mid)
        if (gm > 0) == (glo > 0):
            lo, glo = mid, gm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def scan_period(alpha, p: int, grid: int = 20000, xtol: float = 1e-12) -> list[float]:
    """Points of least period ``p`` found by a sign-change scan of ``f^p(x) - x``.

    Roots that are also roots of ``f^d(x) - x`` for a proper divisor ``d`` are
    discarded.  This is a numerical search and proves nothing by itself.
    """
    f = DelahayeMap(alpha)

    def fp(x, n):
        for _ in range(n):
            x = f(x)
        return x

    def g(x):
        return fp(x, p) - x

    xs = [i / grid for i in range(grid + 1)]
    gs = [g(x) for x in xs]
    found = []
    for x0, x1, g0, g1 in zip(xs, xs[1:], gs, gs[1:]):
        if g0 == 0:
            root = x0
        elif g0 * g1 < 0:
            lo, hi, glo = x0, x1, g0
            while hi - lo > xtol:
                mid = 0.5 * (lo + hi)
                gm = g(mid)
                if (gm > 0) == (glo > 0):
                    lo, glo = mid, gm
                else:
                    hi = mid
            root = 0.5 * (lo + hi)
            # keep only genuine roots
            if abs(g(root)) > 1e-6:
                continue
        else:
            continue
        if all(abs(fp(root, d) - root) > 1e-6 for d in range(1, p) if p % d == 0):
            found.append(root)
    return found
