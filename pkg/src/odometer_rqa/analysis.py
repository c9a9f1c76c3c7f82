"""Determinism as a function of eps: profiles, extremes and inversion over alpha.

For ``eps <= (1 - 2 alpha) / alpha`` the infinite-horizon determinism is
invariant under ``eps -> alpha * eps``, so a single fundamental domain
``(alpha^{s+1}, alpha^s]`` carries every value taken as ``eps -> 0``.  The
liminf (``utdet``) sits at ``alpha^s - alpha^{s+2}``; the limsup (``otdet``)
is 1 at ``alpha^s`` when ``alpha <= 1/3`` and is otherwise estimated on a grid
with a certified upper bound.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from fractions import Fraction

from ._svg import line_plot
from .distmatrix import close_pair_count_inf, count_close_pairs
from .exact import DomainError, ToleranceUnreachable, as_threshold, parse_alpha
from .rqa import ApproxValue, det_bound, det_inf_f, level_cap

__all__ = [
    "DEFAULT_GRID",
    "fundamental_index",
    "fundamental_domain",
    "reduce_eps",
    "critical_points",
    "DetProfile",
    "det_profile",
    "DetExtremes",
    "det_extremes",
    "utdet",
    "NoBracket",
    "AlphaSearch",
    "find_alpha_for_liminf",
]

DEFAULT_GRID = 512


def fundamental_index(alpha) -> int:
    """Smallest ``s >= 0`` with ``alpha^s <= (1 - 2 alpha) / alpha``."""
    a = parse_alpha(alpha)
    bound = (1 - 2 * a) / a
    s = 0
    while a**s > bound:
        s += 1
    return s


def fundamental_domain(alpha) -> tuple[Fraction, Fraction]:
    """``(alpha^{s+1}, alpha^s]`` as its two endpoints."""
    a = parse_alpha(alpha)
    s = fundamental_index(a)
    return a ** (s + 1), a**s


def critical_points(alpha) -> dict:
    """The two distinguished thresholds of the fundamental domain."""
    a = parse_alpha(alpha)
    s = fundamental_index(a)
    return {"utdet": a**s - a ** (s + 2), "otdet": a**s}


def reduce_eps(alpha, eps) -> Fraction:
    """Move ``eps`` into the fundamental domain without changing ``det_inf``.

    Thresholds below the domain are divided by alpha; thresholds above it are
    multiplied by alpha, which is only valid while ``eps <= (1 - 2 alpha) / alpha``.
    """
    a = parse_alpha(alpha)
    e = as_threshold(eps, a).value
    if e <= 0:
        raise DomainError("eps must be positive")
    lo, hi = fundamental_domain(a)
    while e <= lo:
        e /= a
    while e > hi:
        if e > (1 - 2 * a) / a:
            raise DomainError("eps lies above the self-similar range (1 - 2 alpha) / alpha")
        e *= a
    return e


def profile_level(alpha, tol: float) -> int:
    """Level ``k`` giving ``det`` radius below ``tol`` on the whole fundamental domain."""
    a = parse_alpha(alpha)
    s = fundamental_index(a)
    cap = level_cap(1)
    k = s + 5
    while det_bound(k, s) >= tol and k <= cap:
        k += 1
    if k > cap:
        raise ToleranceUnreachable(
            f"tolerance {tol} needs k > {cap} for alpha = {a}", best_radius=det_bound(cap, s), k_used=cap
        )
    return k


@dataclass
class DetProfile:
    """``eps -> det_inf(eps)`` sampled on one fundamental domain at one level ``k``."""

    alpha: Fraction
    s: int
    k_used: int
    eps: list
    det: list
    c1: list = field(repr=False)
    cinf: list = field(repr=False)
    flags: list = field(default_factory=list)

    @property
    def critical(self) -> dict:
        return critical_points(self.alpha)

    def argmin(self) -> int:
        return min(range(len(self.det)), key=lambda i: self.det[i].exact)

    def argmax(self) -> int:
        return max(range(len(self.det)), key=lambda i: self.det[i].exact)

    def index_of_eps(self, e) -> int:
        return self.eps.index(Fraction(e))

    def cell_upper_bounds(self) -> list[float]:
        """Certified upper bounds of ``det_inf`` of ``f_alpha`` on every grid cell.

        Cell ``i`` is ``[eps_{i-1}, eps_i]`` with ``eps_{-1} = alpha^{s+1}``;
        together they cover the fundamental domain.
        """
        k = self.k_used
        r1, ri = 8 / 2**k, 4 / 2**k
        left = Fraction(count_close_pairs(k, self.alpha, 1, self.alpha ** (self.s + 1)), 4**k)
        c1_left = [left] + self.c1[:-1]
        out = []
        for lo_c1, hi_cinf in zip(c1_left, self.cinf):
            den = float(lo_c1) - r1
            out.append(min(1.0, (float(hi_cinf) + ri) / den) if den > 0 else 1.0)
        return out

    def to_csv(self, header: str = "") -> str:
        buf = io.StringIO()
        if header:
            buf.write(f"# {header}\n")
        buf.write("eps,det,err,flag\n")
        for e, d, f in zip(self.eps, self.det, self.flags):
            buf.write(f"{float(e)!r},{d.value!r},{d.error_radius!r},{f}\n")
        return buf.getvalue()

    def to_svg(self, header: str = "") -> str:
        crit = self.critical
        markers = []
        for name in ("utdet", "otdet"):
            i = self.index_of_eps(crit[name])
            markers.append((float(crit[name]), self.det[i].value, f"{name} {self.det[i].value:.4f}"))
        return line_plot(
            [float(e) for e in self.eps],
            [d.value for d in self.det],
            band=[d.error_radius for d in self.det],
            title=f"det_inf(eps), alpha = {float(self.alpha):.4g}, k = {self.k_used}",
            xlabel="eps (log scale, one fundamental domain)",
            ylabel="asymptotic determinism",
            logx=True,
            markers=markers,
            ylim=(0.3, 1.02),
            comment=header,
        )


def _grid(alpha: Fraction, s: int, grid_size: int) -> list[Fraction]:
    """Log-spaced grid in ``(alpha^{s+1}, alpha^s]`` plus both critical points, exact."""
    la = math.log(float(alpha))
    pts = {alpha**s, alpha**s - alpha ** (s + 2)}
    lo = alpha ** (s + 1)
    for i in range(1, grid_size):
        e = Fraction(math.exp(la * (s + 1 - i / grid_size)))
        if lo < e < alpha**s:
            pts.add(e)
    return sorted(pts)


def det_profile(alpha, grid_size: int = DEFAULT_GRID, tol: float = 0.01) -> DetProfile:
    """Evaluate ``det_inf`` on a grid of one fundamental domain (one common level)."""
    if grid_size < 2:
        raise DomainError("grid_size must be at least 2")
    a = parse_alpha(alpha)
    s = fundamental_index(a)
    k = profile_level(a, tol)
    eps = _grid(a, s, grid_size)
    crit = critical_points(a)
    norm = 4**k
    dets, c1s, cinfs, flags = [], [], [], []
    radius = det_bound(k, s)
    for e in eps:
        c1 = Fraction(count_close_pairs(k, a, 1, e), norm)
        ci = Fraction(close_pair_count_inf(k, a, e), norm)
        d = ci / c1
        dets.append(ApproxValue(float(d), radius, k, d))
        c1s.append(c1)
        cinfs.append(ci)
        flags.append("utdet" if e == crit["utdet"] else "otdet" if e == crit["otdet"] else "")
    return DetProfile(a, s, k, eps, dets, c1s, cinfs, flags)


@dataclass(frozen=True)
class DetExtremes:
    """liminf / limsup of ``det_inf(eps)`` as ``eps -> 0``.

    ``otdet_grid_estimate`` marks a grid maximum (alpha > 1/3);
    ``otdet_certified_upper`` bounds the true limsup from above.
    """

    alpha: Fraction
    utdet: ApproxValue
    otdet: ApproxValue
    argmin_eps: Fraction
    argmax_eps: Fraction
    otdet_grid_estimate: bool
    otdet_certified_upper: float

    def as_dict(self) -> dict:
        return {
            "alpha": str(self.alpha),
            "utdet": self.utdet.as_dict(),
            "otdet": self.otdet.as_dict(),
            "argmin_eps": {"decimal": repr(float(self.argmin_eps)), "exact": str(self.argmin_eps)},
            "argmax_eps": {"decimal": repr(float(self.argmax_eps)), "exact": str(self.argmax_eps)},
            "otdet_grid_estimate": self.otdet_grid_estimate,
            "otdet_certified_upper": self.otdet_certified_upper,
        }


def utdet(alpha, tol: float = 0.01) -> ApproxValue:
    """``det_inf`` at ``alpha^s - alpha^{s+2}``, where the liminf is attained."""
    a = parse_alpha(alpha)
    return det_inf_f(a, critical_points(a)["utdet"], tol)


def det_extremes(alpha, tol: float = 0.01, grid_size: int = DEFAULT_GRID) -> DetExtremes:
    """``utdet`` and ``otdet`` with error radii."""
    a = parse_alpha(alpha)
    crit = critical_points(a)
    lo = utdet(a, tol)
    if a <= Fraction(1, 3):
        hi = det_inf_f(a, crit["otdet"], tol)
        return DetExtremes(a, lo, hi, crit["utdet"], crit["otdet"], False, min(1.0, hi.upper))
    prof = det_profile(a, grid_size, tol)
    i = prof.argmax()
    upper = max(max(prof.cell_upper_bounds()), prof.det[i].value)
    return DetExtremes(a, lo, prof.det[i], crit["utdet"], prof.eps[i], True, upper)


class NoBracket(RuntimeError):
    """No sign change of ``utdet(alpha) - target`` on the scanned grid."""

    def __init__(self, message: str, scanned: list):
        super().__init__(message)
        self.scanned = scanned


@dataclass(frozen=True)
class AlphaSearch:
    alpha: Fraction
    utdet: ApproxValue
    scanned: tuple
    bisection_steps: int


def _default_alpha_grid() -> list[Fraction]:
    return [Fraction(1, 3)] + [Fraction(i, 100) for i in range(34, 50)] + [Fraction(495, 1000), Fraction(499, 1000)]


def find_alpha_for_liminf(target, tol: float = 0.005, grid=None, max_steps: int = 60) -> AlphaSearch:
    """An alpha with ``|utdet(alpha) - target| <= tol``.

    ``utdet`` is continuous in alpha but not known to be monotone, so the
    search scans a grid for a sign change of ``utdet - target`` and bisects
    inside the first bracket.  Every evaluation carries radius ``<= tol / 4``
    and the search stops once the computed value is within ``tol / 4``.
    """
    t = Fraction(target) if not isinstance(target, float) else Fraction(str(target))
    if not (Fraction(1, 3) < t <= Fraction(8, 15)):
        raise DomainError("target must lie in (1/3, 8/15]")
    if not tol > 0:
        raise DomainError("tol must be positive")
    eval_tol = tol / 4
    grid = _default_alpha_grid() if grid is None else [parse_alpha(g) for g in grid]
    scanned = []
    prev = None
    for a in grid:
        val = utdet(a, eval_tol)
        g = val.value - float(t)
        scanned.append((a, val))
        if abs(g) <= eval_tol:
            return AlphaSearch(a, val, tuple(scanned), 0)
        if prev is not None and (prev[1] > 0) != (g > 0):
            lo, glo = prev
            hi = a
            for step in range(1, max_steps + 1):
                mid = (lo + hi) / 2
                mval = utdet(mid, eval_tol)
                gm = mval.value - float(t)
                if abs(gm) <= eval_tol:
                    return AlphaSearch(mid, mval, tuple(scanned), step)
                if (gm > 0) == (glo > 0):
                    lo, glo = mid, gm
                else:
                    hi = mid
            raise NoBracket("bisection did not reach the tolerance", scanned)
        prev = (a, g)
    raise NoBracket("no sign change of utdet - target on the alpha grid", scanned)
