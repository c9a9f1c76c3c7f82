"""Exact carriers for the map parameter and for distances/thresholds.

Distances between skeleton points are polynomials in ``alpha`` with rational
coefficients.  They are compared through a float fast path, and only values
that land inside a narrow guard band are re-decided in exact rational
arithmetic.  The interesting thresholds (``alpha**h``, ``alpha**h - alpha**(h+2)``)
are exactly such boundary cases, so the exact path matters.
"""

from __future__ import annotations

import ast
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence, Union

__all__ = [
    "DomainError",
    "ToleranceUnreachable",
    "GUARD_BAND",
    "HARD_MAX_K",
    "max_k",
    "parse_alpha",
    "as_fraction",
    "ExactDistance",
    "parse_expr",
    "as_threshold",
]

GUARD_BAND = 1e-9
HARD_MAX_K = 30


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ToleranceUnreachable(RuntimeError):
    """A requested error radius cannot be certified under the k cap.

    ``best_radius`` and ``k_used`` describe the best that was achievable.
    """

    def __init__(self, message: str, best_radius: float = math.inf, k_used: int | None = None):
        super().__init__(message)
        self.best_radius = best_radius
        self.k_used = k_used


def max_k() -> int:
    """Cap on the approximation order, from ``RQA_MAX_K`` (never above 30)."""
    raw = os.environ.get("RQA_MAX_K")
    if raw is None:
        return HARD_MAX_K
    try:
        value = int(raw)
    except ValueError as exc:
        raise DomainError(f"RQA_MAX_K must be an integer, got {raw!r}") from exc
    return max(1, min(value, HARD_MAX_K))


Number = Union[int, float, Fraction, str]


def as_fraction(value: Number) -> Fraction:
    """Convert ints, floats (exactly, bit for bit), and decimal/``p/q`` strings."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(value, (int, float)):
        if isinstance(value, float) and not math.isfinite(value):
            raise DomainError(f"non-finite value {value!r}")
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"cannot parse {value!r} as a rational") from exc
    if isinstance(value, ExactDistance):
        return value.value
    raise TypeError(f"unsupported numeric type {type(value).__name__}")


def parse_alpha(value: Number) -> Fraction:
    """Return alpha as an exact rational in lowest terms; require 0 < alpha < 1/2.

    Strings are read as ``"p/q"`` or as decimal literals (``"0.4"`` is 2/5,
    not the nearest binary float).
    """
    a = as_fraction(value)
    if not (0 < a < Fraction(1, 2)):
        raise DomainError("alpha must lie in (0, 1/2)")
    return a


def _trim(coeffs: Sequence[Fraction]) -> tuple[Fraction, ...]:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _poly_add(p, q):
    n = max(len(p), len(q))
    return _trim([(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)])


def _poly_mul(p, q):
    if not p or not q:
        return ()
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return _trim(out)


def _poly_pow(p, n):
    out = (Fraction(1),)
    for _ in range(n):
        out = _poly_mul(out, p)
    return out


@dataclass(frozen=True)
class ExactDistance:
    """A polynomial ``sum(c_j * alpha**j)`` bound to one exact ``alpha``.

    Comparisons (with other ExactDistances or plain numbers) first look at
    floats and fall back to exact rationals inside the guard band.
    """

    coeffs: tuple[Fraction, ...]
    alpha: Fraction

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _trim(Fraction(c) for c in self.coeffs))
        object.__setattr__(self, "alpha", Fraction(self.alpha))

    @classmethod
    def constant(cls, c: Number, alpha: Fraction) -> "ExactDistance":
        return cls((as_fraction(c),), alpha)

    @classmethod
    def monomial(cls, degree: int, alpha: Fraction, coeff: Number = 1) -> "ExactDistance":
        return cls((Fraction(0),) * degree + (as_fraction(coeff),), alpha)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @cached_property
    def value(self) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * self.alpha + c
        return acc

    def __float__(self) -> float:
        a = float(self.alpha)
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * a + float(c)
        return acc

    # -- arithmetic ---------------------------------------------------------
    def _coerce(self, other) -> "ExactDistance":
        if isinstance(other, ExactDistance):
            if other.alpha != self.alpha:
                raise DomainError("cannot combine distances bound to different alpha")
            return other
        return ExactDistance.constant(other, self.alpha)

    def __add__(self, other):
        o = self._coerce(other)
        return ExactDistance(_poly_add(self.coeffs, o.coeffs), self.alpha)

    __radd__ = __add__

    def __neg__(self):
        return ExactDistance(tuple(-c for c in self.coeffs), self.alpha)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        return ExactDistance(_poly_mul(self.coeffs, o.coeffs), self.alpha)

    __rmul__ = __mul__

    def shift(self, m: int) -> "ExactDistance":
        """Multiply by ``alpha**m`` (m >= 0)."""
        if m < 0:
            raise ValueError("shift must be non-negative")
        return ExactDistance((Fraction(0),) * m + self.coeffs, self.alpha)

    def __abs__(self):
        return -self if self.compare(0) < 0 else self

    # -- comparison ---------------------------------------------------------
    def compare(self, other) -> int:
        """Three-way comparison; exact inside the guard band."""
        fo = float(other) if not isinstance(other, Fraction) else float(other)
        fs = float(self)
        if abs(fs - fo) > GUARD_BAND:
            return -1 if fs < fo else 1
        ov = other.value if isinstance(other, ExactDistance) else as_fraction(other)
        sv = self.value
        return (sv > ov) - (sv < ov)

    def __eq__(self, other):
        if isinstance(other, (ExactDistance, int, float, Fraction)):
            return self.compare(other) == 0
        return NotImplemented

    def __hash__(self):
        return hash(self.value)

    def __lt__(self, other):
        return self.compare(other) < 0

    def __le__(self, other):
        return self.compare(other) <= 0

    def __gt__(self, other):
        return self.compare(other) > 0

    def __ge__(self, other):
        return self.compare(other) >= 0

    def __repr__(self):
        return f"ExactDistance({self.poly_str()}; alpha={self.alpha})"

    def poly_str(self) -> str:
        terms = []
        for j, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if j == 0 else ("a" if j == 1 else f"a^{j}")
            if mono and abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}" + (f"*{mono}" if mono else "")
            terms.append(("-" if c < 0 else "+", body))
        if not terms:
            return "0"
        s = "".join(f" {sign} {body}" for sign, body in terms).strip()
        return s[2:] if s.startswith("+ ") else "-" + s[2:]


# -- threshold expressions ---------------------------------------------------

_ALPHA_NAMES = {"a", "alpha"}


def parse_expr(text: str) -> tuple[Fraction, ...]:
    """Parse an expression in ``a`` into polynomial coefficients.

    Grammar: numeric literals (decimal literals are exact), ``a``/``alpha``,
    ``+ - *``, ``^`` or ``**`` with a non-negative integer exponent,
    division by a constant, parentheses.
    """
    src = text.strip().replace("^", "**")
    if not src:
        raise DomainError("empty expression")
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise DomainError(f"malformed expression {text!r}") from exc

    def walk(node):
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) \
                and not isinstance(node.value, bool):
            literal = ast.get_source_segment(src, node) or repr(node.value)
            return (Fraction(literal),)
        if isinstance(node, ast.Name) and node.id in _ALPHA_NAMES:
            return (Fraction(0), Fraction(1))
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            inner = walk(node.operand)
            return inner if isinstance(node.op, ast.UAdd) else tuple(-c for c in inner)
        if isinstance(node, ast.BinOp):
            left = walk(node.left)
            if isinstance(node.op, ast.Pow):
                exp = walk(node.right)
                if len(exp) > 1 or (exp and (exp[0].denominator != 1 or exp[0] < 0)):
                    raise DomainError("exponents must be non-negative integer constants")
                return _poly_pow(left, int(exp[0]) if exp else 0)
            right = walk(node.right)
            if isinstance(node.op, ast.Add):
                return _poly_add(left, right)
            if isinstance(node.op, ast.Sub):
                return _poly_add(left, tuple(-c for c in right))
            if isinstance(node.op, ast.Mult):
                return _poly_mul(left, right)
            if isinstance(node.op, ast.Div):
                if len(right) != 1 or right[0] == 0:
                    raise DomainError("division only by non-zero constants")
                return tuple(c / right[0] for c in left)
        raise DomainError(f"unsupported construct in expression {text!r}")

    return _trim(walk(tree))


def as_threshold(eps, alpha: Fraction) -> ExactDistance:
    """Coerce a threshold (expression string, number or ExactDistance) to ExactDistance."""
    alpha = Fraction(alpha)
    if isinstance(eps, ExactDistance):
        if eps.alpha != alpha:
            return ExactDistance(eps.coeffs, alpha)
        return eps
    if isinstance(eps, str):
        try:
            return ExactDistance.constant(Fraction(eps.strip()), alpha)
        except ValueError:
            return ExactDistance(parse_expr(eps), alpha)
    return ExactDistance.constant(as_fraction(eps), alpha)
