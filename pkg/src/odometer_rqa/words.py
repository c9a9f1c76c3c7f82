"""Binary words and the two odometer additions.

A word ``u = u_1 ... u_k`` is stored as ``packed = gamma(u) - 1`` with ``u_1`` in
the most significant used bit, so integer order of ``packed`` is gamma-order.
Addition from the left to the right (``add_lr``, carry travelling towards
``u_k``) is ordinary addition on bit-reversed values; addition from the right
to the left (``add_rl``) is ordinary addition on ``packed``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exact import DomainError, ExactDistance, parse_alpha

__all__ = [
    "MAX_K",
    "Word",
    "reverse_bits",
    "add_lr",
    "add_lr_n",
    "neg_lr",
    "add_rl",
    "succ_rl",
    "pred_rl",
    "gamma",
    "index_of",
    "word_from_index",
    "kappa",
    "kappa_value",
    "rho",
]

MAX_K = 30


def reverse_bits(x: int, k: int) -> int:
    """Reverse the lowest ``k`` bits of ``x``."""
    return int(format(x, f"0{k}b")[::-1], 2) if k else 0


@dataclass(frozen=True, order=True)
class Word:
    """A word in ``{0,1}^k``; ``packed`` holds ``gamma(u) - 1``."""

    k: int
    packed: int = 0

    def __post_init__(self):
        if not (0 <= self.k <= MAX_K):
            raise DomainError(f"word length must lie in [0, {MAX_K}], got {self.k}")
        if not (0 <= self.packed < (1 << self.k)):
            raise DomainError(f"packed value {self.packed} does not fit in {self.k} bits")

    @classmethod
    def parse(cls, text: str) -> "Word":
        text = text.strip()
        if any(c not in "01" for c in text):
            raise DomainError(f"words are 0/1 strings, got {text!r}")
        return cls(len(text), int(text, 2) if text else 0)

    @classmethod
    def zeros(cls, k: int) -> "Word":
        return cls(k, 0)

    @classmethod
    def ones(cls, k: int) -> "Word":
        return cls(k, (1 << k) - 1)

    @classmethod
    def from_bits(cls, bits) -> "Word":
        return cls.parse("".join(str(int(b)) for b in bits))

    @property
    def bits(self) -> tuple[int, ...]:
        """``(u_1, ..., u_k)``."""
        return tuple(int(c) for c in str(self))

    def __str__(self) -> str:
        return format(self.packed, f"0{self.k}b") if self.k else ""

    def __repr__(self) -> str:
        return f"Word('{self}')"

    def __len__(self) -> int:
        return self.k

    def __getitem__(self, i: int) -> int:
        """1-based letter ``u_i``."""
        if not (1 <= i <= self.k):
            raise IndexError(i)
        return (self.packed >> (self.k - i)) & 1

    def concat(self, other: "Word") -> "Word":
        return Word(self.k + other.k, (self.packed << other.k) | other.packed)

    __add__ = concat

    def prefix(self, m: int) -> "Word":
        if not (0 <= m <= self.k):
            raise DomainError("prefix length out of range")
        return Word(m, self.packed >> (self.k - m))

    def suffix(self, m: int) -> "Word":
        if not (0 <= m <= self.k):
            raise DomainError("suffix length out of range")
        return Word(m, self.packed & ((1 << m) - 1))

    def has_prefix(self, other: "Word") -> bool:
        return other.k <= self.k and self.prefix(other.k) == other

    def complement(self) -> "Word":
        return Word(self.k, ((1 << self.k) - 1) ^ self.packed)


def _same_length(u: Word, v: Word) -> int:
    if u.k != v.k:
        raise DomainError(f"length mismatch: {u.k} vs {v.k}")
    return u.k


def index_of(u: Word) -> int:
    """``n = u_1 + 2 u_2 + ... + 2^{k-1} u_k``, so that ``0^k (+) n = u``."""
    return reverse_bits(u.packed, u.k)


def word_from_index(n: int, k: int) -> Word:
    """Inverse of :func:`index_of` (``n`` taken modulo ``2^k``)."""
    return Word(k, reverse_bits(n % (1 << k), k))


def add_lr(u: Word, v: Word) -> Word:
    """Left-to-right addition: ``100 (+) 110 = 001``."""
    k = _same_length(u, v)
    return word_from_index(index_of(u) + index_of(v), k)


def add_lr_n(u: Word, n: int) -> Word:
    """``u (+) n``, i.e. ``n`` steps of the odometer."""
    if n < 0:
        raise DomainError("n must be non-negative")
    if u.k == 0:
        return u
    return word_from_index(index_of(u) + n, u.k)


def neg_lr(u: Word) -> Word:
    """Inverse for left-to-right addition (complement, then add one)."""
    return word_from_index(-index_of(u), u.k) if u.k else u


def add_rl(u: Word, v: Word) -> Word:
    """Right-to-left (ordinary binary) addition modulo ``2^k``: ``100 [+] 110 = 010``."""
    k = _same_length(u, v)
    return Word(k, (u.packed + v.packed) % (1 << k) if k else 0)


def succ_rl(u: Word, n: int) -> Word:
    """The word ``w`` with ``gamma(w) = gamma(u) + n``."""
    if n < 0:
        raise DomainError("n must be non-negative")
    if u.packed + n >= (1 << u.k):
        raise DomainError("succ_rl overflows past 1^k")
    return Word(u.k, u.packed + n)


def pred_rl(u: Word, n: int) -> Word:
    """The word ``w`` with ``gamma(w) = gamma(u) - n`` (requires ``n < gamma(u)``)."""
    if n < 0:
        raise DomainError("n must be non-negative")
    if n > u.packed:
        raise DomainError("pred_rl underflows below 0^k")
    return Word(u.k, u.packed - n)


def gamma(u: Word) -> int:
    """Position of ``u`` in the natural order, ``1 <= gamma(u) <= 2^k``."""
    if u.k == 0:
        raise DomainError("gamma is undefined for the empty word")
    return u.packed + 1


def kappa(u: Word, alpha) -> ExactDistance:
    """``kappa(u) = (1 - alpha) * sum u_i alpha^{i-1}`` as a polynomial in alpha."""
    a = parse_alpha(alpha)
    bits = u.bits
    # (1 - a) * sum u_i a^{i-1}: c_0 = u_1, c_j = u_{j+1} - u_j, c_k = -u_k
    coeffs = [Fraction(0)] * (u.k + 1)
    for i, b in enumerate(bits):
        if b:
            coeffs[i] += 1
            coeffs[i + 1] -= 1
    return ExactDistance(tuple(coeffs), a)


def kappa_value(u: Word, alpha) -> Fraction:
    """Exact rational ``kappa(u)`` via the integer key ``sum u_i (q-p) p^{i-1} q^{k-i}``."""
    a = parse_alpha(alpha)
    p, q = a.numerator, a.denominator
    key = 0
    for i, b in enumerate(u.bits):
        if b:
            key += (q - p) * p**i * q ** (u.k - 1 - i)
    return Fraction(key, q**u.k)


def rho(u: Word, v: Word, alpha) -> ExactDistance:
    """``|kappa(u) - kappa(v)|``."""
    _same_length(u, v)
    return abs(kappa(u, alpha) - kappa(v, alpha))
