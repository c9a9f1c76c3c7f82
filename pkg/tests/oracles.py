"""Slow, obviously-correct reference implementations used only by the tests.

Words are plain lists of 0/1 letters, u[0] being the first letter.  Nothing
here imports the package under test.
"""

from fractions import Fraction


def bits(text):
    return [int(c) for c in text]


def text(u):
    return "".join(map(str, u))


def add_lr(u, v):
    """Add two words letter by letter, carrying to the right."""
    out, carry = [], 0
    for a, b in zip(u, v):
        s = a + b + carry
        out.append(s & 1)
        carry = s >> 1
    return out


def succ(u):
    return add_lr(u, [1] + [0] * (len(u) - 1))


def odometer_words(k):
    """All words of length k in orbit order, starting from 0^k."""
    u, out = [0] * k, []
    for _ in range(2**k):
        out.append(u)
        u = succ(u)
    return out


def kappa(u, a):
    a = Fraction(a)
    return sum(((1 - a) * a**i for i, x in enumerate(u) if x), Fraction(0))


def gamma(u):
    return 1 + sum(x << (len(u) - 1 - i) for i, x in enumerate(u))


def rho_ell(u, v, ell, a):
    """max over t < ell of |kappa(u + t) - kappa(v + t)| by explicit stepping."""
    worst = Fraction(0)
    for _ in range(min(ell, 2 ** len(u))):
        worst = max(worst, abs(kappa(u, a) - kappa(v, a)))
        u, v = succ(u), succ(v)
    return worst


def count_pairs(k, a, ell, eps):
    """Ordered pairs of level-k words whose ell-distance is at most eps."""
    words = odometer_words(k)
    keys = [kappa(w, a) for w in words]
    N = len(words)
    steps = min(ell, N)
    total = 0
    for i in range(N):
        for j in range(N):
            if max(abs(keys[(i + t) % N] - keys[(j + t) % N]) for t in range(steps)) <= eps:
                total += 1
    return total


def corr_sum_orbit(xs, ell, eps):
    """C_ell of a given finite trajectory (needs len(xs) >= n + ell - 1 handled by caller)."""
    n = len(xs) - ell + 1
    hits = 0
    for i in range(n):
        for j in range(n):
            if all(abs(xs[i + t] - xs[j + t]) <= eps for t in range(ell)):
                hits += 1
    return Fraction(hits, n * n)
