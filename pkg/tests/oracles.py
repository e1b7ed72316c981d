"""Independent oracles the tests trust instead of the library under test.

Everything here is deliberately naive: brute-force power loops, direct
products over truncated levels, plain triple-loop summation, and a rational
log with explicit series tails. Slow is fine; independent is the point.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction

import numpy as np


def brute_order(a: int, n: int) -> int:
    """Smallest m >= 1 with a^m = 1 mod n, by repeated multiplication."""
    x = a % n
    m = 1
    while x != 1:
        x = (x * a) % n
        m += 1
        if m > n:
            raise AssertionError(f"no order for a={a}, n={n}")
    return m


def brute_orders_vector(a: int, n_max: int) -> dict[int, int]:
    """Orders of a modulo every coprime n in [2, n_max], vectorized."""
    n = np.arange(2, n_max + 1, dtype=np.int64)
    n = n[np.gcd(np.int64(a), n) == 1]
    cur = np.mod(np.int64(a), n)
    order = np.zeros(n.shape, dtype=np.int64)
    step = 1
    unresolved = order == 0
    while unresolved.any():
        hit = unresolved & (cur == 1)
        order[hit] = step
        unresolved &= ~hit
        cur[unresolved] = (cur[unresolved] * a) % n[unresolved]
        step += 1
        if step > n_max + 1:
            raise AssertionError("order loop exceeded modulus bound")
    return dict(zip(n.tolist(), order.tolist()))


def sieve_is_prime(limit: int) -> list[bool]:
    flags = [True] * (limit + 1)
    flags[0] = flags[1] = False
    for p in range(2, int(limit**0.5) + 1):
        if flags[p]:
            flags[p * p :: p] = [False] * len(flags[p * p :: p])
    return flags


def naive_mu_hat(xi: int, sys, depth: int | None = None) -> float:
    """|product over the first `depth` levels| in plain complex arithmetic."""
    if depth is None:
        depth = sys.depth
    xi = abs(int(xi))
    prod = 1.0 + 0.0j
    P = 1
    for n in range(1, depth + 1):
        P *= sys.schedule.base_at(n)
        t = float(Fraction(xi % P, P))
        prod *= sum(
            float(w) * cmath.exp(-2j * math.pi * d * t)
            for d, w in zip(sys.digit_sets[n - 1], sys.weights[n - 1])
        )
    return abs(prod)


def naive_del_sum(sys, b: int, h: int, N_max: int, mu) -> float:
    """Triple loop, no memo, no compensation: sum (1/N^3) sum_m sum_n |mu^|."""
    total = 0.0
    for N in range(1, N_max + 1):
        inner = 0.0
        for m in range(N):
            for n in range(N):
                inner += mu(abs(h * (b**n - b**m)))
        total += inner / N**3
    return total


def _atanh_bounds(z: Fraction, terms: int) -> tuple[Fraction, Fraction]:
    # partial sum plus a geometric tail cap; needs 0 <= z < 1
    s = Fraction(0)
    zp = z
    z2 = z * z
    for k in range(terms):
        s += zp / (2 * k + 1)
        zp *= z2
    tail = zp / ((2 * terms + 1) * (1 - z2))
    return s, s + tail


def ln_bounds(x: Fraction, terms: int = 14) -> tuple[Fraction, Fraction]:
    """Exact rationals lo <= ln x <= hi."""
    x = Fraction(x)
    if x <= 0:
        raise ValueError("ln_bounds needs x > 0")
    if x < 1:
        lo, hi = ln_bounds(1 / x, terms)
        return -hi, -lo
    e = 0
    m = x
    while m >= 2:
        m /= 2
        e += 1
    ln2_lo, ln2_hi = _atanh_bounds(Fraction(1, 3), terms)
    m_lo, m_hi = _atanh_bounds((m - 1) / (m + 1), terms)
    return 2 * (e * ln2_lo + m_lo), 2 * (e * ln2_hi + m_hi)
