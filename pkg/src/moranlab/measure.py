"""Exact sampling, digit statistics, and interval-avoidance verdicts.

Sample points are exact rationals: digits are drawn level by level with a
counter-based generator and exact cumulative-threshold inversion, and the
value sum d_n / (M_1...M_n) is carried as one big-integer numerator over the
full prefix product. Every downstream statistic (digit frequencies, orbit
discrepancy, interval avoidance) is then integer arithmetic; floats appear
only in report formatting.

Normality outputs are descriptive finite-sample statistics. The inputs are
rationals, whose expansions are eventually periodic, so no report here ever
claims normality; reports carry an always-true `periodic` flag to make that
unmistakable.
"""

from __future__ import annotations

import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import (
    InvalidInterval,
    InvalidParameter,
    NotInSupport,
    OutOfRange,
    ScheduleTooShort,
)
from .fourier import MoranSystem
from .rng import cumulative_thresholds, derive_seed, pick, value_at

DEFAULT_GUARD = 8


@dataclass(frozen=True)
class SamplePoint:
    """An exactly represented point of the attractor, with its provenance."""

    digits: tuple[int, ...]
    value: Fraction
    depth: int
    seed: int


@lru_cache(maxsize=512)
def _thresholds(weights: tuple[Fraction, ...]) -> tuple[int, ...]:
    return cumulative_thresholds(weights)


def sample_point(sys: MoranSystem, seed: int, depth: int) -> SamplePoint:
    """Draw digits d_1..d_depth independently per the level weights.

    Level n consumes generator output n-1, so a prefix of a deeper sample
    equals the shallower sample with the same seed.
    """
    if not 1 <= depth <= sys.depth:
        raise ScheduleTooShort(f"depth {depth} outside 1 .. {sys.depth}")
    digits: list[int] = []
    num = 0
    den = 1
    for n in range(1, depth + 1):
        u = value_at(seed, n - 1)
        idx = pick(u, _thresholds(sys.weights[n - 1]))
        d = sys.digit_sets[n - 1][idx]
        digits.append(d)
        base = sys.schedule.base_at(n)
        num = num * base + d
        den *= base
    return SamplePoint(digits=tuple(digits), value=Fraction(num, den), depth=depth, seed=seed)


def sample_batch(
    sys: MoranSystem, seed: int, depth: int, count: int, workers: int = 1
) -> tuple[SamplePoint, ...]:
    """count independent points; point i is seeded with seed XOR i."""
    if count < 1:
        raise InvalidParameter(f"count must be >= 1, got {count}")
    seeds = [derive_seed(seed, i) for i in range(count)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return tuple(pool.map(lambda s: sample_point(sys, s, depth), seeds))
    return tuple(sample_point(sys, s, depth) for s in seeds)


# --------------------------------------------------------------------------
# base-b digit expansions


def _ilog(n: int, b: int) -> int:
    # floor(log_b n) for n >= 1 without float overflow on huge n
    if n < 1:
        raise InvalidParameter(f"log of {n}")
    t = max(0, int((n.bit_length() - 1) / math.log2(b)))
    while b ** (t + 1) <= n:
        t += 1
    while t > 0 and b**t > n:
        t -= 1
    return t


def _terminating(den: int, b: int) -> bool:
    # does den divide some power of b?
    g = math.gcd(den, b)
    while g > 1:
        while den % g == 0:
            den //= g
        g = math.gcd(den, b)
    return den == 1


def base_digits(
    x: Fraction, b: int, count: int, guard: int = DEFAULT_GUARD
) -> tuple[tuple[int, ...], int]:
    """First `count` base-b digits of x, plus how many of them are trusted.

    Digits come from exact long division. For a terminating expansion every
    digit is exact and trusted; otherwise the denominator carries roughly
    log_b(den) digits of information and the trust window stops `guard`
    digits short of that, so no trusted digit can be an artifact of the
    truncation of x.
    """
    if not isinstance(x, Fraction):
        x = Fraction(x)
    if not 0 <= x < 1:
        raise InvalidParameter(f"x must lie in [0, 1), got {x}")
    if b < 2:
        raise InvalidParameter(f"base must be >= 2, got {b}")
    if count < 0:
        raise InvalidParameter(f"count must be >= 0, got {count}")
    num, den = x.numerator, x.denominator
    digits: list[int] = []
    for _ in range(count):
        num *= b
        d, num = divmod(num, den)
        digits.append(d)
    if _terminating(den, b):
        trusted = count
    else:
        trusted = max(0, min(count, _ilog(den, b) - guard))
    return tuple(digits), trusted


@dataclass(frozen=True)
class NormalityReport:
    """Digit-frequency and orbit-discrepancy statistics over trusted digits.

    periodic is always True: rational inputs have eventually periodic
    expansions, so the statistics describe a finite window, never normality.
    """

    base: int
    trusted_digit_count: int
    frequencies: tuple[Fraction, ...]
    max_deviation: Fraction
    discrepancy: Fraction
    periodic: bool = True


_DISCREPANCY_BINS = 64


def _orbit_discrepancy(x: Fraction, b: int, steps: int) -> Fraction:
    """Max deviation of the {b^k x} bin counts from uniform over 64 bins."""
    if steps <= 0:
        return Fraction(1)
    counts = [0] * _DISCREPANCY_BINS
    cur, den = x.numerator, x.denominator
    for _ in range(steps):
        counts[(_DISCREPANCY_BINS * cur) // den] += 1
        cur = (cur * b) % den
    target = Fraction(1, _DISCREPANCY_BINS)
    return max(abs(Fraction(c, steps) - target) for c in counts)


def normality_report(
    x: Fraction,
    bases: Sequence[int],
    guard: int = DEFAULT_GUARD,
    count: int | None = None,
) -> list[NormalityReport]:
    """Per-base digit statistics of x over the trusted digit window.

    With count omitted, each base uses its full trust capacity (terminating
    expansions, which are exact at every digit, default to a 64-digit
    window).
    """
    x = Fraction(x)
    reports: list[NormalityReport] = []
    for b in bases:
        if count is None:
            if _terminating(x.denominator, b):
                n_digits = 64
            else:
                n_digits = max(0, _ilog(x.denominator, b) - guard)
        else:
            n_digits = count
        digits, trusted = base_digits(x, b, n_digits, guard)
        window = digits[:trusted]
        if trusted > 0:
            freqs = tuple(
                Fraction(sum(1 for d in window if d == v), trusted) for v in range(b)
            )
            max_dev = max(abs(f - Fraction(1, b)) for f in freqs)
        else:
            freqs = tuple(Fraction(0) for _ in range(b))
            max_dev = Fraction(1)
        reports.append(
            NormalityReport(
                base=b,
                trusted_digit_count=trusted,
                frequencies=freqs,
                max_deviation=max_dev,
                discrepancy=_orbit_discrepancy(x, b, trusted),
            )
        )
    return reports


# --------------------------------------------------------------------------
# interval avoidance


@dataclass(frozen=True)
class AvoidanceVerdict:
    passed: bool
    first_violation_j: int | None
    interval_lo: Fraction
    j_max: int

    @property
    def verdict(self) -> str:
        return "PASS" if self.passed else "FAIL"


def _attractor_digits(x: Fraction, sch, depth: int) -> tuple[int, ...]:
    # digit_n = floor(P_n x) mod M_n; requires x exactly representable at depth
    P = sch.prefix_product(depth)
    if (x.numerator * P) % x.denominator != 0:
        raise NotInSupport(
            f"denominator {x.denominator} does not divide the depth-{depth} prefix product"
        )
    t = (x.numerator * P) // x.denominator
    out: list[int] = []
    w = P
    for n in range(1, depth + 1):
        w //= sch.base_at(n)
        d, t = divmod(t, w)
        out.append(d)
    return tuple(out)


def uniqueness_avoidance(x: Fraction, sys, j_max: int) -> AvoidanceVerdict:
    """Check {k_j x} outside the avoidance interval (lo, 1) for j = 1..j_max.

    For a plain digit system the dilations are k_j = M_1...M_j and
    lo = 2L with L = sup_n max(D_n)/M_n. For a convolved system with special
    levels N = {n_1 < n_2 < ...} they are k_j = M_1...M_{n_j - 1} and
    lo = c + 1/6 with c = max over special levels of (max digit sum + 1)/M_n.
    Membership in the attractor is checked first (every digit of x must lie
    in the level's digit set); all arithmetic is exact.
    """
    x = Fraction(x)
    if not 0 <= x < 1:
        raise InvalidParameter(f"x must lie in [0, 1), got {x}")
    if j_max < 1:
        raise InvalidParameter(f"j_max must be >= 1, got {j_max}")
    from .dimension import ConvolvedSystem  # local import keeps modules decoupled

    if isinstance(sys, MoranSystem):
        sch = sys.schedule
        digit_sets = sys.digit_sets
        lo = 2 * max(
            Fraction(max(d), sch.base_at(n + 1)) for n, d in enumerate(digit_sets)
        )
        dilations = [sch.prefix_product(j) for j in range(1, j_max + 1)]
        if j_max > sch.depth:
            raise OutOfRange(f"j_max = {j_max} exceeds the schedule depth {sch.depth}")
    elif isinstance(sys, ConvolvedSystem):
        sch = sys.schedule
        digit_sets = sys.sum_sets
        special = sys.special_levels
        if j_max > len(special):
            raise OutOfRange(f"j_max = {j_max} exceeds the {len(special)} special levels")
        lo = Fraction(1, 6) + max(
            Fraction(max(sys.sum_sets[n - 1]), sch.base_at(n)) for n in special
        )
        dilations = [sch.prefix_product(special[j] - 1) for j in range(j_max)]
    else:
        raise InvalidParameter(f"unsupported system type {type(sys).__name__}")

    if lo >= 1:
        raise InvalidInterval(f"avoidance interval ({lo}, 1) is empty")
    digits = _attractor_digits(x, sch, sch.depth)
    for n, d in enumerate(digits, start=1):
        if d not in digit_sets[n - 1]:
            raise NotInSupport(f"digit {d} at level {n} outside the level digit set")

    num, den = x.numerator, x.denominator
    for j, k in enumerate(dilations, start=1):
        frac = Fraction((num * k) % den, den)
        if lo < frac:  # frac < 1 always; the interval is open
            return AvoidanceVerdict(
                passed=False, first_violation_j=j, interval_lo=lo, j_max=j_max
            )
    return AvoidanceVerdict(passed=True, first_violation_j=None, interval_lo=lo, j_max=j_max)


# --------------------------------------------------------------------------
# CSV reports


def write_normality_csv(
    path: str, rows: Iterable[tuple[int, int, NormalityReport]]
) -> None:
    """rows: (seed, depth, report) triples."""
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(["seed", "depth", "base", "trusted_digits", "max_deviation", "discrepancy"])
        for seed, depth, rep in rows:
            out.writerow(
                [
                    seed,
                    depth,
                    rep.base,
                    rep.trusted_digit_count,
                    repr(float(rep.max_deviation)),
                    repr(float(rep.discrepancy)),
                ]
            )


def write_uniqueness_csv(path: str, rows: Iterable[tuple[int, AvoidanceVerdict]]) -> None:
    """rows: (seed, verdict) pairs."""
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(["seed", "j_max", "verdict", "first_violation_j"])
        for seed, v in rows:
            out.writerow([seed, v.j_max, v.verdict, "" if v.first_violation_j is None else v.first_violation_j])
