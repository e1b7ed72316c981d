"""Digit-projection combinatorics of the sequences h*b^n - h*b^m.

Two projections drive everything: Phi_N(n) takes the first N mixed-radix
digits of h*b^n - h*b^m, and Pi_{c,d}(n) keeps only the free-suffix digit
positions of blocks c+1 .. d (positions L_s + k_{s+1} .. L_{s+1} - 1). Over
an interval of n of length ord_{N_r/Q}(b) the Pi image tiles the full product
Y_{c,d} with identical fiber sizes; this module verifies those statements by
exhaustive enumeration and certifies them, and evaluates the digit-count
bounds #B_k <= C(k) that they feed.

Powers b^n are never materialized: every digit extraction reduces through a
single modular exponentiation per interval endpoint and one modular multiply
per step.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import (
    CounterexampleFound,
    InvalidParameter,
    InvalidRange,
    NotWellDistributed,
    OutOfRange,
    TooLarge,
)
from .fourier import MoranSystem
from .numtheory import (
    ALPHA_SIXTH,
    BaseContext,
    derived_stirling_constants,
    integer_J,
    order_mod_reduced,
)
from .radix import PrimeSchedule, to_digits

ENUMERATION_GUARD = 10**7


def _schedule_of(sys) -> PrimeSchedule:
    if isinstance(sys, PrimeSchedule):
        return sys
    if isinstance(sys, MoranSystem):
        return sys.schedule
    raise InvalidParameter(f"expected a digit system or schedule, got {type(sys).__name__}")


def _default_m(ctx: BaseContext, m: int | None) -> int:
    # the subtrahend exponent is free as long as m >= n0 - 1
    if m is None:
        return ctx.n0 - 1
    if m < ctx.n0 - 1:
        raise InvalidRange(f"m = {m} below n0 - 1 = {ctx.n0 - 1}")
    return m


def _block_positions(ctx: BaseContext, c: int, d: int) -> tuple[int, ...]:
    sch = ctx.schedule
    if not ctx.r0 <= c < d <= len(sch.q):
        raise InvalidRange(f"blocks must satisfy r0 = {ctx.r0} <= c < d <= {len(sch.q)}")
    pos: list[int] = []
    for s in range(c, d):
        start = sch.L[s] + ctx.k[s]
        pos.extend(range(start, sch.L[s + 1]))
    return tuple(pos)


@dataclass(frozen=True)
class DigitProjection:
    """A digit-position selection applied to n -> h*b^n - h*b^m.

    positions is None for the full-prefix map Phi_N (the first N positions,
    N supplied at evaluation time); otherwise it is the strictly increasing
    tuple of free-suffix positions of a block range.
    """

    m: int
    h: int
    b: int
    positions: tuple[int, ...] | None

    def __post_init__(self) -> None:
        if self.positions is not None:
            for a, b_ in zip(self.positions, self.positions[1:]):
                if a >= b_:
                    raise InvalidParameter("positions must strictly increase")


def prefix_projection(ctx: BaseContext, m: int | None = None) -> DigitProjection:
    return DigitProjection(m=_default_m(ctx, m), h=ctx.h, b=ctx.b, positions=None)


def block_projection(ctx: BaseContext, c: int, d: int, m: int | None = None) -> DigitProjection:
    return DigitProjection(
        m=_default_m(ctx, m), h=ctx.h, b=ctx.b, positions=_block_positions(ctx, c, d)
    )


# --------------------------------------------------------------------------
# the maps themselves


def _difference_mod(ctx: BaseContext, n: int, m: int, modulus: int) -> int:
    # canonical residue of h (b^n - b^m); h may be negative
    diff = pow(ctx.b, n, modulus) - pow(ctx.b, m, modulus)
    return (ctx.h * diff) % modulus


def phi_map(
    n: int,
    proj: DigitProjection,
    N_digits: int,
    sys,
    ctx: BaseContext,
) -> tuple[int, ...]:
    """First N_digits mixed-radix digits of h*b^n - h*b^m."""
    sch = _schedule_of(sys)
    if (proj.h, proj.b) != (ctx.h, ctx.b):
        raise InvalidParameter("projection and context disagree on (b, h)")
    if not 1 <= N_digits <= sch.depth:
        raise OutOfRange(f"N_digits = {N_digits} outside 1 .. {sch.depth}")
    if n <= proj.m:
        raise InvalidRange(f"n = {n} must exceed m = {proj.m}")
    modulus = sch.prefix_product(N_digits)
    val = _difference_mod(ctx, n, proj.m, modulus)
    return to_digits(val, sch, length=N_digits).digits


def pi_map(
    n: int,
    c: int,
    d: int,
    sys,
    ctx: BaseContext,
    m: int | None = None,
) -> tuple[int, ...]:
    """Digits of h*b^n - h*b^m at the free-suffix positions of blocks c+1 .. d.

    The value is a point of Y_{c,d}, the blocks' digit tuples concatenated in
    position order.
    """
    sch = _schedule_of(sys)
    positions = _block_positions(ctx, c, d)
    mm = _default_m(ctx, m)
    if n <= mm:
        raise InvalidRange(f"n = {n} must exceed m = {mm}")
    depth = sch.L[d]
    modulus = sch.prefix_product(depth)
    val = _difference_mod(ctx, n, mm, modulus)
    digits = to_digits(val, sch, length=depth).digits
    return tuple(digits[p] for p in positions)


def _digits_over_interval(
    ctx: BaseContext, sch: PrimeSchedule, start: int, length: int, depth: int, m: int
) -> list[tuple[int, ...]]:
    """Digit tuples of h*b^n - h*b^m, depth positions, for n = start..start+length-1.

    One modular power for the endpoint, one modular multiply per step.
    """
    modulus = sch.prefix_product(depth)
    b_red = ctx.b % modulus
    bn = pow(ctx.b, start, modulus)
    bm = pow(ctx.b, m, modulus)
    h_red = ctx.h % modulus
    out = []
    for _ in range(length):
        val = (h_red * (bn - bm)) % modulus
        out.append(to_digits(val, sch, length=depth).digits)
        bn = (bn * b_red) % modulus
    return out


# --------------------------------------------------------------------------
# partition certification


@dataclass(frozen=True)
class PartitionCertificate:
    """An order-length interval split into J classes, each bijective onto Y_{r0,r}."""

    I_start: int
    length: int
    J: int
    y_size: int
    classes: tuple[tuple[int, ...], ...]

    def to_json(self) -> str:
        return json.dumps(
            {
                "I_start": self.I_start,
                "length": self.length,
                "J": self.J,
                "class_sizes": [len(c) for c in self.classes],
                "ok": True,
            }
        )


def verify_partition(
    I_start: int,
    ctx: BaseContext,
    sys,
    r: int,
    m: int | None = None,
) -> PartitionCertificate:
    """Exhaustively verify the order-length partition at block depth r.

    The interval I = [I_start : I_start + ord_{N_r/Q}(b) - 1] is grouped by
    Pi_{r0,r}; the grouping must hit every point of Y_{r0,r} in fibers of the
    common size J, and the t-th elements of the fibers then assemble into J
    classes each bijective onto Y. A violation raises CounterexampleFound
    naming an offending n (it would indicate a bug, not a property of the
    inputs).
    """
    sch = _schedule_of(sys)
    mm = _default_m(ctx, m)
    if not ctx.r0 + 1 <= r <= len(sch.q):
        raise InvalidRange(f"r = {r} outside r0 + 1 = {ctx.r0 + 1} .. {len(sch.q)}")
    if I_start <= mm:
        raise InvalidRange(f"I_start = {I_start} must exceed m = {mm}")
    order = order_mod_reduced(ctx, r, 0)
    if order > ENUMERATION_GUARD:
        raise TooLarge(f"interval length {order} exceeds the enumeration guard")
    positions = _block_positions(ctx, ctx.r0, r)
    y_size = 1
    for i in range(ctx.r0 + 1, r + 1):
        y_size *= sch.q[i - 1] ** ctx.j[i - 1]
    J = integer_J(ctx, r)

    depth = sch.L[r]
    rows = _digits_over_interval(ctx, sch, I_start, order, depth, mm)
    fibers: dict[tuple[int, ...], list[int]] = {}
    for offset, digits in enumerate(rows):
        key = tuple(digits[p] for p in positions)
        fibers.setdefault(key, []).append(I_start + offset)
    if len(fibers) != y_size:
        raise CounterexampleFound(
            f"Pi image has {len(fibers)} points, expected {y_size} "
            f"(first n = {I_start})"
        )
    for key, members in fibers.items():
        if len(members) != J:
            raise CounterexampleFound(
                f"fiber over {key} has {len(members)} elements, expected {J} "
                f"(witness n = {members[0]})"
            )
    ordered_keys = sorted(fibers)
    classes = tuple(
        tuple(sorted(fibers[key][t] for key in ordered_keys)) for t in range(J)
    )
    return PartitionCertificate(
        I_start=I_start, length=order, J=J, y_size=y_size, classes=classes
    )


@dataclass(frozen=True)
class FiberTable:
    """Fiber cardinalities at block step s -> s+1 over an order-length interval."""

    s: int
    length: int
    fibers: tuple[tuple[tuple[int, ...], int], ...]
    image_sizes: tuple[tuple[int, int], ...]

    def as_dict(self) -> dict[tuple[int, ...], int]:
        return dict(self.fibers)


def fiber_counts(
    I: tuple[int, int],
    ctx: BaseContext,
    sys,
    s: int,
    m: int | None = None,
) -> FiberTable:
    """Verify the fiber-count identities at the step from block s to s+1.

    I = (start, length) must have length exactly ord_{N_{s+1}/Q}(b). Checks,
    all exact:
      - each Pi_{r0,s} fiber splits into q_{s+1}^{j_{s+1}} equal
        Pi_{r0,s+1} sub-fibers (for s = r0 the single trivial fiber is I);
      - the prefix image #{Phi_{L_s+j}(n) : n in I} equals
        ord_{N_s q_{s+1}^j / Q}(b) for 0 <= j <= ell_{s+1}, with the map
        injective on a window of that order length;
      - the joint map n -> (Phi_{L_s + k_{s+1}}(n), Pi_{s,s+1}(n)) is
        injective on I (unique representative per pair).
    """
    sch = _schedule_of(sys)
    mm = _default_m(ctx, m)
    if not ctx.r0 <= s < len(sch.q):
        raise InvalidRange(f"s = {s} outside r0 = {ctx.r0} .. {len(sch.q) - 1}")
    start, length = I
    if start <= mm:
        raise InvalidRange(f"interval start {start} must exceed m = {mm}")
    expected = order_mod_reduced(ctx, s + 1, 0)
    if length != expected:
        raise TooLarge(f"interval length must be ord = {expected}, got {length}")
    if length > ENUMERATION_GUARD:
        raise TooLarge(f"interval length {length} exceeds the enumeration guard")

    depth = sch.L[s + 1]
    rows = _digits_over_interval(ctx, sch, start, length, depth, mm)
    pos_s = _block_positions(ctx, ctx.r0, s) if s > ctx.r0 else ()
    pos_s1 = _block_positions(ctx, ctx.r0, s + 1)
    q_pow = sch.q[s] ** ctx.j[s]

    coarse: dict[tuple[int, ...], int] = {}
    fine: dict[tuple[int, ...], int] = {}
    for digits in rows:
        coarse_key = tuple(digits[p] for p in pos_s)
        fine_key = tuple(digits[p] for p in pos_s1)
        coarse[coarse_key] = coarse.get(coarse_key, 0) + 1
        fine[fine_key] = fine.get(fine_key, 0) + 1
    for fine_key, count in fine.items():
        coarse_key = fine_key[: len(pos_s)]
        if q_pow * count != coarse[coarse_key]:
            raise CounterexampleFound(
                f"fiber over {fine_key}: {q_pow} * {count} != {coarse[coarse_key]}"
            )

    image_sizes: list[tuple[int, int]] = []
    for j in range(sch.ell[s] + 1):
        ordj = order_mod_reduced(ctx, s, j)
        prefix_len = sch.L[s] + j
        if prefix_len == 0:
            image_sizes.append((j, 1))
            continue
        whole = {row[:prefix_len] for row in rows}
        window = {row[:prefix_len] for row in rows[:ordj]}
        if len(whole) != ordj or len(window) != ordj:
            raise CounterexampleFound(
                f"Phi_{prefix_len} image has {len(whole)} points "
                f"({len(window)} on the order window), expected {ordj}"
            )
        image_sizes.append((j, ordj))

    k_len = sch.L[s] + ctx.k[s]
    joint = {(row[:k_len], tuple(row[p] for p in pos_s1[len(pos_s):])) for row in rows}
    if len(joint) != length:
        raise CounterexampleFound(
            f"joint prefix/suffix map hits {len(joint)} pairs over {length} points"
        )

    return FiberTable(
        s=s,
        length=length,
        fibers=tuple(sorted(fine.items())),
        image_sizes=tuple(image_sizes),
    )


# --------------------------------------------------------------------------
# digit-count histogram and its bound


def _middle_window(q: int) -> tuple[int, int]:
    third = q // 3
    if third < 1:
        raise InvalidParameter(f"base {q} has an empty middle-third digit window")
    return third, 2 * third


def classify_Bk(
    Lam: Iterable[int],
    ctx: BaseContext,
    sys,
    r: int,
    m: int | None = None,
) -> tuple[int, ...]:
    """Histogram (#B_0, ..., #B_u) of middle-window digit counts over Lam.

    Lam must be well-distributed for Pi_{r0,r}: exactly one element per point
    of Y_{r0,r}. k(n) counts the free-suffix positions whose digit lies in
    [floor(q/3), 2 floor(q/3)]; u is the number of those positions.
    """
    sch = _schedule_of(sys)
    mm = _default_m(ctx, m)
    members = sorted(set(Lam))
    positions = _block_positions(ctx, ctx.r0, r)
    y_size = 1
    for i in range(ctx.r0 + 1, r + 1):
        y_size *= sch.q[i - 1] ** ctx.j[i - 1]
    if len(members) != y_size:
        raise NotWellDistributed(f"#Lam = {len(members)}, expected {y_size}")
    if members and members[0] <= mm:
        raise InvalidRange(f"Lam contains n = {members[0]} <= m = {mm}")

    depth = sch.L[r]
    u = len(positions)
    counts = [0] * (u + 1)
    seen: set[tuple[int, ...]] = set()
    for n in members:
        digits = pi_map(n, ctx.r0, r, sys, ctx, m=mm)
        if digits in seen:
            raise NotWellDistributed(f"Pi collision at n = {n}")
        seen.add(digits)
        k = 0
        for p, dig in zip(positions, digits):
            lo, hi = _middle_window(sch.base_at(p + 1))
            if lo <= dig <= hi:
                k += 1
        counts[k] += 1
    return tuple(counts)


def C_bound(k: int, u: int, ctx: BaseContext, sys, r: int) -> Fraction:
    """Exact value of C(k) = binom(u,k) * prod q_i^{j_i} * (1/2)^k (2/3)^(u-k).

    The product runs over blocks r0+1 .. r. u is a free parameter so the
    crossover law C(k) < C(k+1) iff k < (3u-4)/7 can be swept independently
    of the schedule depth.
    """
    if not 0 <= k <= u:
        raise OutOfRange(f"k = {k} outside 0 .. {u}")
    sch = _schedule_of(sys)
    if not ctx.r0 <= r <= len(sch.q):
        raise InvalidRange(f"r = {r} outside r0 = {ctx.r0} .. {len(sch.q)}")
    prod = 1
    for i in range(ctx.r0 + 1, r + 1):
        prod *= sch.q[i - 1] ** ctx.j[i - 1]
    return (
        Fraction(math.comb(u, k))
        * prod
        * Fraction(1, 2) ** k
        * Fraction(2, 3) ** (u - k)
    )


def check_peak_bound(u: int) -> tuple[Fraction, Fraction]:
    """Exact check of the near-peak bound at k = u/6 for u >= 6000, u = 0 mod 6.

    Returns (lhs, rhs) of

        binom(u, u/6) (1/2)^(u/6) (2/3)^(5u/6)  <=  C_tilde * u * alpha^u,

    both exact rationals (alpha^u = (alpha^6)^(u/6) stays rational), raising
    CounterexampleFound if the inequality fails. The schedule prefactor
    prod q^j is common to both sides and cancels.
    """
    if u < 6000 or u % 6 != 0:
        raise InvalidParameter(f"the bound is certified for u >= 6000 divisible by 6, got {u}")
    _, c_tilde = derived_stirling_constants()
    k = u // 6
    lhs = Fraction(math.comb(u, k)) * Fraction(1, 2) ** k * Fraction(2, 3) ** (u - k)
    rhs = c_tilde * u * ALPHA_SIXTH**k
    if lhs > rhs:
        raise CounterexampleFound(f"peak bound fails at u = {u}")
    return lhs, rhs


def write_histogram_csv(
    path: str,
    hist: Sequence[int],
    ctx: BaseContext,
    sys,
    r: int,
) -> None:
    """One row per k: the count #B_k and the exact bound C(k) as num/den."""
    u = len(hist) - 1
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(["k", "count", "C_k_num", "C_k_den"])
        for k, count in enumerate(hist):
            c = C_bound(k, u, ctx, sys, r)
            out.writerow([k, count, c.numerator, c.denominator])
