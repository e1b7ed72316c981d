"""Prime schedules, mixed-radix bases, and exact digit representations.

A schedule is a finite strictly increasing list of primes ``q_1 < q_2 < ...``
with ``q_1 >= 7`` and positive level multiplicities ``ell_r``.  It induces the
base sequence ``M_n``: the value ``q_{s+1}`` repeated ``ell_{s+1}`` times, so
position ``n = L_s + (j+1)`` (1-based, ``L_s = ell_1 + ... + ell_s``) has base
``q_{s+1}``.  Every non-negative integer N then has a unique digit string

    N = d_0 + d_1*M_1 + d_2*M_1*M_2 + ...      with 0 <= d_n <= M_{n+1} - 1.

Digits are 0-indexed while bases are 1-indexed: digit index n uses base
M_{n+1}.  All integers are exact; products N_r = q_1^ell_1 ... q_r^ell_r are
plain Python big integers.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .errors import (
    InvalidParameter,
    NoPrimeInWindow,
    OutOfRange,
    ScheduleTooShort,
)

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for all n < 3.3e24 (covers any schedule prime)."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def next_prime(n: int) -> int:
    """Smallest prime >= n."""
    k = max(n, 2)
    while not is_prime(k):
        k += 1
    return k


@dataclass(frozen=True)
class PrimeSchedule:
    """Finite prime schedule with derived partial sums and products.

    d: growth exponent used when the multiplicities were generated
    q: strictly increasing primes, q[0] >= 7
    ell: positive multiplicities, one per prime
    variant: how q was generated ("nth-prime-from-7", "cube-window(offset=K)",
        or "explicit")
    """

    d: int
    q: tuple[int, ...]
    ell: tuple[int, ...]
    variant: str = "explicit"
    L: tuple[int, ...] = field(init=False, repr=False)
    N: tuple[int, ...] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if not isinstance(self.d, int) or self.d < 1:
            raise InvalidParameter(f"growth exponent must be a positive integer, got {self.d!r}")
        if len(self.q) == 0:
            raise InvalidParameter("schedule needs at least one prime")
        if len(self.q) != len(self.ell):
            raise InvalidParameter("q and ell must have equal length")
        if self.q[0] < 7:
            raise InvalidParameter(f"first prime must be >= 7, got {self.q[0]}")
        for a, b in zip(self.q, self.q[1:]):
            if b <= a:
                raise InvalidParameter(f"primes must strictly increase, got {a} then {b}")
        for p in self.q:
            if not is_prime(p):
                raise InvalidParameter(f"{p} is not prime")
        for m in self.ell:
            if not isinstance(m, int) or m < 1:
                raise InvalidParameter(f"multiplicities must be positive integers, got {m!r}")
        L = [0]
        for m in self.ell:
            L.append(L[-1] + m)
        N = [1]
        for p, m in zip(self.q, self.ell):
            N.append(N[-1] * p**m)
        object.__setattr__(self, "L", tuple(L))
        object.__setattr__(self, "N", tuple(N))

    def __len__(self) -> int:
        return len(self.q)

    @property
    def depth(self) -> int:
        """Total number of digit positions the schedule covers (sum of ell)."""
        return self.L[-1]

    @property
    def growth_constant(self) -> float:
        """max_r q_r / r^2; the realized quadratic growth constant of the primes."""
        return max(p / r**2 for r, p in enumerate(self.q, start=1))

    def level_of(self, n: int) -> tuple[int, int]:
        """Decompose a 1-based position n = L_s + (j+1) into (s, j)."""
        if not 1 <= n <= self.depth:
            raise OutOfRange(f"position {n} outside 1..{self.depth}")
        # schedules stay short (hundreds of blocks); linear scan is fine
        s = 0
        while self.L[s + 1] < n:
            s += 1
        return s, n - self.L[s] - 1

    def base_at(self, n: int) -> int:
        """Base M_n at 1-based position n."""
        s, _ = self.level_of(n)
        return self.q[s]

    def bases(self, count: int | None = None) -> tuple[int, ...]:
        """The sequence M_1..M_count (full depth when count is omitted)."""
        if count is None:
            count = self.depth
        if not 0 <= count <= self.depth:
            raise OutOfRange(f"requested {count} bases, schedule covers {self.depth}")
        out: list[int] = []
        for p, m in zip(self.q, self.ell):
            out.extend([p] * m)
            if len(out) >= count:
                break
        return tuple(out[:count])

    def prefix_product(self, n: int) -> int:
        """M_1 * ... * M_n exactly (1 for n = 0)."""
        if n < 0 or n > self.depth:
            raise OutOfRange(f"prefix length {n} outside 0..{self.depth}")
        if n == 0:
            return 1
        s, j = self.level_of(n)
        return self.N[s] * self.q[s] ** (j + 1)

    def to_json(self) -> str:
        return json.dumps(
            {"d": self.d, "variant": self.variant, "q": list(self.q), "ell": list(self.ell)}
        )

    @classmethod
    def from_json(cls, text: str) -> "PrimeSchedule":
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InvalidParameter(f"schedule JSON malformed: {exc}") from exc
        extra = set(obj) - {"d", "variant", "q", "ell"}
        if extra:
            raise InvalidParameter(f"unknown schedule keys: {sorted(extra)}")
        try:
            return cls(
                d=obj["d"],
                q=tuple(obj["q"]),
                ell=tuple(obj["ell"]),
                variant=obj.get("variant", "explicit"),
            )
        except KeyError as exc:
            raise InvalidParameter(f"schedule JSON missing key {exc}") from exc


def build_schedule(
    d: int,
    count: int,
    variant: str = "nth-prime-from-7",
    offset: int | None = None,
    ell: Sequence[int] | None = None,
) -> PrimeSchedule:
    """Generate a schedule of `count` primes.

    Variants:
      "nth-prime-from-7": the successive primes 7, 11, 13, ...
      "cube-window": one prime per window [(n+offset)^3, (n+offset+1)^3]
        (smallest in each window).  The offset is a small user-supplied
        integer standing in for a shift far too large to compute with; any
        output derived from such a schedule is flagged as offset-shifted.

    Multiplicities default to ell_r = r^(d-1), so d=1 gives the flat schedule
    and d=2 the linearly growing one; pass `ell` explicitly for anything else.
    """
    if not isinstance(count, int) or count < 1:
        raise InvalidParameter(f"count must be a positive integer, got {count!r}")
    if not isinstance(d, int) or d < 1:
        raise InvalidParameter(f"growth exponent must be a positive integer, got {d!r}")

    if variant == "nth-prime-from-7":
        q: list[int] = []
        p = 7
        while len(q) < count:
            p = next_prime(p)
            q.append(p)
            p += 1
        tag = variant
    elif variant == "cube-window":
        if offset is None or not isinstance(offset, int) or offset < 1:
            raise InvalidParameter("cube-window needs an integer offset >= 1")
        q = []
        for n in range(1, count + 1):
            lo, hi = (n + offset) ** 3, (n + offset + 1) ** 3
            p = next_prime(max(lo, 7))
            if p > hi:
                raise NoPrimeInWindow(f"no prime in [{lo}, {hi}]")
            q.append(p)
        tag = f"cube-window(offset={offset})"
    else:
        raise InvalidParameter(f"unknown schedule variant {variant!r}")

    if ell is None:
        ell_t = tuple(r ** (d - 1) for r in range(1, count + 1))
    else:
        ell_t = tuple(ell)
        if len(ell_t) != count:
            raise InvalidParameter("explicit ell must match count")
    return PrimeSchedule(d=d, q=tuple(q), ell=ell_t, variant=tag)


def base_at(s: PrimeSchedule, n: int) -> int:
    """Base M_n at 1-based position n of the schedule."""
    return s.base_at(n)


@dataclass(frozen=True)
class MixedRadixDigits:
    """A digit string together with the bases it is written in.

    digits[i] is the coefficient of M_1*...*M_i (the i = 0 term has weight 1),
    so digits[i] < bases[i] = M_{i+1}.
    """

    digits: tuple[int, ...]
    bases: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.digits) != len(self.bases):
            raise InvalidParameter("digit and base strings must have equal length")
        for i, (dgt, b) in enumerate(zip(self.digits, self.bases)):
            if not 0 <= dgt <= b - 1:
                raise InvalidParameter(f"digit {dgt} at index {i} outside 0..{b - 1}")

    def __len__(self) -> int:
        return len(self.digits)

    def __iter__(self) -> Iterator[int]:
        return iter(self.digits)

    def value(self) -> int:
        """Reconstruct the represented integer."""
        total = 0
        weight = 1
        for dgt, b in zip(self.digits, self.bases):
            total += dgt * weight
            weight *= b
        return total


def to_digits(N: int, s: PrimeSchedule, length: int | None = None) -> MixedRadixDigits:
    """Digit string of N >= 0 in the schedule's bases.

    With `length` omitted the minimal string is returned (no trailing zeros;
    N = 0 gives the empty string); otherwise the string is zero-padded to
    exactly `length` digits.  ScheduleTooShort if the requested window cannot
    represent N.
    """
    if N < 0:
        raise InvalidParameter(f"digits are defined for N >= 0, got {N}")
    limit = s.depth if length is None else length
    if length is not None and not 0 <= length <= s.depth:
        raise ScheduleTooShort(f"requested {length} digits, schedule covers {s.depth}")
    bases = s.bases(limit)
    digits: list[int] = []
    rest = N
    for b in bases:
        rest, dgt = divmod(rest, b)
        digits.append(dgt)
    if rest != 0:
        raise ScheduleTooShort(f"{N} does not fit in {limit} digit positions")
    if length is None:
        while digits and digits[-1] == 0:
            digits.pop()
        bases = bases[: len(digits)]
    return MixedRadixDigits(tuple(digits), tuple(bases))


def digits_congruent(a: int, b: int, n: int, s: PrimeSchedule) -> bool:
    """True iff a and b agree modulo M_1*...*M_n, equivalently on their first n digits."""
    if a < 0 or b < 0:
        raise InvalidParameter("defined for non-negative integers")
    return (a - b) % s.prefix_product(n) == 0
