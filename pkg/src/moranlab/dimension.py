"""Scale geometry of convolved Cantor-Moran measures.

The constructions convolve the base {0,1}-digit measure mu with an auxiliary
even-digit measure nu, producing per-level digit sets F_n = D_n + E_n whose
uniform measure eta obeys a mass-distribution bound against a gauge function.
Three variants:

  dim-one    every level uses E_n = {0, 2, ..., 2 floor(M_n/4)}; eta then
             satisfies eta(B(x,r)) <= 8 r^(1-eps) for every eps in (0,1).
  gauge      even-digit levels only on a sparse index set N chosen so that
             2^(#A_r) <= g(r) = phi(r)/r; elsewhere E_n = {0,...,M_n-2} fills
             the level; eta(B(x,r)) <= 4 phi(r) on the certified grid.
  extreme    like gauge with g = phi(r)/(r H(r)) and nearly full even sets
             E_n = {0, 2, ..., M_n - 3} off N.

Every ball bound is exact rational arithmetic: the number of level-(h(r)+1)
basic intervals meeting B(x, r) is counted by a most-significant-digit walk
over the contiguous digit sets, never by enumeration.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .errors import (
    CounterexampleFound,
    GaugeTooSmall,
    InvalidParameter,
    OutOfRange,
    ScheduleTooShort,
)
from .fourier import MoranSystem
from .radix import PrimeSchedule

_LN2 = math.log(2.0)


def _ln_fraction(r: Fraction) -> float:
    # math.log takes arbitrary-size ints, so this never overflows
    return math.log(r.numerator) - math.log(r.denominator)


def _schedule_of(sys) -> PrimeSchedule:
    if isinstance(sys, PrimeSchedule):
        return sys
    sch = getattr(sys, "schedule", None)
    if isinstance(sch, PrimeSchedule):
        return sch
    raise InvalidParameter(f"no schedule on {type(sys).__name__}")


# --------------------------------------------------------------------------
# gauge functions


@dataclass(frozen=True)
class GaugeFunction:
    """phi(r), evaluated in double precision at exact rational arguments.

    kinds: power(s) for r^s; r_times_log_power(c) for r (log 1/r)^c;
    r_times_H(c) for r exp(c (log(1/r) / loglog(1/r))^(1/4)); custom for a
    log-log interpolated table of (r, phi(r)) points.
    """

    kind: str
    param: float = 1.0
    table: tuple[tuple[Fraction, float], ...] | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("power", "r_times_log_power", "r_times_H", "custom"):
            raise InvalidParameter(f"unknown gauge kind {self.kind!r}")
        if self.kind == "custom":
            if not self.table or len(self.table) < 2:
                raise InvalidParameter("custom gauge needs a table of at least 2 points")
            rs = [Fraction(r) for r, _ in self.table]
            vs = [v for _, v in self.table]
            if any(a >= b for a, b in zip(rs, rs[1:])):
                raise InvalidParameter("custom table r values must strictly increase")
            if any(a >= b for a, b in zip(vs, vs[1:])) or any(v <= 0 for v in vs):
                raise InvalidParameter("custom gauge must be positive and increasing")
        elif self.param <= 0:
            raise InvalidParameter(f"gauge parameter must be positive, got {self.param}")

    def log_value(self, r: Fraction) -> float:
        """ln phi(r); safe where phi underflows double precision."""
        r = Fraction(r)
        if not 0 < r <= 1:
            raise OutOfRange(f"gauges are evaluated on (0, 1], got {r}")
        ln_r = _ln_fraction(r)
        if self.kind == "power":
            return self.param * ln_r
        if self.kind == "r_times_log_power":
            L = -ln_r
            if L <= 1.0:
                raise OutOfRange(f"r = {r} too large for a log-power gauge")
            return ln_r + self.param * math.log(L)
        if self.kind == "r_times_H":
            L = -ln_r
            if L <= math.e:
                raise OutOfRange(f"r = {r} too large for an H-adjusted gauge")
            return ln_r + self.param * (L / math.log(L)) ** 0.25
        lo = self.table[0][0]
        hi = self.table[-1][0]
        if not lo <= r <= hi:
            raise OutOfRange(f"r = {r} outside the custom table [{lo}, {hi}]")
        for (r0, v0), (r1, v1) in zip(self.table, self.table[1:]):
            if r <= r1:
                x0, x1 = _ln_fraction(Fraction(r0)), _ln_fraction(Fraction(r1))
                t = 0.0 if x1 == x0 else (_ln_fraction(r) - x0) / (x1 - x0)
                return math.log(v0) + t * (math.log(v1) - math.log(v0))
        raise OutOfRange(f"r = {r} not located in the custom table")

    def value(self, r: Fraction) -> float:
        return math.exp(self.log_value(r))

    def vanishing_ratio_check(self, decades: Sequence[int] = tuple(range(3, 121, 3))) -> bool:
        """Necessary condition for r/phi(r) -> 0, checked on the decade grid
        r = 10^-k: the log ratio must strictly decrease and lose at least 0.1
        over the grid (a constant ratio fails both)."""
        logs = [
            _ln_fraction(Fraction(1, 10**k)) - self.log_value(Fraction(1, 10**k))
            for k in decades
        ]
        decreasing = all(a > b for a, b in zip(logs, logs[1:]))
        return decreasing and logs[0] - logs[-1] >= 0.1


# --------------------------------------------------------------------------
# h(r)


def h_of_r(r: Fraction, sys) -> int:
    """The unique h with 1/(M_1...M_{h+1}) < r <= 1/(M_1...M_h), exactly."""
    sch = _schedule_of(sys)
    r = Fraction(r)
    if r <= 0:
        raise OutOfRange(f"r must be positive, got {r}")
    if r > Fraction(1, sch.base_at(1)):
        raise OutOfRange(f"r = {r} exceeds 1/M_1 = 1/{sch.base_at(1)}")
    P = sch.base_at(1)
    h = 1
    # advance while the next prefix still satisfies r <= 1/P_{h}
    while r * P < 1:
        if h + 1 > sch.depth:
            raise ScheduleTooShort(f"r = {r} needs depth beyond {sch.depth}")
        h += 1
        P *= sch.base_at(h)
    if r * P > 1:
        h -= 1  # r fell strictly inside the previous band
    return h


# --------------------------------------------------------------------------
# sparse index sets


@dataclass(frozen=True)
class SparseCertificate:
    """The special level set N plus the per-band verification grid.

    rows are (m, count, count*ln2, ln g(1/P_m), ok): 2^count <= g at the band
    top, where count = #(N restricted to levels <= m+1). Bands shallower than
    the first special level can have g < 1 = 2^0; those rows carry ok=False
    and the ball bound starts past them.
    """

    levels: tuple[int, ...]
    rows: tuple[tuple[int, int, float, float, bool], ...]


def sparse_index_set(
    log_g: Callable[[Fraction], float],
    sch: PrimeSchedule,
    depth: int | None = None,
) -> SparseCertificate:
    """Build N = {h(r_k) + 1} so that 2^(#A_r) <= g(r) on the band-top grid.

    The monotone envelope g~(r) = inf{g(t): t <= r} is taken over the grid of
    band tops r_m = 1/(M_1...M_m) (a running minimum from the deep end; the
    supremum r_k = sup{r : g~(r) >= n_k} then snaps to a band top because the
    envelope is constant on each band of the grid). Thresholds are n_k = 2^k;
    indices are thinned to strictly increasing band positions, so the i-th
    kept threshold has k_i >= i and

        2^(#A_r) <= 2^(k_i) = n_(k_i) <= g~(r) <= g(r)

    holds down the chain. The certificate rows re-verify this against the raw
    g at every band top.
    """
    if depth is None:
        depth = sch.depth
    if not 1 <= depth <= sch.depth:
        raise OutOfRange(f"depth {depth} outside 1 .. {sch.depth}")
    raw: list[float] = []
    P = 1
    for m in range(1, depth + 1):
        P *= sch.base_at(m)
        raw.append(log_g(Fraction(1, P)))
    env = raw.copy()
    for i in range(depth - 2, -1, -1):
        env[i] = min(env[i], env[i + 1])

    # one pass over bands: band m is kept with the smallest threshold index
    # not yet used, i.e. k = last_k + 1, provided 2^k <= g~ at the band top
    kept: list[tuple[int, int]] = []  # (k, band index m)
    last_k = 0
    for m in range(1, depth + 1):
        e = env[m - 1]
        if (last_k + 1) * _LN2 <= e:
            kept.append((last_k + 1, m))
            last_k = int(e // _LN2) if math.isfinite(e) else 2**62
    if not kept:
        raise GaugeTooSmall("g never reaches 2 on the band grid; the gauge is too small")

    levels = tuple(m + 1 for _, m in kept if m + 1 <= depth)
    rows: list[tuple[int, int, float, float, bool]] = []
    for m in range(1, depth + 1):
        count = sum(1 for _, mi in kept if mi <= m and mi + 1 <= depth)
        lhs = count * _LN2
        ok = lhs <= raw[m - 1] + 1e-9
        if count >= 1 and not ok:
            raise CounterexampleFound(f"band {m}: 2^{count} exceeds g at the band top")
        rows.append((m, count, lhs, raw[m - 1], ok))
    return SparseCertificate(levels=levels, rows=tuple(rows))


# --------------------------------------------------------------------------
# convolved systems


def _even_digit_set(M: int) -> tuple[int, ...]:
    return tuple(range(0, 2 * (M // 4) + 1, 2))


def _convolve(
    base: tuple[int, ...], base_w: tuple[Fraction, ...], extra: tuple[int, ...]
) -> tuple[tuple[int, ...], tuple[Fraction, ...]]:
    # distribution of d + e with e uniform on `extra`
    share = Fraction(1, len(extra))
    acc: dict[int, Fraction] = {}
    for d, w in zip(base, base_w):
        for e in extra:
            acc[d + e] = acc.get(d + e, Fraction(0)) + w * share
    items = sorted(acc.items())
    return tuple(f for f, _ in items), tuple(w for _, w in items)


@dataclass(frozen=True)
class ConvolvedSystem:
    """Digit data of mu * nu: per-level base sets D_n, even sets E_n, sums
    F_n = D_n + E_n with convolution weights, and the special level set N."""

    schedule: PrimeSchedule
    base_sets: tuple[tuple[int, ...], ...]
    nu_sets: tuple[tuple[int, ...], ...]
    sum_sets: tuple[tuple[int, ...], ...]
    weights: tuple[tuple[Fraction, ...], ...]
    special_levels: tuple[int, ...]
    variant: str

    def __post_init__(self) -> None:
        depth = self.schedule.depth
        for name, seq in (
            ("base_sets", self.base_sets),
            ("nu_sets", self.nu_sets),
            ("sum_sets", self.sum_sets),
            ("weights", self.weights),
        ):
            if len(seq) != depth:
                raise InvalidParameter(f"{name} must cover all {depth} levels")
        if any(a >= b for a, b in zip(self.special_levels, self.special_levels[1:])):
            raise InvalidParameter("special levels must strictly increase")
        special = set(self.special_levels)
        for n in range(1, depth + 1):
            M = self.schedule.base_at(n)
            F = self.sum_sets[n - 1]
            if F[0] < 0 or F[-1] >= M:
                raise InvalidParameter(f"level {n}: sums escape [0, {M})")
            if sum(self.weights[n - 1]) != 1:
                raise InvalidParameter(f"level {n}: weights do not sum to 1")
            E = self.nu_sets[n - 1]
            if n in special:
                if E != _even_digit_set(M):
                    raise InvalidParameter(f"level {n} is special but E is not the even set")
                # liminf guard: keeps the avoidance interval non-degenerate
                if Fraction(max(E) + 1, M) > Fraction(1, 2) + Fraction(1, 7):
                    raise CounterexampleFound(f"level {n}: even set too large for {M}")
            if len(E) >= 2 and E[1] - E[0] == 2:
                # even-step levels must have unique sum decompositions
                if len(F) != len(self.base_sets[n - 1]) * len(E):
                    raise CounterexampleFound(f"level {n}: sums collide on an even-step set")

    @property
    def depth(self) -> int:
        return self.schedule.depth

    def as_moran_system(self) -> MoranSystem:
        """The convolution as a plain digit system (for transforms/sampling)."""
        return MoranSystem(
            schedule=self.schedule, digit_sets=self.sum_sets, weights=self.weights
        )

    def uniform_interval_mass(self, depth: int) -> Fraction:
        """Mass of one depth-`depth` basic interval under the uniform measure
        eta on the F-digit tree."""
        if not 0 <= depth <= self.depth:
            raise OutOfRange(f"depth {depth} outside 0 .. {self.depth}")
        mass = Fraction(1)
        for k in range(depth):
            mass /= len(self.sum_sets[k])
        return mass


def build_convolved(
    sys: MoranSystem,
    variant: str,
    phi: GaugeFunction | None = None,
    H_param: float = 1.0,
) -> ConvolvedSystem:
    """Construct the convolution digit system for one of the three variants.

    gauge and extreme require phi; extreme additionally divides the target
    ratio by H(r) = exp(H_param (log(1/r)/loglog(1/r))^(1/4)). The special
    level set is certified by sparse_index_set and GaugeTooSmall propagates.
    """
    if not sys.is_binary:
        raise InvalidParameter("convolution constructions assume {0,1} base digits")
    sch = sys.schedule
    depth = sch.depth
    if variant == "dim-one":
        special = tuple(range(1, depth + 1))
    elif variant in ("gauge", "extreme"):
        if phi is None:
            raise InvalidParameter(f"variant {variant!r} needs a gauge function")
        if not phi.vanishing_ratio_check():
            raise GaugeTooSmall("r/phi(r) does not vanish on the decade grid")
        if variant == "gauge":
            log_g = lambda r: phi.log_value(r) - _ln_fraction(r)
        else:
            if H_param <= 0:
                raise InvalidParameter(f"H_param must be positive, got {H_param}")

            def log_g(r: Fraction) -> float:
                L = -_ln_fraction(r)
                if L <= math.e:
                    return -math.inf
                return phi.log_value(r) - _ln_fraction(r) - H_param * (L / math.log(L)) ** 0.25

        special = sparse_index_set(log_g, sch).levels
    else:
        raise InvalidParameter(f"unknown variant {variant!r}")

    special_set = set(special)
    nu_sets: list[tuple[int, ...]] = []
    sum_sets: list[tuple[int, ...]] = []
    weights: list[tuple[Fraction, ...]] = []
    for n in range(1, depth + 1):
        M = sch.base_at(n)
        if n in special_set:
            E = _even_digit_set(M)
        elif variant == "gauge":
            E = tuple(range(M - 1))
        else:
            E = tuple(range(0, M - 2, 2))
        F, lam = _convolve(sys.digit_sets[n - 1], sys.weights[n - 1], E)
        nu_sets.append(E)
        sum_sets.append(F)
        weights.append(lam)
    return ConvolvedSystem(
        schedule=sch,
        base_sets=sys.digit_sets,
        nu_sets=tuple(nu_sets),
        sum_sets=tuple(sum_sets),
        weights=tuple(weights),
        special_levels=special,
        variant=variant,
    )


# --------------------------------------------------------------------------
# exact ball bounds


def _count_below(X: int, caps: Sequence[int], bases: Sequence[int], weights: Sequence[int]) -> int:
    """#{digit strings d with d_k <= caps[k] and sum d_k weights[k] <= X}.

    MSD-first walk; weights[k] = prod of deeper bases, caps define the
    contiguous digit sets {0..caps[k]}.
    """
    if X < 0:
        return 0
    total = 1
    for c in caps:
        total *= c + 1
    top = 0
    for c, b, w in zip(caps, bases, weights):
        top += c * w
    if X >= top:
        return total
    count = 0
    tails = [1] * (len(caps) + 1)
    for i in range(len(caps) - 1, -1, -1):
        tails[i] = tails[i + 1] * (caps[i] + 1)
    rest = X
    for i, (c, b, w) in enumerate(zip(caps, bases, weights)):
        digit = rest // w
        rest -= digit * w
        count += min(digit, c + 1) * tails[i + 1]
        if digit > c:
            return count
    return count + 1  # the string equal to X itself


def ball_measure(x: Fraction, r: Fraction, csys: ConvolvedSystem) -> Fraction:
    """Exact eta(B(x, r)) upper bound: (basic intervals met) x (interval mass).

    eta is the uniform measure on the F-digit tree; intervals are counted at
    level h(r) + 1 by digit arithmetic over the contiguous digit sets.
    """
    x = Fraction(x)
    r = Fraction(r)
    if not 0 <= x <= 1:
        raise OutOfRange(f"x must lie in [0, 1], got {x}")
    h = h_of_r(r, csys)
    L = h + 1
    if L > csys.depth:
        raise ScheduleTooShort(f"need level {L}, schedule covers {csys.depth}")
    caps = []
    for k in range(1, L + 1):
        F = csys.sum_sets[k - 1]
        if F != tuple(range(F[-1] + 1)):
            raise InvalidParameter(f"level {k} digit set is not contiguous from 0")
        caps.append(F[-1])
    bases = [csys.schedule.base_at(k) for k in range(1, L + 1)]
    P_L = 1
    for b in bases:
        P_L *= b
    weights = [0] * L
    w = P_L
    for i, b in enumerate(bases):
        w //= b
        weights[i] = w

    lo_edge = x - r
    hi_edge = x + r
    A = max(0, math.ceil(lo_edge * P_L) - 1)
    B = min(P_L - 1, math.floor(hi_edge * P_L))
    count = _count_below(B, caps, bases, weights) - _count_below(A - 1, caps, bases, weights)
    # a window of length 2r meets at most 2(r P_L + 1) cells of width 1/P_L
    cap_count = 2 * (r * P_L + 1)
    if count > cap_count:
        raise CounterexampleFound(
            f"interval count {count} exceeds the grid bound {cap_count}"
        )
    return count * csys.uniform_interval_mass(L)


# --------------------------------------------------------------------------
# local dimension and h-rate diagnostics


def local_dim_series(x, csys: ConvolvedSystem, depth: int) -> tuple[float, ...]:
    """Terms sum_{k<=n} -log lambda_k(d_k) / log(M_1...M_n) for n = 1..depth.

    x is a SamplePoint drawn from the convolved system (its digits are looked
    up in the lambda weight tables).
    """
    if depth < 1 or depth > len(x.digits):
        raise OutOfRange(f"depth {depth} outside 1 .. {len(x.digits)}")
    terms: list[float] = []
    num_acc = 0.0
    log_P = 0.0
    for n in range(1, depth + 1):
        d = x.digits[n - 1]
        F = csys.sum_sets[n - 1]
        try:
            idx = F.index(d)
        except ValueError:
            raise InvalidParameter(f"digit {d} at level {n} is not in the digit set")
        lam = csys.weights[n - 1][idx]
        num_acc += math.log(lam.denominator) - math.log(lam.numerator)
        log_P += math.log(csys.schedule.base_at(n))
        terms.append(num_acc / log_P)
    return tuple(terms)


def running_min_after(series: Sequence[float], burn_in: int = 50) -> float:
    """Smallest term from index burn_in on (1-based); the liminf surrogate."""
    if burn_in < 1 or burn_in > len(series):
        raise OutOfRange(f"burn_in {burn_in} outside 1 .. {len(series)}")
    return min(series[burn_in - 1 :])


@dataclass(frozen=True)
class HRateRow:
    r: Fraction
    h_r: int
    ratio: float
    band: float | None


def h_rate_report(sys, r_grid: Iterable[Fraction]) -> tuple[HRateRow, ...]:
    """h(r)/log(1/r) per grid point, plus the loglog-corrected band value
    h(r) loglog(1/r)/log(1/r) on cube-window schedules."""
    sch = _schedule_of(sys)
    cube = sch.variant.startswith("cube-window")
    rows: list[HRateRow] = []
    for r in r_grid:
        r = Fraction(r)
        h = h_of_r(r, sch)
        L = -_ln_fraction(r)
        band = h * math.log(L) / L if cube and L > 1.0 else None
        rows.append(HRateRow(r=r, h_r=h, ratio=h / L, band=band))
    return tuple(rows)


# --------------------------------------------------------------------------
# CSV reports


@dataclass(frozen=True)
class BallRow:
    x_seed: int
    r: Fraction
    h_r: int
    ball: Fraction
    phi_r: float
    ratio: float


def write_ball_csv(path: str, rows: Iterable[BallRow]) -> None:
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(
            ["x_seed", "r_num", "r_den", "h_r", "ball_measure_num", "ball_measure_den", "phi_r", "ratio"]
        )
        for row in rows:
            out.writerow(
                [
                    row.x_seed,
                    row.r.numerator,
                    row.r.denominator,
                    row.h_r,
                    row.ball.numerator,
                    row.ball.denominator,
                    repr(row.phi_r),
                    repr(row.ratio),
                ]
            )


def write_local_dim_csv(path: str, series: Sequence[float], burn_in: int = 50) -> None:
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(["n", "term", "running_min"])
        rmin: float | None = None
        for n, term in enumerate(series, start=1):
            if n >= burn_in:
                rmin = term if rmin is None else min(rmin, term)
            out.writerow([n, repr(term), "" if rmin is None else repr(rmin)])
