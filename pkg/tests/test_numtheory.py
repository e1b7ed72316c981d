"""Orders, splitting exponents, and the derived (b, h) constants."""

import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from moranlab import (
    BaseContext,
    EvenPrime,
    Factorization,
    InvalidParameter,
    NotCoprime,
    OutOfRange,
    PrimeSchedule,
    ScheduleTooShort,
    alpha_constant,
    build_context,
    build_schedule,
    derived_stirling_constants,
    euler_phi,
    integer_J,
    k_of,
    multiplicative_order,
    order_by_crt,
    ord_ratio_check,
    prime_power_order,
    round_threshold,
)
from moranlab.numtheory import ALPHA_SIXTH

from oracles import brute_order


def test_multiplicative_order_examples():
    assert multiplicative_order(2, 7) == 3
    assert multiplicative_order(10, 7) == 6
    with pytest.raises(NotCoprime):
        multiplicative_order(7, 14)


def test_prime_power_order_examples():
    assert prime_power_order(2, 7, 1) == 3
    assert prime_power_order(2, 7, 2) == 21  # k(2,7)=1, so order grows by 7
    # k(3,11)=2: order mod 11^3 is ord_11(3) * 11^(3-2)
    assert prime_power_order(3, 11, 3) == multiplicative_order(3, 11) * 11
    assert prime_power_order(3, 11, 3) == brute_order(3, 11**3)
    with pytest.raises(EvenPrime):
        prime_power_order(3, 2, 1)
    with pytest.raises(NotCoprime):
        prime_power_order(7, 7, 2)


def test_order_by_crt_examples():
    assert order_by_crt(2, Factorization.of(77)) == 30
    assert order_by_crt(2, Factorization.of(7)) == 3
    assert order_by_crt(2, Factorization.of(847)) == 330
    with pytest.raises(NotCoprime):
        order_by_crt(2, Factorization.of(14))


def test_k_of_examples():
    assert k_of(2, 7) == 1  # 2^3 - 1 = 7
    assert k_of(3, 11) == 2  # 3^5 - 1 = 242 = 2 * 11^2
    assert k_of(2, 11) == 1  # 2^10 - 1 = 1023 = 3 * 11 * 31
    with pytest.raises(EvenPrime):
        k_of(3, 2)
    with pytest.raises(NotCoprime):
        k_of(7, 7)
    with pytest.raises(InvalidParameter):
        k_of(2, 9)


def test_k_of_respects_power_bound():
    # q^k <= b^(q-1) since q^k divides b^ord - 1 <= b^(q-1) - 1
    for b in (2, 3, 10, 14):
        for q in (7, 11, 13, 17):
            if b % q:
                assert q ** k_of(b, q) <= b ** (q - 1)


def test_euler_phi_prime_powers():
    for p in (7, 11, 13):
        for k in (1, 2, 3):
            assert euler_phi(p**k) == (p - 1) * p ** (k - 1)
    assert euler_phi(77) == 60
    assert euler_phi(847) == 660


def test_factorization_round_trip():
    f = Factorization.of(2**3 * 7 * 11**2)
    assert f.n == 2**3 * 7 * 11**2
    assert dict(f) == {2: 3, 7: 1, 11: 2}


def test_alpha_constant_brackets():
    assert ALPHA_SIXTH == Fraction(8192, 8325)
    # 0.9973 < alpha < 0.998, certified through exact sixth powers
    assert Fraction(9973, 10000) ** 6 < ALPHA_SIXTH < Fraction(998, 1000) ** 6
    assert alpha_constant() == pytest.approx(0.9973194378783357, abs=1e-15)


def test_stirling_constants():
    c1, c_tilde = derived_stirling_constants()
    assert c1 == Fraction(7, 500)
    assert c_tilde == Fraction(7, 250)


def test_round_threshold_exact_minimality():
    R = round_threshold()
    assert R == 19797
    assert 1001**R >= R * R * 1000**R
    assert 1001 ** (R - 1) < (R - 1) * (R - 1) * 1000 ** (R - 1)


def test_build_context_toy(toy_schedule):
    ctx = build_context(2, 1, toy_schedule)
    assert ctx.r0_prime == 1
    assert ctx.n0 == 1
    assert ctx.Q == 1
    assert ctx.k == (0, 1)
    assert ctx.j == (1, 1)
    assert ctx.r0 == 1
    assert ctx.gamma == pytest.approx(math.sqrt(3) / 2, abs=1e-15)
    assert ctx.r1 == ctx.r0 + 19797


def test_build_context_saturating_gcd():
    # b = 14 shares the prime 7 with the schedule: Q picks it up
    sch = PrimeSchedule(d=1, q=(7, 11), ell=(1, 2))
    ctx = build_context(14, 1, sch)
    assert ctx.Q == 7
    assert ctx.n0 == 1
    # with ell_1 = 2 the 7-adic valuation needs two steps to saturate
    sch2 = PrimeSchedule(d=1, q=(7, 11), ell=(2, 2))
    ctx2 = build_context(14, 1, sch2)
    assert ctx2.n0 == 2
    assert ctx2.Q == 49


def test_build_context_r0_prime_from_factors():
    # 10 = 2*5 and 6 = 2*3, so the first prime >= 5 qualifies
    sch = PrimeSchedule(d=1, q=(7, 11, 13), ell=(1, 2, 2))
    ctx = build_context(10, 6, sch)
    assert ctx.r0_prime == 1


def test_build_context_rejects():
    sch = PrimeSchedule(d=1, q=(7, 11), ell=(1, 2))
    with pytest.raises(InvalidParameter):
        build_context(1, 1, sch)
    with pytest.raises(InvalidParameter):
        build_context(2, 0, sch)
    with pytest.raises(InvalidParameter):
        build_context(2, 1, sch, weights=(Fraction(0), Fraction(1, 2)))
    # largest prime of b exceeds every schedule prime
    with pytest.raises(ScheduleTooShort):
        build_context(13, 1, PrimeSchedule(d=1, q=(7, 11), ell=(1, 2)))
    # flat tail where j_2 = ell_2 - k_2 = 0 leaves no free suffix
    with pytest.raises(ScheduleTooShort):
        build_context(2, 1, PrimeSchedule(d=1, q=(7, 11), ell=(1, 1)))


def test_ord_ratio_check_toy(toy_schedule):
    ctx = build_context(2, 1, toy_schedule)
    lhs, rhs = ord_ratio_check(ctx, 1)
    assert lhs == rhs == 330
    with pytest.raises(OutOfRange):
        ord_ratio_check(ctx, 0)
    with pytest.raises(OutOfRange):
        ord_ratio_check(ctx, 2)


def test_integer_J_toy(toy_schedule):
    ctx = build_context(2, 1, toy_schedule)
    assert integer_J(ctx, 2) == 30
    assert integer_J(ctx, 1) == 3  # ord_7(2), no suffix factors yet
    with pytest.raises(OutOfRange):
        integer_J(ctx, 0)


def test_context_json_fields(toy_schedule):
    import json

    ctx = build_context(2, 1, toy_schedule)
    obj = json.loads(ctx.to_json())
    assert obj["Q"] == "1"
    assert obj["k"] == [0, 1]
    assert obj["C_tilde"] == "7/250"


def test_esti_kr_bound_on_context():
    sch = build_schedule(d=2, count=7)
    ctx = build_context(2, 1, sch)
    c = sch.growth_constant
    for r in range(1, len(sch.q) + 1):
        assert ctx.j[r - 1] == sch.ell[r - 1] - ctx.k[r - 1]
        if r <= ctx.r0_prime:
            assert ctx.k[r - 1] == 0
        if r >= 2:
            assert ctx.k[r - 1] <= c * math.log(2) * r**2 / math.log(r)


def test_gcd_result_invariant():
    # gcd(h*b^n, N_s * q_{s+1}^j) stays equal to Q past the saturation point
    rng = random.Random(2026)
    cases = [
        (2, 1, PrimeSchedule(d=1, q=(7, 11), ell=(1, 2))),
        (14, 1, PrimeSchedule(d=1, q=(7, 11), ell=(2, 2))),
        (10, 6, PrimeSchedule(d=1, q=(7, 11, 13), ell=(1, 2, 2))),
        (21, 2, PrimeSchedule(d=1, q=(7, 11), ell=(1, 2))),
    ]
    for b, h, sch in cases:
        ctx = build_context(b, h, sch)
        for _ in range(50):
            n = rng.randint(ctx.n0, ctx.n0 + 20)
            s = rng.randint(ctx.r0_prime, len(sch.q) - 1)
            j = rng.randint(0, sch.ell[s])
            modulus = sch.N[s] * sch.q[s] ** j
            assert math.gcd(abs(h) * b**n, modulus) == ctx.Q
            assert math.gcd(b, modulus // ctx.Q) == 1


@given(
    st.integers(min_value=2, max_value=30),
    st.integers(min_value=2, max_value=60),
    st.integers(min_value=1, max_value=8),
)
def test_order_divides_larger_modulus(a, n, mult):
    m = n * mult
    if math.gcd(a, m) != 1:
        return
    assert multiplicative_order(a, m) % multiplicative_order(a, n) == 0


@settings(max_examples=200)
@given(st.integers(min_value=2, max_value=40), st.integers(min_value=2, max_value=400))
def test_order_matches_brute_force_and_divides_phi(a, n):
    if math.gcd(a, n) != 1:
        return
    order = multiplicative_order(a, n)
    assert order == brute_order(a, n)
    assert pow(a, euler_phi(n), n) == 1
    assert euler_phi(n) % order == 0
