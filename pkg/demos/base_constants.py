"""
Constants attached to a digit base b and multiplier h
=====================================================

For the orbit {h b^n x} the schedule splits into a head (blocks that share
prime factors with h b), frozen digit positions, and free positions. The
context object packages r0', n0, Q, the per-block (k_r, j_r), r0, and the
decay constants gamma and alpha.
"""

from moranlab import (
    PrimeSchedule,
    alpha_constant,
    build_context,
    integer_J,
    ord_ratio_check,
)

toy = PrimeSchedule(d=1, q=(7, 11), ell=(1, 2))

for b, h in ((2, 1), (14, 1), (10, 6)):
    ctx = build_context(b, h, toy)
    print(
        f"b={b:>2} h={h}: r0'={ctx.r0_prime} n0={ctx.n0} Q={ctx.Q} "
        f"k={ctx.k} j={ctx.j} r0={ctx.r0} gamma={ctx.gamma:.6f} r1={ctx.r1}"
    )

# alpha is a sixth root of an exact rational, safely below 0.998
print(f"\nalpha = {alpha_constant():.16f}")

# the order of b over growing block products obeys an exact recursion:
# each new block multiplies the order by q^j after a k-digit warm-up
ctx = build_context(2, 1, toy)
lhs, rhs = ord_ratio_check(ctx, 1)
print(f"order recursion at block 1 -> 2: {lhs} == {rhs}")

# and the order splits into J equal classes, J an exact integer
for r in (1, 2):
    print(f"J at depth {r}: {integer_J(ctx, r)}")
