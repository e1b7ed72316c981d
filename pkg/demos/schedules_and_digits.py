"""
Prime schedules and mixed-radix digits
======================================

A schedule fixes primes 7 <= q_1 < q_2 < ... and repeat counts ell_r; block r
contributes ell_r digit positions in base q_r. Everything downstream (measures,
orders, partitions) reads its bases from one of these objects.
"""

from moranlab import PrimeSchedule, build_schedule, to_digits

# the default family: d = 2 gives repeat counts 1, 2, 3, 4
sch = build_schedule(d=2, count=4)
print(f"variant {sch.variant}, depth {sch.depth}")
print("bases per level:", sch.bases())
print("block products N_r:", sch.N[1:])
print("digit counts   L_r:", sch.L[1:])

# an integer has one digit string per schedule; weights are the prefix products
n = 123456
digits = to_digits(n, sch)
print(f"\n{n} -> digits {digits.digits} in bases {digits.bases}")
print("round trip:", digits.value())

# explicit schedules are handy for worked examples: 847 = 7 * 11^2
toy = PrimeSchedule(d=1, q=(7, 11), ell=(1, 2))
print("\ntoy digits of 846 (the largest 3-digit value):", tuple(to_digits(846, toy)))

# the cube-window variant picks each prime inside ((n+o)^3, (n+1+o)^3);
# a nonzero offset o is flagged by the command line because it changes
# every constant derived from the schedule
cw = build_schedule(d=1, count=3, variant="cube-window", offset=2)
print(f"\ncube-window primes with offset 2: {cw.q} ({cw.variant})")
