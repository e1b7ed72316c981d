"""
Summability partial sums for almost-everywhere normality
========================================================

The criterion series sums (1/N^3) sum_{m,n<N} |mu^(h(b^n - b^m))|. Finite
partial sums say nothing about convergence by themselves; what is computable
is each term to certified accuracy, the diagonal/off-diagonal split, and the
per-block sums compared against the asymptotic bound 2 A N_r gamma^(u_r / 3).
"""

from fractions import Fraction

from moranlab import binary_system, block_trend, build_schedule, del_partial, frequency

sch = build_schedule(d=2, count=7)
mu = binary_system(sch, omega=Fraction(1, 2))

report = del_partial(mu, b=2, h=1, N_max=25, eps=1e-9)
print(f"partial sum to N={report.N_max}: {report.partial_sum:.12f} (+/- {report.radius:.2e})")
print(f"diagonal part {report.diagonal_sum:.12f}, off-diagonal {report.offdiagonal_sum:.12f}")
print("first increments:", [round(x, 6) for x in report.increments[:6]])

# per-block sums; frequencies grow like b^(N_r), so only the first block is
# enumerable, and the flag marks that its bound only binds asymptotically
rows = block_trend(mu, b=2, h=1, r_range=(1,), m_values=(0, 1))
print("\nblock sums against the derived-constant bound:")
for row in rows:
    print(f"  r={row.r} m={row.m}: sum={row.block_sum:.6f} <= {row.bound:.1f}  [{row.flag}]")

# the frequencies themselves are plain integers h(b^n - b^m)
print("\nfrequency(h=3, b=2, n=4, m=1) =", frequency(3, 2, 4, 1))
