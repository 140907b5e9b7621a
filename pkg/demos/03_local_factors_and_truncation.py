"""Local factors and the truncated multiplicity.

Replacing each L-value by its Euler product over p <= P turns the
multiplicity into a finite product of local factors beta_p(n), one per
prime: a limit-periodic approximation whose truncation error decays as
P grows.  The product and divisor-sum forms are equal as exact rationals.
"""

from geodmult import Congruence, Quaternion, SmoothedSeries, beta, beta_truncated, local_factor
from geodmult.meansquare import seminorm_estimate

n = 18
print(f"Local factors at n = {n}, level 3:")
for p in (2, 3, 5, 7, 11, 13):
    print(f"  beta_{p}({n}) = {local_factor(p, n, Congruence(3)):.10f}")
print(f"  product over p <= 13: {beta_truncated(n, 13, Congruence(3)):.10f}")
print(f"  (checked against the divisor-sum form internally)")

print()
print("Truncations approach the full multiplicity (level 1, smoothed L):")
strat = SmoothedSeries()
for t in (9, 14, 27):
    full = beta(t, Congruence(1), strat)
    row = [abs(beta_truncated(t, P, Congruence(1), checked=False) - full) for P in (5, 50, 500)]
    print(f"  t={t:>3}: |beta - beta_P| at P=5, 50, 500 -> {row[0]:.2e}, {row[1]:.2e}, {row[2]:.2e}")

print()
print("Averaged truncation error (empirical seminorm over n <= 120):")
for P in (10, 100, 1000):
    est = seminorm_estimate(Congruence(1), P, 2, 120, SmoothedSeries(500.0, 4000))
    print(f"  P = {P:>5}: {est:.5f}")
print()
print("Quaternion contexts factor the same way:")
print(f"  beta_truncated(7, 13, Quaternion(15)) = {beta_truncated(7, 13, Quaternion(15)):.10f}")
