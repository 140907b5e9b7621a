"""Four routes to L(1, chi_D), cross-validated.

ClassNumber is exact in structure (class number times regulator over
sqrt(D)); LogSin is the finite character sum against log sin; the smoothed
series and truncated Euler product are the workhorses for large D, with
empirically established accuracy.
"""

from geodmult import ClassNumber, EulerTruncated, LogSin, SmoothedSeries, cross_validate, l_one

D = 40
print(f"L(1, chi_{D}) by four strategies:")
for strat in (ClassNumber(), LogSin(), SmoothedSeries(2000.0, 50_000), EulerTruncated(10_000)):
    print(f"  {strat!r:<40} {l_one(D, strat):.12f}")

print()
print("Cross-validation over every discriminant up to 300:")
report = cross_validate(300)
for pair, dev in sorted(report.max_deviation.items()):
    D_worst = report.argmax_D[pair]
    print(f"  {pair[0]:<14} vs {pair[1]:<24} max |diff| = {dev:.3e}  (at D = {D_worst})")

print()
print("The exact strategies agree to near machine precision; the smoothed")
print("series tracks them to a few parts in a thousand at this range, and")
print("the truncated Euler product converges as its prime bound grows:")
for P in (100, 1000, 10_000):
    print(f"  P = {P:>6}: L(1, chi_40) ~ {l_one(40, EulerTruncated(P)):.8f}")
print(f"  exact    : {l_one(40, ClassNumber()):.8f}")
