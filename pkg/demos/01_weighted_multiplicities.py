"""Weighted multiplicities of integer traces, two ways.

For a trace t > 2 the weighted multiplicity collects every closed geodesic
of that trace, weighted by primitive length over sqrt(t^2 - 4).  It can be
evaluated through L-values or through class numbers and regulators; the two
paths share no code below the character level, so their agreement is a
strong correctness check.
"""

from geodmult import (
    ClassNumber,
    Congruence,
    Quaternion,
    beta,
    beta_classcount,
    trace_exists,
)

print("Modular surface (level 1): the first few multiplicities")
print(f"{'t':>4} {'beta (L-path)':>16} {'beta (class counts)':>20}")
for t in range(3, 13):
    via_l = beta(t, Congruence(1), ClassNumber())
    via_h = beta_classcount(t, 1)
    print(f"{t:>4} {via_l:>16.10f} {via_h:>20.10f}")

print()
print("Level 15: traces only exist when every prime of the level allows them")
for t in range(3, 16):
    exists = trace_exists(t, 15)
    value = beta(t, Congruence(15), ClassNumber())
    marker = "" if exists else "   <- no group element has this trace"
    print(f"  t={t:>2}  beta={value:.10f}{marker}")

print()
print("Quaternion surface, ramified at 3 and 5 (discriminant 15):")
for t in range(3, 9):
    print(f"  t={t}  beta_R={beta(t, Quaternion(15), ClassNumber()):.10f}")
print()
print("Traces whose discriminant is a residue at a ramified prime vanish;")
print("the surviving ones are boosted by the factor 1 - (D/p) = 2.")
