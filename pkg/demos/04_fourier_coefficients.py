"""Fourier coefficients of the local factors.

Each local factor is limit periodic, so it has Fourier coefficients at
rational phases a/p^c.  Closed-form tables cover the level and ramified
primes; the exact DFT over one period (sparse: the summands live on
n = +-2 mod p^{2b}) validates every entry, and the assembled b-series
reproduces the assembled closed forms.
"""

import numpy as np

from geodmult import (
    Congruence,
    Quaternion,
    RationalPhase,
    a_value,
    char_sum,
    closed_form_assembled,
    dft_coefficient,
    gauss_sum,
    global_coefficient,
    local_euler_factor,
    local_period,
    series_coefficient,
)
from geodmult.multiplicity import LocalFlavor

q = 5
print(f"Level prime q = {q}: the b = 1 summand has period {local_period(q, 1, LocalFlavor.LEVEL)}")
phase = RationalPhase(1, q**4)
print(f"  DFT coefficient at 1/{q**4}: {dft_coefficient(q, 1, LocalFlavor.LEVEL, phase):.10f}")
print(f"  table value 2 cos(4 pi/{q**4})/{q**4}: {2/q**4 * np.cos(4*np.pi/q**4):.10f}")

print()
print("Assembled coefficients (level side vs ramified side):")
for c in (1, 2, 3):
    lvl = closed_form_assembled(q, c, 1, "congruence")
    ram = closed_form_assembled(q, c, 1, "quaternion")
    srs = series_coefficient(q, c, 1, Congruence(q))
    print(f"  c={c}: level {lvl:.8f}  series {srs:.8f}  ramified {ram:.8f}")

print()
print("Gauss sums carry the sign eps_q (1 for q = 1 mod 4, i for 3 mod 4):")
for p in (5, 7, 13, 19):
    print(f"  gauss_sum({p:>2}) = {gauss_sum(p):.6f}   char_sum({p}, 0) = {char_sum(p, 0):.0f}")

print()
print("Coefficients multiply across prime powers (CRT): phase 1/45 splits as")
print(f"  {global_coefficient(1, 45, Congruence(3)):.10f}")

print()
print("Fourier mass per prime power and the local Euler factors:")
for p, ctx, label in ((3, Congruence(3), "level"), (3, Quaternion(15), "ramified"), (3, Congruence(1), "generic")):
    masses = [a_value(p, c, ctx) for c in (1, 2, 3)]
    print(f"  p=3 {label:<9} A(3)={masses[0]:.6f} A(9)={masses[1]:.6f} A(27)={masses[2]:.6f}"
          f"  M_3 = {local_euler_factor(p, ctx):.6f}")
