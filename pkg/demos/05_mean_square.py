"""The mean square of the weighted multiplicities.

The limiting mean square is an Euler product; for level Q it is the base
constant ~1.3284 times one rational factor per level prime, and for a
quaternion surface one per ramified prime.  Parseval reads the same number
as the total Fourier mass, and an empirical sweep watches the running mean
square climb toward it.
"""

from geodmult import Congruence, Quaternion, c1, empirical, kappa, parseval_partial

base = c1(prime_bound=100_000, tol=1e-3)
print(f"Base constant: {base.value:.9f} (tail bound {base.tail_bound:.2e})")
print()
print("Mean squares by context:")
for ctx in (Congruence(1), Congruence(3), Congruence(15), Quaternion(15), Quaternion(21)):
    res = kappa(ctx, prime_bound=100_000)
    print(f"  {ctx.tag:<16} kappa = {res.value:.9f}")

print()
print("Parseval: Fourier mass up to denominator bound b, level 3")
k3 = kappa(Congruence(3), prime_bound=100_000).value
for bound in (1, 3, 10, 30, 100, 300):
    mass = parseval_partial(Congruence(3), bound)
    print(f"  b <= {bound:>4}: {mass:.9f}   ({mass / k3:.2%} of kappa)")

print()
print("Empirical sweep, level 1 (running averages of beta and beta^2):")
series = empirical(Congruence(1), n_max=4000, checkpoint_stride=1000)
print(f"{'N':>6} {'mean':>10} {'mean_square':>13}")
for cp in series.checkpoints:
    print(f"{cp.n:>6} {cp.mean:>10.5f} {cp.mean_square:>13.5f}")
print(f"\nThe mean tends to 1, the mean square toward {base.value:.4f}.")
