"""Scaling limits.

Rescaled Sibuya counts approach the inverse-stable law (Kolmogorov
distance); rescaled fractional Bernoulli counts approach the fractional
Poisson law (total variation).
"""

from fracchain import ScalingExperiment, frac_poisson_limit_experiment, inverse_stable_cdf, sibuya_limit_experiment

print("inverse-stable cdf, alpha = 0.5, t = 1: " + " ".join(f"{inverse_stable_cdf(0.5, x):.4f}" for x in (0.5, 1, 2, 4)))

rep = sibuya_limit_experiment(ScalingExperiment(0.5, 1.0, (100, 1000, 10_000), 100_000, seed=7))
for n, d in zip(rep.n, rep.distance):
    print(f"  n = {n:6d}: KS distance {d:.4f}")

rep = frac_poisson_limit_experiment("B", 0.7, 1.0, 2.0, (64, 256, 1024), 200_000, seed=3)
for n, d in zip(rep.n, rep.distance):
    print(f"  n = {n:6d}: total variation {d:.4f}")
print(f"reference mean {rep.extras['reference_mean']:.4f}, limit mean {rep.extras['limit_mean']:.4f}")
