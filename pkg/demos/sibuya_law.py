"""The Sibuya step law and the counting process it drives.

Prints exact masses and tails, checks a Monte Carlo histogram against them,
then shows the exact law and first two moments of L(t), the number of
renewals up to time t.
"""

import numpy as np

from fracchain import RngStream, sibuya_counting_moments, sibuya_counting_pmf, sibuya_pmf, sibuya_sample, sibuya_survival

alpha = 0.5
print(f"Sibuya({alpha}): P(Z = k) and P(Z > k)")
for k in (1, 2, 3, 10, 100, 1000):
    print(f"  k = {k:5d}   pmf = {sibuya_pmf(alpha, k):.6e}   survival = {sibuya_survival(alpha, k):.6e}")

draws = sibuya_sample(RngStream(1).generator(), alpha, size=200_000)
print("\nempirical vs exact frequencies from 200,000 draws")
for k in (1, 2, 3, 4):
    print(f"  k = {k}: {np.mean(draws == k):.4f} vs {sibuya_pmf(alpha, k):.4f}")
print(f"  fraction above 1000: {np.mean(draws > 1000):.4f} vs {sibuya_survival(alpha, 1000):.4f}")

t = 20
law = [sibuya_counting_pmf(alpha, t, m) for m in range(t + 1)]
print(f"\nP(L({t}) = m), m = 0..{t}; total mass {sum(law):.15f}")
print("  " + " ".join(f"{v:.4f}" for v in law))

m = sibuya_counting_moments(alpha, 10, 100)
print(f"\nE L(10) = {m.mean_t1:.6f}, E L(100) = {m.mean_t2:.6f}, E L(10) L(100) = {m.cross:.4f}")
