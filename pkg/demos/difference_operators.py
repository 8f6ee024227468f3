"""Fractional backward differences.

Half a difference applied twice gives one ordinary difference; the
generalized derivative built on the Sibuya kernel is the fractional
difference itself.
"""

import numpy as np

from fracchain import FracKernel, frac_diff_seq, gen_frac_deriv

seq = np.zeros(40)
seq[:6] = [1.0, 3.0, -2.0, 0.5, 4.0, 1.0]

half = frac_diff_seq(0.5, seq)
twice = frac_diff_seq(0.5, half)
print("half difference: " + " ".join(f"{v:+.3f}" for v in half[:8]))
print(f"applied twice vs first difference, max gap: {np.abs(twice - frac_diff_seq(1.0, seq)).max():.1e}")

kernel = FracKernel.sibuya(0.3, 39)
gap = max(abs(gen_frac_deriv(kernel, seq, t) - frac_diff_seq(0.3, seq)[t]) for t in range(40))
print(f"Sibuya-kernel derivative vs order-0.3 difference, max gap: {gap:.1e}")
