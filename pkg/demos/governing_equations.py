"""Fractional governing equations in discrete time.

The backward system for a chain with Sibuya kernel is solved forward in t
and its residual checked; the fractional Bernoulli counting law is computed
from its forward system.
"""

import numpy as np

from fracchain import FracKernel, MarkovSpec, decompose, frac_bernoulli_pmf_table, nb_forward_solve, residual_backward, solve_backward

A = np.array([[0.2, 0.5, 0.3], [0.1, 0.6, 0.3], [0.4, 0.4, 0.2]])
jump = decompose(MarkovSpec(A))
alpha, horizon = 0.5, 200
kernel = FracKernel.sibuya(alpha, horizon)
grid = solve_backward(jump, kernel, horizon)

print("transition matrix at t = 200:")
print(np.array2string(grid.at(200), precision=5))
worst = max(np.abs(residual_backward(grid, jump, kernel, t)).max() for t in range(horizon + 1))
print(f"largest residual of the backward system over t <= {horizon}: {worst:.1e}")

lam = 1.0
fwd = nb_forward_solve(alpha, lam, 50, 50)
gf = frac_bernoulli_pmf_table("B", alpha, lam / (1 + lam), 50)
print(f"\nfractional Bernoulli, lambda = {lam}: P(N(1) = 0) = {fwd[0, 1]} (1/(1+lambda) = {1 / (1 + lam)})")
print(f"forward system vs generating function, max gap: {np.abs(fwd - gf).max():.1e}")
print("P(N(50) = k), k = 0..10: " + " ".join(f"{v:.4f}" for v in fwd[:11, 50]))
