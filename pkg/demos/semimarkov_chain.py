"""Semi-Markov chains with Sibuya sojourns.

A two-state chain is run with heavy-tailed holding times.  The exact state
law of the first-type chain coincides with the Markov chain evaluated at
the random clock L(t); simulation reproduces it.
"""

import numpy as np

from fracchain import MarkovSpec, RngStream, SemiMarkovSpec, Sibuya, TimeChangeSpec, enumerate_exact, markov_pmf, simulate

A = np.array([[0.5, 0.5], [0.25, 0.75]])
markov = MarkovSpec(A)
alpha, horizon = 0.6, 8

type_a = enumerate_exact(SemiMarkovSpec(markov, Sibuya(alpha), "A"), 0, horizon)
type_b = enumerate_exact(SemiMarkovSpec(markov, Sibuya(alpha), "B"), 0, horizon)
clock = enumerate_exact(TimeChangeSpec(markov, Sibuya(alpha)), 0, horizon)

print("P(in state 0 at time t), started in state 0")
print("   t   Markov   type A   X(L(t))  type B")
for t in range(horizon + 1):
    print(f"  {t:2d}   {markov_pmf(markov, t)[0, 0]:.4f}   {type_a[t, 0]:.4f}   {clock[t, 0]:.4f}    {type_b[t, 0]:.4f}")
print(f"largest gap between type A and X(L(t)): {np.abs(type_a - clock).max():.1e}")

spec = SemiMarkovSpec(markov, Sibuya(alpha), "B")
gen = RngStream(5).generator()
hits = np.zeros(horizon + 1)
runs = 20_000
for _ in range(runs):
    path = simulate(spec, gen, 0, horizon)
    hits += np.array([path.state_at(t) == 0 for t in range(horizon + 1)])
print("\ntype B, simulated vs exact P(state 0):")
print("  " + "  ".join(f"{h / runs:.3f}/{e:.3f}" for h, e in zip(hits, type_b[:, 0])))
