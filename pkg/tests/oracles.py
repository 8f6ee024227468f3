"""Independent exact oracles built from rational arithmetic.

Nothing here uses the package: the Sibuya walk is enumerated through a
dynamic program over (number of renewals, position) with ``Fraction``
weights, which gives exact laws and moments of the counting process.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache


@lru_cache(maxsize=None)
def sibuya_pmf(alpha: Fraction, k: int) -> Fraction:
    """P(Z = k) as a product of trial failure probabilities."""
    out = alpha / k
    for j in range(1, k):
        out *= 1 - alpha / j
    return out


@lru_cache(maxsize=None)
def sibuya_survival(alpha: Fraction, k: int) -> Fraction:
    out = Fraction(1)
    for j in range(1, k + 1):
        out *= 1 - alpha / j
    return out


@lru_cache(maxsize=None)
def walk_positions(alpha: Fraction, t: int) -> tuple:
    """``f[n][s] = P(sigma(n) = s)`` for ``n, s <= t``."""
    f = [[Fraction(0)] * (t + 1) for _ in range(t + 1)]
    f[0][0] = Fraction(1)
    for n in range(1, t + 1):
        for s in range(n - 1, t + 1):
            w = f[n - 1][s]
            if w:
                for k in range(1, t - s + 1):
                    f[n][s + k] += w * sibuya_pmf(alpha, k)
    return tuple(tuple(row) for row in f)


@lru_cache(maxsize=None)
def counting_law(alpha: Fraction, t: int) -> tuple:
    """Exact ``P(L(t) = m)`` for ``m = 0..t``."""
    f = walk_positions(alpha, t)
    return tuple(
        sum((f[m][s] * sibuya_survival(alpha, t - s) for s in range(t + 1)), Fraction(0))
        for m in range(t + 1)
    )


def counting_mean(alpha: Fraction, t: int) -> Fraction:
    return sum((m * p for m, p in enumerate(counting_law(alpha, t))), Fraction(0))


def counting_second(alpha: Fraction, t: int) -> Fraction:
    return sum((m * m * p for m, p in enumerate(counting_law(alpha, t))), Fraction(0))


def counting_cross(alpha: Fraction, t1: int, t2: int) -> Fraction:
    """Exact ``E[L(t1) L(t2)]`` for ``t1 <= t2``.

    Condition on the last renewal ``s = sigma(n) <= t1`` and the first
    overshoot ``s' > t1``; after ``s'`` the walk restarts.
    """
    f = walk_positions(alpha, t2)
    total = Fraction(0)
    for n in range(t1 + 1):
        for s in range(t1 + 1):
            w = f[n][s]
            if not w:
                continue
            # next renewal beyond t2: L(t2) = n
            total += w * sibuya_survival(alpha, t2 - s) * n * n
            for s2 in range(t1 + 1, t2 + 1):
                total += w * sibuya_pmf(alpha, s2 - s) * n * (n + 1 + counting_mean(alpha, t2 - s2))
    return total


def potential(alpha: Fraction, t: int) -> Fraction:
    f = walk_positions(alpha, t)
    return sum((f[n][t] for n in range(t + 1)), Fraction(0))


def _sojourn_law(alpha: Fraction, p: Fraction, kind: str, t: int) -> list:
    """Exact holding-time law on ``0..t``: A is ``sigma(M)``, B is ``1 + sigma(M - 1)``."""
    f = walk_positions(alpha, t)
    q = 1 - p
    law = [Fraction(0)] * (t + 1)
    for M in range(1, t + 2):
        w = p * q ** (M - 1)
        n = M if kind == "A" else M - 1
        shift = 0 if kind == "A" else 1
        if n > t:
            continue
        for s in range(t + 1 - shift):
            law[s + shift] += w * f[n][s]
    return law


def semi_markov_law(A, alpha: Fraction, kind: str, initial: int, t_max: int) -> list:
    """Exact state pmf of a type A/B chain by first-jump decomposition.

    ``A`` is a square list of ``Fraction`` rows; returns a list over
    ``t = 0..t_max`` of state pmfs.
    """
    S = len(A)
    p = [1 - A[i][i] for i in range(S)]
    H = [[A[i][j] / p[i] if j != i else Fraction(0) for j in range(S)] for i in range(S)]
    laws = [_sojourn_law(alpha, p[i], kind, t_max) for i in range(S)]

    @lru_cache(maxsize=None)
    def pmf(i: int, t: int) -> tuple:
        # stay beyond t, or leave at d <= t and restart from the next state
        out = [Fraction(0)] * S
        out[i] = 1 - sum(laws[i][: t + 1], Fraction(0))
        for d in range(1, t + 1):
            if laws[i][d]:
                for k in range(S):
                    if H[i][k]:
                        sub = pmf(k, t - d)
                        for j in range(S):
                            out[j] += laws[i][d] * H[i][k] * sub[j]
        return tuple(out)

    return [pmf(initial, t) for t in range(t_max + 1)]


def time_change_law(A, alpha: Fraction, initial: int, t_max: int) -> list:
    """Exact pmf of ``X(L(t))`` by conditioning on ``L(t)``."""
    S = len(A)
    out = []
    for t in range(t_max + 1):
        law = counting_law(alpha, t)
        v = [Fraction(int(j == initial)) for j in range(S)]
        acc = [Fraction(0)] * S
        for n in range(t + 1):
            for j in range(S):
                acc[j] += law[n] * v[j]
            v = [sum((v[i] * A[i][j] for i in range(S)), Fraction(0)) for j in range(S)]
        out.append(tuple(acc))
    return out
