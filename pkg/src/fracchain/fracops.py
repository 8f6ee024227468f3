"""Fractional difference operators and the explicit solvers built on them.

Sequences are indexed from ``t = 0`` and vanish for negative ``t``, so
every operator here is a finite causal convolution.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AccuracyError, DomainError, ValidationError
from .semimarkov import JumpChain
from .series import TruncatedPowerSeries, ps_binomial, ps_inv, ps_mul
from .stochastic import DiscretePmf, PointMass, Sibuya, StepDistribution

_KERNEL_TAIL_TOL = 1e-12
_NEG_TOL = -1e-12


def _check_alpha(alpha):
    if not 0.0 < alpha <= 1.0:
        raise DomainError(f"alpha must lie in (0, 1], got {alpha}")


def binomial_weights(alpha: float, n: int) -> np.ndarray:
    """Coefficients ``(-1)^k gen_binom(alpha, k)`` of ``(I - B)^alpha``, ``k = 0..n``."""
    return ps_binomial(alpha, n).coeffs.copy()


def _as_seq(seq, t=None):
    x = np.asarray(seq, dtype=float)
    if x.ndim != 1:
        raise ValidationError("sequence must be one-dimensional")
    if t is not None and not 0 <= t < x.size:
        raise ValidationError(f"t must lie in [0, {x.size - 1}], got {t}")
    return x


def frac_diff(alpha: float, seq, t: int) -> float:
    """``(I - B)^alpha seq (t) = sum_{k=0}^t (-1)^k gen_binom(alpha, k) seq(t - k)``."""
    if not 0.0 <= alpha <= 1.0:
        raise DomainError(f"alpha must lie in [0, 1], got {alpha}")
    x = _as_seq(seq, t)
    w = binomial_weights(alpha, t)
    return float(np.dot(w, x[t::-1]))


def frac_diff_seq(alpha: float, seq) -> np.ndarray:
    """:func:`frac_diff` at every ``t`` of the sequence."""
    if not 0.0 <= alpha <= 1.0:
        raise DomainError(f"alpha must lie in [0, 1], got {alpha}")
    x = _as_seq(seq)
    return np.convolve(binomial_weights(alpha, x.size - 1), x)[: x.size]


@dataclass(frozen=True, eq=False)
class FracKernel:
    """Step masses ``mu(tau)`` and survival ``S(t) = P(Z > t)`` on ``0..horizon``.

    ``tail_bound`` is the step mass whose location beyond the horizon is
    unknown (zero when the law is known in full).
    """

    mu: np.ndarray
    survival: np.ndarray
    tail_bound: float = 0.0

    def __post_init__(self):
        mu = np.array(self.mu, dtype=float)
        s = np.array(self.survival, dtype=float)
        if mu.shape != s.shape or mu.ndim != 1:
            raise ValidationError("mu and survival must be vectors of equal length")
        if mu[0] != 0.0 or np.any(mu < 0.0):
            raise ValidationError("kernel masses must be nonnegative with mu(0) = 0")
        if abs(mu.sum() + s[-1] - 1.0) > 1e-12:
            raise ValidationError("kernel masses plus final survival must equal 1 within 1e-12")
        mu.setflags(write=False)
        s.setflags(write=False)
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "survival", s)

    @property
    def horizon(self) -> int:
        return self.mu.size - 1

    @classmethod
    def from_step(cls, step: StepDistribution, horizon: int) -> "FracKernel":
        """Kernel of a step law known in full (Sibuya, point mass, finite pmf)."""
        if isinstance(step, Sibuya):
            mu = step.pmf_vector(horizon)
            s = step.survival_vector(horizon)
        else:
            mu = step.pmf_vector(horizon)
            s = np.maximum(1.0 - np.cumsum(mu), 0.0)
        return cls(mu, s, 0.0)

    @classmethod
    def sibuya(cls, alpha: float, horizon: int) -> "FracKernel":
        _check_alpha(alpha)
        return cls.from_step(PointMass(1) if alpha == 1.0 else Sibuya(alpha), horizon)

    @classmethod
    def from_pmf(cls, pmf: DiscretePmf) -> "FracKernel":
        """Kernel from a truncated pmf; mass beyond its support is carried as ``tail_bound``."""
        mass = pmf.mass
        if mass[0] != 0.0:
            raise ValidationError("kernel law must put no mass at 0")
        s = pmf.survival()
        return cls(mass, s, pmf.tail_bound)

    def extended(self, horizon: int) -> "FracKernel":
        """The same kernel on ``0..horizon``; fails if unknown tail mass would enter."""
        if horizon <= self.horizon:
            return FracKernel(self.mu[: horizon + 1], self.survival[: horizon + 1], self.tail_bound)
        if self.tail_bound > _KERNEL_TAIL_TOL:
            raise AccuracyError(
                f"kernel is known on tau <= {self.horizon} only (tail mass {self.tail_bound:.3g}); "
                f"horizon {horizon} would need the unknown tail"
            )
        pad = horizon - self.horizon
        mu = np.concatenate([self.mu, np.zeros(pad)])
        s = np.concatenate([self.survival, np.full(pad, self.survival[-1])])
        return FracKernel(mu, s, self.tail_bound)


def _kernel_for(kernel, horizon):
    if isinstance(kernel, StepDistribution):
        return FracKernel.from_step(kernel, horizon)
    if isinstance(kernel, FracKernel):
        return kernel.extended(horizon)
    raise ValidationError("kernel must be a FracKernel or a StepDistribution")


def gen_frac_deriv(kernel: FracKernel, seq, t: int) -> float:
    """``sum_tau (p(t) - p(t - tau)) mu(tau) = p(t) - sum_{tau=1}^t mu(tau) p(t - tau)``.

    The first form equals the second because the masses add up to one and
    ``p`` vanishes for negative times.
    """
    x = _as_seq(seq, t)
    k = _kernel_for(kernel, t)
    return float(x[t] - np.dot(k.mu[1 : t + 1], x[t - 1 :: -1]) if t else x[0])


def gen_frac_deriv_seq(kernel: FracKernel, seq) -> np.ndarray:
    x = _as_seq(seq)
    k = _kernel_for(kernel, x.size - 1)
    return x - np.convolve(k.mu, x)[: x.size]


# ---------------------------------------------------------------------------
# backward system for type-B chains

@dataclass(frozen=True, eq=False)
class SolutionGrid:
    """Transition functions ``values[i, j, t] = p_ij(t)`` for ``t = 0..horizon``."""

    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def horizon(self) -> int:
        return self.values.shape[2] - 1

    @property
    def size(self) -> int:
        return self.values.shape[0]

    def at(self, t: int) -> np.ndarray:
        return self.values[:, :, t]

    def check(self, tol: float = 1e-10) -> None:
        """Assert nonnegativity (down to -1e-12) and unit row sums."""
        if self.values.min() < _NEG_TOL:
            raise AccuracyError(f"negative transition probability {self.values.min():.3g}")
        dev = np.abs(self.values.sum(axis=1) - 1.0).max()
        if dev > tol:
            raise AccuracyError(f"row sums deviate from 1 by {dev:.3g}")

    def clamped(self) -> np.ndarray:
        return np.maximum(self.values, 0.0)


def solve_backward(jump: JumpChain, kernel, horizon: int) -> SolutionGrid:
    """Solve the backward system of a type-B chain by exact forward recursion in ``t``.

    For ``t >= 1``
    ``(1 + lam_i) p_ij(t) = sum_{tau=1}^t mu(tau) p_ij(t - tau) + S(t) delta_ij
    + lam_i sum_l H_il p_lj(t - 1)``, with ``p_ij(0) = delta_ij``.  At
    ``t = 0`` the system reduces to ``0 = 0``.  ``lam_i = p_i / q_i``
    needs ``q_i > 0``.
    """
    if horizon < 0:
        raise ValidationError(f"horizon must be nonnegative, got {horizon}")
    lam = jump.lam
    k = _kernel_for(kernel, horizon)
    S = jump.size
    eye = np.eye(S)
    out = np.zeros((horizon + 1, S, S))
    out[0] = eye
    scale = 1.0 / (1.0 + lam)[:, None]
    lh = lam[:, None] * jump.H
    for t in range(1, horizon + 1):
        memory = np.tensordot(k.mu[1 : t + 1], out[t - 1 :: -1], axes=1)
        out[t] = scale * (memory + k.survival[t] * eye + lh @ out[t - 1])
    grid = SolutionGrid(np.moveaxis(out, 0, 2))
    grid.check()
    return grid


def residual_backward(grid: SolutionGrid, jump: JumpChain, kernel, t: int) -> np.ndarray:
    """Left side minus right side of the backward system at time ``t``."""
    if not 0 <= t <= grid.horizon:
        raise ValidationError(f"t must lie in [0, {grid.horizon}]")
    lam = jump.lam
    k = _kernel_for(kernel, t)
    v = grid.values
    p0 = v[:, :, 0]
    pt = v[:, :, t]
    deriv = pt - np.tensordot(v[:, :, t - 1 :: -1], k.mu[1 : t + 1], axes=([2], [0])) if t else pt
    lhs = deriv - k.survival[t] * p0
    shifted = v[:, :, t - 1] if t else np.zeros_like(pt)
    rhs = lam[:, None] * (jump.H @ shifted) - lam[:, None] * pt
    if t == 0:
        rhs = rhs + lam[:, None] * p0
    return lhs - rhs


# ---------------------------------------------------------------------------
# fractional Bernoulli processes

def nb_forward_solve(alpha: float, lam: float, horizon: int, k_max: int) -> np.ndarray:
    """``p_k(t) = P(N_B(t) = k)`` for ``k <= k_max``, ``t <= horizon`` from the forward system.

    ``(I-B)^a p_k(t) = -lam p_k(t) + lam p_{k-1}(t-1)`` for ``k >= 1`` and
    ``(I-B)^a p_0(t) - (-1)^t gen_binom(a-1, t) = -lam p_0(t) + lam delta_{0t}``;
    the ``tau = 0`` term of the binomial operator is isolated to give an
    explicit recursion.  Returns an array of shape ``(k_max + 1, horizon + 1)``.
    """
    _check_alpha(alpha)
    if not lam > 0.0:
        raise DomainError(f"lambda must be positive, got {lam}")
    g = binomial_weights(alpha, horizon)
    source = binomial_weights(alpha - 1.0, horizon)  # (-1)^t gen_binom(a-1, t)
    p = np.zeros((k_max + 1, horizon + 1))
    p[0, 0] = 1.0
    for t in range(1, horizon + 1):
        memory = p[:, t - 1 :: -1] @ g[1 : t + 1]
        col = -memory
        col[1:] += lam * p[:-1, t - 1]
        col[0] += source[t]
        p[:, t] = col / (1.0 + lam)
    return p


def _check_p(p):
    if not 0.0 < p <= 1.0:
        raise DomainError(f"p must lie in (0, 1], got {p}")


def frac_bernoulli_pmf_table(kind: str, alpha: float, p: float, horizon: int, m_max: int | None = None) -> np.ndarray:
    """``P(N(t) = m)`` for ``m <= m_max``, ``t <= horizon`` by generating-function extraction.

    With ``w = (1-u)^alpha`` and ``q = 1 - p``:
    kind A: ``(1-u)^{alpha-1} (p - p w)^m / (p + q w)^{m+1}``;
    kind B: ``(p u)^m (p + q (1-u)^{alpha-1}) / (p + q w)^{m+1}``.
    """
    kind = str(kind).upper()
    if kind not in ("A", "B"):
        raise ValidationError(f"kind must be 'A' or 'B', got {kind!r}")
    _check_alpha(alpha)
    _check_p(p)
    if m_max is None:
        m_max = horizon
    q = 1.0 - p
    one = TruncatedPowerSeries.constant(1.0, horizon)
    w = ps_binomial(alpha, horizon)
    w1 = ps_binomial(alpha - 1.0, horizon)
    inv_den = ps_inv(p * one + q * w)
    if kind == "A":
        cur = ps_mul(w1, inv_den)
        ratio = ps_mul(p * (one - w), inv_den)
    else:
        cur = ps_mul(p * one + q * w1, inv_den)
        ratio = ps_mul(one.shift(1) * p, inv_den)
    out = np.empty((m_max + 1, horizon + 1))
    for m in range(m_max + 1):
        out[m] = cur.coeffs
        cur = ps_mul(cur, ratio)
    return out


def frac_bernoulli_pmf(kind: str, alpha: float, p: float, m: int, horizon: int) -> np.ndarray:
    """``P(N(t) = m)`` for ``t = 0..horizon`` (see :func:`frac_bernoulli_pmf_table`)."""
    if m < 0:
        raise ValidationError(f"m must be nonnegative, got {m}")
    kind = str(kind).upper()
    if kind not in ("A", "B"):
        raise ValidationError(f"kind must be 'A' or 'B', got {kind!r}")
    _check_alpha(alpha)
    _check_p(p)
    q = 1.0 - p
    one = TruncatedPowerSeries.constant(1.0, horizon)
    w = ps_binomial(alpha, horizon)
    inv_den = ps_inv(p * one + q * w)
    if kind == "A":
        head = ps_binomial(alpha - 1.0, horizon)
        ratio = ps_mul(p * (one - w), inv_den)
    else:
        head = p * one + q * ps_binomial(alpha - 1.0, horizon)
        ratio = ps_mul(one.shift(1) * p, inv_den)
    return ps_mul(ps_mul(head, inv_den), ratio**m).coeffs.copy()


def bernoulli_pmf_table(p: float, horizon: int) -> np.ndarray:
    """Binomial law of the Bernoulli counting process: ``P[m, j] = C(j, m) p^m q^(j-m)``."""
    _check_p(p)
    from scipy import stats

    j = np.arange(horizon + 1)
    m = np.arange(horizon + 1)[:, None]
    return stats.binom.pmf(m, j[None, :], p)


def counting_equation_residual(alpha: float, table: np.ndarray) -> np.ndarray:
    """Residual of the fractional equation of the Sibuya counting process.

    With ``P_m(t) = P(L(t) = m)`` given as ``table[m, t]`` and ``P_{-1} = 0``:
    ``(I-B)^a P_{m-1}(t) - (-1)^t gen_binom(a-1, t) delta_{m0} - (P_{m-1}(t) - P_m(t))``.
    """
    _check_alpha(alpha)
    n_m, n_t = table.shape
    prev = np.vstack([np.zeros((1, n_t)), table[:-1]])
    w = binomial_weights(alpha, n_t - 1)
    lhs = np.array([np.convolve(w, row)[:n_t] for row in prev])
    lhs[0] -= binomial_weights(alpha - 1.0, n_t - 1)
    return lhs - (prev - table)
