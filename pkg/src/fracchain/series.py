"""Truncated formal power series.

A :class:`TruncatedPowerSeries` holds the coefficients of ``u^0 .. u^H``.
All operations are exact up to the horizon ``H`` (no truncation error
enters a coefficient of index ``<= H``), which is what makes these series
usable as oracles for probability mass functions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SingularityError, ValidationError
from .numerics import gen_binom_seq


@dataclass(frozen=True, eq=False)
class TruncatedPowerSeries:
    """Coefficients of ``sum_t c_t u^t`` for ``t = 0..horizon``."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float)
        if c.ndim != 1 or c.size == 0:
            raise ValidationError("coefficients must be a nonempty 1-d vector")
        if not np.all(np.isfinite(c)):
            raise ValidationError("coefficients must be finite")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def horizon(self) -> int:
        return self.coeffs.size - 1

    @classmethod
    def from_coeffs(cls, coeffs, horizon: int) -> "TruncatedPowerSeries":
        """Build a series of the given horizon, zero padding or truncating."""
        c = np.zeros(horizon + 1)
        src = np.asarray(coeffs, dtype=float)[: horizon + 1]
        c[: src.size] = src
        return cls(c)

    @classmethod
    def constant(cls, value: float, horizon: int) -> "TruncatedPowerSeries":
        return cls.from_coeffs([value], horizon)

    @classmethod
    def monomial(cls, power: int, horizon: int, scale: float = 1.0) -> "TruncatedPowerSeries":
        c = np.zeros(horizon + 1)
        if power <= horizon:
            c[power] = scale
        return cls(c)

    def __getitem__(self, t):
        return self.coeffs[t]

    def __len__(self):
        return self.coeffs.size

    def _check(self, other):
        if not isinstance(other, TruncatedPowerSeries):
            return TruncatedPowerSeries.constant(float(other), self.horizon)
        if other.horizon != self.horizon:
            raise ValidationError(f"horizon mismatch: {self.horizon} != {other.horizon}")
        return other

    def __add__(self, other):
        other = self._check(other)
        return TruncatedPowerSeries(self.coeffs + other.coeffs)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._check(other)
        return TruncatedPowerSeries(self.coeffs - other.coeffs)

    def __rsub__(self, other):
        other = self._check(other)
        return TruncatedPowerSeries(other.coeffs - self.coeffs)

    def __neg__(self):
        return TruncatedPowerSeries(-self.coeffs)

    def __mul__(self, other):
        if isinstance(other, TruncatedPowerSeries):
            return ps_mul(self, other)
        return TruncatedPowerSeries(self.coeffs * float(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, TruncatedPowerSeries):
            return ps_mul(self, ps_inv(other))
        return TruncatedPowerSeries(self.coeffs / float(other))

    def __pow__(self, n: int):
        n = int(n)
        if n < 0:
            return ps_inv(self) ** (-n)
        result = TruncatedPowerSeries.constant(1.0, self.horizon)
        base = self
        while n:
            if n & 1:
                result = ps_mul(result, base)
            n >>= 1
            if n:
                base = ps_mul(base, base)
        return result

    def shift(self, k: int = 1) -> "TruncatedPowerSeries":
        """Multiply by ``u^k``."""
        c = np.zeros_like(self.coeffs)
        if k <= self.horizon:
            c[k:] = self.coeffs[: self.horizon + 1 - k]
        return TruncatedPowerSeries(c)

    def __repr__(self):
        head = np.array2string(self.coeffs[:6], precision=6)
        return f"TruncatedPowerSeries(horizon={self.horizon}, coeffs={head}{'...' if self.horizon > 5 else ''})"


def ps_mul(a: TruncatedPowerSeries, b: TruncatedPowerSeries) -> TruncatedPowerSeries:
    """Cauchy product truncated at the common horizon."""
    if a.horizon != b.horizon:
        raise ValidationError(f"horizon mismatch: {a.horizon} != {b.horizon}")
    n = a.horizon + 1
    return TruncatedPowerSeries(np.convolve(a.coeffs, b.coeffs)[:n])


def ps_inv(a: TruncatedPowerSeries) -> TruncatedPowerSeries:
    """Multiplicative inverse by the recursion ``b_t = -(1/a_0) sum_{k=1}^t a_k b_{t-k}``."""
    c = a.coeffs
    if c[0] == 0.0:
        raise SingularityError("cannot invert a series with zero constant term")
    n = c.size
    b = np.zeros(n)
    b[0] = 1.0 / c[0]
    for t in range(1, n):
        # a_1..a_t against b_{t-1}..b_0
        b[t] = -np.dot(c[1 : t + 1], b[t - 1 :: -1]) / c[0]
    return TruncatedPowerSeries(b)


def ps_binomial(alpha: float, horizon: int) -> TruncatedPowerSeries:
    """Series of ``(1 - u)^alpha``: coefficient ``t`` is ``(-1)^t gen_binom(alpha, t)``."""
    if horizon < 0:
        raise ValidationError(f"horizon must be nonnegative, got {horizon}")
    g = gen_binom_seq(alpha, horizon)
    g[1::2] *= -1.0
    return TruncatedPowerSeries(g)


def counting_pmf_via_gf(step_pmf, m: int, horizon: int) -> np.ndarray:
    """``P(C(t) = m)`` for ``t = 0..horizon`` for the renewal counting process.

    Extracts coefficients of ``(1/(1-u)) G(u)^m (1 - G(u))`` where ``G`` is
    the generating function of the step law.  ``step_pmf`` is a
    :class:`~fracchain.stochastic.DiscretePmf` or a mass vector indexed from 0.
    """
    G = _step_series(step_pmf, horizon)
    if m < 0:
        raise ValidationError(f"m must be nonnegative, got {m}")
    one = TruncatedPowerSeries.constant(1.0, horizon)
    survival = ps_mul(ps_inv(one - one.shift(1)), one - G)
    return ps_mul(G**m, survival).coeffs.copy()


def counting_pmf_table_via_gf(step_pmf, horizon: int, m_max: int | None = None) -> np.ndarray:
    """Matrix ``P[m, t] = P(C(t) = m)`` for ``m = 0..m_max`` and ``t = 0..horizon``.

    Same generating function as :func:`counting_pmf_via_gf`, iterating the
    power of ``G`` instead of recomputing it for every ``m``.
    """
    if m_max is None:
        m_max = horizon
    G = _step_series(step_pmf, horizon)
    one = TruncatedPowerSeries.constant(1.0, horizon)
    cur = ps_mul(ps_inv(one - one.shift(1)), one - G)
    out = np.empty((m_max + 1, horizon + 1))
    for m in range(m_max + 1):
        out[m] = cur.coeffs
        cur = ps_mul(cur, G)
    return out


def _step_series(step_pmf, horizon: int) -> TruncatedPowerSeries:
    mass = np.asarray(getattr(step_pmf, "mass", step_pmf), dtype=float)
    if mass.size and mass[0] != 0.0:
        raise ValidationError("step law must be supported on {1, 2, ...} (mass at 0 found)")
    if np.any(mass < 0.0):
        raise ValidationError("step masses must be nonnegative")
    return TruncatedPowerSeries.from_coeffs(mass, horizon)
