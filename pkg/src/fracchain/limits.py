"""Scaling-limit experiments.

* The rescaled Sibuya counting process ``n^-a L(floor(n t))`` against the
  inverse ``a``-stable subordinator (density ``t^-a W_{-a,1-a}(-x/t^a)``).
* Fractional Bernoulli counts with ``p/q = lam / n^a`` at time
  ``floor(n t)`` against a Monte Carlo fractional Poisson process whose
  waiting times are Mittag-Leffler distributed.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, interpolate, optimize, stats

from .errors import DomainError, NumericRangeError, ValidationError
from .fracops import frac_bernoulli_pmf_table
from .numerics import WRIGHT_MAX_ABS_ARG, _kanter, _log_kanter, _quad, wright_density_kernel
from .output import csv_text, json_text
from .stochastic import PointMass, Sibuya, as_generator, counting_samples, run_chunks

# standard deviation of the limiting Kolmogorov distribution, sqrt(N) * KS
_KS_SD = float(stats.kstwobign.std())


# ---------------------------------------------------------------------------
# inverse stable law

def _check_open_alpha(alpha):
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")


def inverse_stable_density(alpha: float, x: float, t: float = 1.0) -> float:
    """Density at ``x`` of the inverse ``alpha``-stable subordinator at time ``t``."""
    _check_open_alpha(alpha)
    if x < 0.0 or not t > 0.0:
        raise DomainError(f"need x >= 0 and t > 0, got x={x}, t={t}")
    z = x / t**alpha
    if z > WRIGHT_MAX_ABS_ARG:
        raise NumericRangeError(f"x / t^alpha = {z:.6g} exceeds the supported bound {WRIGHT_MAX_ABS_ARG}")
    return wright_density_kernel(alpha, -z) / t**alpha


def inverse_stable_cdf(alpha: float, x, t: float = 1.0):
    """``P(E(t) <= x)`` for the inverse stable subordinator.

    Uses ``P(E(t) <= x) = P(sigma(x) >= t)`` and the Kanter form of the
    stable law: ``1 - (1/pi) int_0^pi exp(-z^{1/(1-a)} A(u)) du`` with
    ``z = x / t^a``.  Vectorized over ``x``.
    """
    _check_open_alpha(alpha)
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(xs < 0.0) or not t > 0.0:
        raise DomainError("need x >= 0 and t > 0")
    z = xs / t**alpha
    if np.unique(z).size > _DIRECT_POINTS:
        out = _cdf_spline(alpha, float(z.max()))(z)
        out = np.clip(out, 0.0, 1.0)
    else:
        out = np.array([_cdf_std(alpha, float(v)) for v in z])
    return out if np.ndim(x) else float(out[0])


# many distinct points: cubic spline through exact values, refined until
# exact values at the interval midpoints agree within 1e-10
_DIRECT_POINTS = 2048
_SPLINE_TOL = 1e-10


def _cdf_spline(alpha, z_max):
    nodes = np.linspace(0.0, z_max, 513)
    values = np.array([_cdf_std(alpha, float(v)) for v in nodes])
    while True:
        spline = interpolate.CubicSpline(nodes, values)
        mids = 0.5 * (nodes[1:] + nodes[:-1])
        exact = np.array([_cdf_std(alpha, float(v)) for v in mids])
        if np.max(np.abs(spline(mids) - exact)) <= _SPLINE_TOL:
            return spline
        merged = np.empty(2 * nodes.size - 1)
        merged[0::2], merged[1::2] = nodes, mids
        values = np.insert(values, np.arange(1, values.size), exact)
        nodes = merged


@functools.lru_cache(maxsize=200_000)
def _cdf_std(alpha, z):
    if z == 0.0:
        return 0.0
    log_big = math.log(z) / (1.0 - alpha)
    if log_big + _log_kanter(alpha, 0.0) >= 0.0:
        big = math.exp(log_big)

        def f(u):
            return math.exp(-big * _kanter(alpha, u))

        val = _quad(f, 0.0, math.pi, 1e-12, epsabs=1e-15)
        return min(max(1.0 - val / math.pi, 0.0), 1.0)

    # Small cdf: integrate 1 - exp(-z^{1/(1-a)} A(u)) itself.  It rises to 1
    # only in a thin layer at u = pi, so substitute u = pi - e^s (A evaluated
    # from the distance to pi), start where the integrand is below e^-69 and
    # split where it is about 1.
    def log_excess(s):
        v = math.exp(s)
        if v >= math.pi:
            return log_big + _log_kanter(alpha, 0.0)
        sa = math.sin(alpha * (math.pi - v))
        return log_big + math.log(sa / math.sin(v)) / (1.0 - alpha) + math.log(
            math.sin((1.0 - alpha) * (math.pi - v)) / sa
        )

    s_top = math.log(math.pi)
    s_floor = s_top - 740.0
    if log_excess(s_floor) < -69.0:
        return 0.0
    s_hi = s_top
    if log_big + _log_kanter(alpha, 0.0) < -69.0:
        s_hi = optimize.brentq(lambda s: log_excess(s) + 69.0, s_floor, s_top, xtol=1e-13)

    def h(s):
        return -math.expm1(-math.exp(min(log_excess(s), 700.0))) * math.exp(s)

    cuts = [s_floor]
    if log_excess(s_floor) > 0.0:
        cuts.append(optimize.brentq(log_excess, s_floor, s_hi, xtol=1e-13))
    cuts.append(s_hi)
    val = sum(_quad(h, a, b, 1e-12, epsabs=1e-300, check_rel=1e-8, check_abs=1e-16) for a, b in zip(cuts, cuts[1:]))
    return min(max(val / math.pi, 0.0), 1.0)


def inverse_stable_cdf_by_density(alpha: float, x: float, t: float = 1.0, rtol: float = 1e-8) -> float:
    """Same cdf by adaptive quadrature of :func:`inverse_stable_density` (slow; a cross-check)."""
    _check_open_alpha(alpha)
    val, _ = integrate.quad(lambda y: inverse_stable_density(alpha, y, t), 0.0, x, epsabs=0.0, epsrel=rtol, limit=200)
    return val


# ---------------------------------------------------------------------------
# Kolmogorov-Smirnov distance

def ks_statistic(samples, cdf, cdf_left=None) -> float:
    """``sup_x |F_N(x) - F(x)|`` evaluated at the jump points of the empirical cdf.

    ``cdf_left(x)`` is the left limit ``F(x-)``; it defaults to ``cdf``
    (continuous targets) and matters only for targets with atoms.
    """
    x = np.sort(np.asarray(samples, dtype=float).ravel())
    if x.size == 0:
        raise ValidationError("need at least one sample")
    n = x.size
    values, first = np.unique(x, return_index=True)
    upto = np.append(first[1:], n) / n  # F_N(v)
    before = first / n  # F_N(v-)
    f = np.asarray(cdf(values), dtype=float)
    f_left = f if cdf_left is None else np.asarray(cdf_left(values), dtype=float)
    return float(max(np.max(upto - f), np.max(f_left - before), 0.0))


# ---------------------------------------------------------------------------
# reports

@dataclass(frozen=True)
class DistanceReport:
    """Per-scale distances with Monte Carlo standard errors and the run parameters."""

    metric: str
    n: tuple
    distance: tuple
    mc_stderr: tuple
    params: dict = field(default_factory=dict)
    extras: dict = field(default_factory=dict)

    def __post_init__(self):
        if not len(self.n) == len(self.distance) == len(self.mc_stderr):
            raise ValidationError("n, distance and mc_stderr must have equal lengths")
        if any(not 0.0 <= d <= 1.0 for d in self.distance):
            raise ValidationError("distances must lie in [0, 1]")

    def nonincreasing(self, k_sigma: float = 2.0) -> bool:
        """Each distance is at most the previous one plus ``k_sigma`` combined standard errors."""
        d, s = self.distance, self.mc_stderr
        return all(d[i + 1] <= d[i] + k_sigma * math.hypot(s[i], s[i + 1]) for i in range(len(d) - 1))

    def rows(self):
        return [(n, d, s) for n, d, s in zip(self.n, self.distance, self.mc_stderr)]

    def to_csv(self) -> str:
        return csv_text(f"distance-report metric={self.metric}", ("n", "distance", "mc_stderr"), self.rows())

    def to_json(self) -> str:
        return json_text(
            {
                "metric": self.metric,
                "params": self.params,
                "results": [{"n": n, "distance": d, "mc_stderr": s} for n, d, s in self.rows()],
                "extras": self.extras,
            }
        )


def _check_grid(n_grid):
    grid = tuple(int(n) for n in n_grid)
    if not grid or any(n < 1 for n in grid) or any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValidationError(f"n_grid must be strictly increasing positive integers, got {list(n_grid)}")
    return grid


# ---------------------------------------------------------------------------
# Sibuya counting process -> inverse stable subordinator

MIN_REPLICAS = 10_000


@dataclass(frozen=True)
class ScalingExperiment:
    alpha: float
    t: float
    n_grid: tuple
    replicas: int
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.alpha <= 1.0:
            raise DomainError(f"alpha must lie in (0, 1], got {self.alpha}")
        if not self.t > 0.0:
            raise DomainError(f"t must be positive, got {self.t}")
        object.__setattr__(self, "n_grid", _check_grid(self.n_grid))
        if self.replicas < MIN_REPLICAS:
            raise ValidationError(f"replicas must be at least {MIN_REPLICAS} for a distributional distance")


def rescaled_counting_samples(alpha: float, n: int, t: float, replicas: int, seed: int,
                              stream_id: int = 0, threads: int = 1) -> np.ndarray:
    """Draws of ``n^-alpha L(floor(n t))`` for the Sibuya counting process."""
    step = PointMass(1) if alpha == 1.0 else Sibuya(alpha)
    time = int(math.floor(n * t))

    def worker(gen, size):
        return counting_samples(gen, step, [time], size)[:, 0]

    counts = run_chunks(worker, replicas, seed, stream_id, threads)
    return counts / float(n) ** alpha


def sibuya_limit_experiment(exp: ScalingExperiment, threads: int = 1) -> DistanceReport:
    """KS distance between ``n^-a L(floor(n t))`` and the inverse stable law, per ``n``.

    Scale ``n_grid[k]`` uses random stream ``k``.  For ``a = 1`` the target
    is the point mass at ``t``.
    """
    dists, errs, means = [], [], []
    for k, n in enumerate(exp.n_grid):
        x = rescaled_counting_samples(exp.alpha, n, exp.t, exp.replicas, exp.seed, k, threads)
        means.append(float(x.mean()))
        if exp.alpha == 1.0:
            d = ks_statistic(x, lambda v: (v >= exp.t).astype(float), lambda v: (v > exp.t).astype(float))
        else:
            d = ks_statistic(x, lambda v: inverse_stable_cdf(exp.alpha, v, exp.t))
        dists.append(d)
        errs.append(_KS_SD / math.sqrt(exp.replicas))
    params = {"target": "inverse-stable", "alpha": exp.alpha, "t": exp.t, "replicas": exp.replicas, "seed": exp.seed}
    return DistanceReport("ks", exp.n_grid, tuple(dists), tuple(errs), params, {"sample_mean": means})


def limit_mean(alpha: float, t: float = 1.0) -> float:
    """``E E(t) = t^a / Gamma(1 + a)`` for the inverse stable subordinator."""
    return t**alpha / math.gamma(1.0 + alpha)


# ---------------------------------------------------------------------------
# Mittag-Leffler waiting times and the fractional Poisson reference

def ml_waiting_time_sample(rng, alpha: float, lam: float, size=None):
    """Mittag-Leffler waiting times: ``P(J > t) = E_a(-lam t^a)``.

    ``J = lam^{-1/a} W^{1/a} S_a`` with ``W`` unit exponential and ``S_a``
    a positive ``a``-stable variate (Laplace transform ``exp(-s^a)``) from
    Kanter's representation ``(A(U) / W')^{(1-a)/a}``.
    """
    if not 0.0 < alpha <= 1.0:
        raise DomainError(f"alpha must lie in (0, 1], got {alpha}")
    if not lam > 0.0:
        raise DomainError(f"lambda must be positive, got {lam}")
    gen = as_generator(rng)
    shape = () if size is None else size
    e = gen.standard_exponential(shape)
    if alpha == 1.0:
        out = e / lam
    else:
        u = np.pi * (1.0 - gen.random(shape))  # (0, pi]
        w = gen.standard_exponential(shape)
        s = (_kanter(alpha, np.minimum(u, np.pi * (1.0 - 1e-16))) / w) ** ((1.0 - alpha) / alpha)
        out = lam ** (-1.0 / alpha) * e ** (1.0 / alpha) * s
    return float(out) if size is None else out


def frac_poisson_counts(rng, alpha: float, lam: float, t: float, size: int) -> np.ndarray:
    """Counts at time ``t`` of the renewal process with Mittag-Leffler waiting times."""
    gen = as_generator(rng)
    clock = np.zeros(size)
    counts = np.zeros(size, dtype=np.int64)
    active = np.arange(size)
    while active.size:
        clock[active] += ml_waiting_time_sample(gen, alpha, lam, active.size)
        arrived = clock[active] <= t
        active = active[arrived]
        counts[active] += 1
    return counts


def _exact_scaled_pmf(kind, alpha, lam, n, t, tol=1e-15):
    lam_n = lam / float(n) ** alpha
    if lam_n >= 1.0:
        raise ValidationError(
            f"lambda / n^alpha = {lam_n:.6g} >= 1 is not a valid scaled rate; use a larger n"
        )
    p = lam_n / (1.0 + lam_n)
    time = int(math.floor(n * t))
    m_max = 16
    while True:
        m_max = min(m_max, time)
        col = frac_bernoulli_pmf_table(kind, alpha, p, time, m_max)[:, time]
        if m_max == time or 1.0 - col.sum() < tol:
            return col
        m_max *= 2


def frac_poisson_limit_experiment(kind: str, alpha: float, lam: float, t: float, n_grid, replicas: int,
                                  seed: int = 0, threads: int = 1) -> DistanceReport:
    """Total-variation distance between exact fractional Bernoulli counts and a fractional Poisson reference.

    For each ``n`` the count ``N(floor(n t))`` of the kind-A/B fractional
    Bernoulli process with ``p/q = lam / n^alpha`` is computed exactly from
    its generating function; the reference law of the fractional Poisson
    count at time ``t`` is estimated from ``replicas`` simulated renewal
    paths (one shared reference sample).  The standard error reported is
    ``(1/2) sum_m sqrt(p_m (1 - p_m) / N)``.
    """
    grid = _check_grid(n_grid)
    if not lam > 0.0 or not t > 0.0:
        raise DomainError("lambda and t must be positive")
    ref = run_chunks(lambda gen, size: frac_poisson_counts(gen, alpha, lam, t, size), replicas, seed, 0, threads)
    ref_pmf = np.bincount(ref) / ref.size
    ref_mean = float(ref.mean())
    ref_se = float(ref.std(ddof=1) / math.sqrt(ref.size))
    dists, errs, exact_means = [], [], []
    for n in grid:
        exact = _exact_scaled_pmf(kind, alpha, lam, n, t)
        size = max(exact.size, ref_pmf.size)
        a = np.zeros(size)
        b = np.zeros(size)
        a[: exact.size] = exact
        b[: ref_pmf.size] = ref_pmf
        dists.append(min(0.5 * float(np.abs(a - b).sum()), 1.0))
        errs.append(0.5 * float(np.sqrt(b * (1.0 - b) / ref.size).sum()))
        exact_means.append(float(np.arange(exact.size) @ exact))
    params = {"target": "frac-poisson", "kind": str(kind).upper(), "alpha": alpha, "lambda": lam, "t": t,
              "replicas": replicas, "seed": seed}
    extras = {"reference_mean": ref_mean, "reference_mean_stderr": ref_se, "exact_mean": exact_means,
              "limit_mean": lam * limit_mean(alpha, t)}
    return DistanceReport("tv", grid, tuple(dists), tuple(errs), params, extras)
