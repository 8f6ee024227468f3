"""Step distributions, samplers and discrete renewal counting processes.

Covers the Sibuya law, geometric and compound (shifted) geometric sums
(the discrete Mittag-Leffler laws DML_A / DML_B), renewal paths and the
closed forms for the Sibuya counting process.

Samplers take an explicit random source: an :class:`RngStream`, a
:class:`numpy.random.Generator` or an integer seed.  There is no hidden
global state.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from typing import Callable

import gmpy2
import numpy as np
from scipy import special

from .errors import DomainError, ValidationError
from .numerics import gen_binom, rising_binom_seq

# Sibuya draws above this value are reported as this value (float-exact).
ZMAX = 2**53
_SURVIVAL_PRODUCT_CUTOFF = 64
_HEAD = 1024


# ---------------------------------------------------------------------------
# random streams

@dataclass(frozen=True)
class RngStream:
    """Reproducible random stream identified by ``(seed, stream_id)``.

    Distinct pairs give statistically independent streams (numpy
    ``SeedSequence`` spawn keys).
    """

    seed: int
    stream_id: int = 0

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(int(self.seed), spawn_key=(int(self.stream_id),))
        return np.random.Generator(np.random.PCG64(ss))


def as_generator(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    if isinstance(rng, RngStream):
        return rng.generator()
    if isinstance(rng, (int, np.integer)):
        return RngStream(int(rng)).generator()
    raise ValidationError(f"expected RngStream, numpy Generator or int seed, got {type(rng).__name__}")


# ---------------------------------------------------------------------------
# pmf container

@dataclass(frozen=True, eq=False)
class DiscretePmf:
    """Mass on ``{0, ..., K}`` plus an upper bound on the mass beyond ``K``."""

    mass: np.ndarray
    tail_bound: float = 0.0

    def __post_init__(self):
        m = np.array(self.mass, dtype=float)
        if m.ndim != 1 or m.size == 0:
            raise ValidationError("mass must be a nonempty 1-d vector")
        if np.any(m < 0.0) or not np.all(np.isfinite(m)):
            raise ValidationError("masses must be finite and nonnegative")
        if self.tail_bound < 0.0:
            raise ValidationError("tail_bound must be nonnegative")
        total = m.sum() + self.tail_bound
        if abs(total - 1.0) > 1e-12:
            raise ValidationError(f"mass plus tail bound must equal 1 within 1e-12 (got {total!r})")
        m.setflags(write=False)
        object.__setattr__(self, "mass", m)

    @property
    def support_max(self) -> int:
        return self.mass.size - 1

    def survival(self) -> np.ndarray:
        """``P(X > k)`` for ``k = 0..K`` (includes the tail bound)."""
        return np.maximum(1.0 - np.cumsum(self.mass), 0.0)


# ---------------------------------------------------------------------------
# Sibuya law

def _check_alpha(alpha, allow_one=True):
    if not (0.0 < alpha < 1.0 or (allow_one and alpha == 1.0)):
        raise DomainError(f"alpha must lie in (0, 1], got {alpha}")


def sibuya_pmf(alpha: float, k: int) -> float:
    """``P(Z = k) = (1-a)(1-a/2)...(1-a/(k-1)) a/k`` for ``k >= 1``."""
    _check_alpha(alpha)
    if k < 1:
        raise DomainError(f"Sibuya support is k >= 1, got {k}")
    out = alpha / k
    for j in range(1, k):
        out *= 1.0 - alpha / j
    return out


def sibuya_survival(alpha: float, k) -> float:
    """``P(Z > k) = prod_{j<=k} (1 - a/j)``.

    Direct product for ``k <= 64``; above that the Gamma-ratio closed form
    ``Gamma(k+1-a) / (Gamma(k+1) Gamma(1-a))`` in Pochhammer form.
    """
    _check_alpha(alpha)
    if k < 0:
        raise DomainError(f"k must be nonnegative, got {k}")
    if alpha == 1.0:
        return 1.0 if k == 0 else 0.0
    if k <= _SURVIVAL_PRODUCT_CUTOFF:
        out = 1.0
        for j in range(1, int(k) + 1):
            out *= 1.0 - alpha / j
        return out
    return float(_survival_closed(alpha, float(k)))


def _survival_closed(alpha, k):
    return special.poch(np.asarray(k, dtype=float) + 1.0, -alpha) / special.gamma(1.0 - alpha)


def sibuya_pmf_vector(alpha: float, kmax: int) -> np.ndarray:
    """Masses ``P(Z = k)`` for ``k = 0..kmax`` (index 0 holds 0)."""
    _check_alpha(alpha)
    s = sibuya_survival_vector(alpha, kmax)
    out = np.zeros(kmax + 1)
    k = np.arange(1, kmax + 1)
    out[1:] = s[:-1] * alpha / k
    return out


def sibuya_survival_vector(alpha: float, kmax: int) -> np.ndarray:
    """``P(Z > k)`` for ``k = 0..kmax`` by the product recursion."""
    _check_alpha(alpha)
    j = np.arange(1, kmax + 1, dtype=float)
    out = np.empty(kmax + 1)
    out[0] = 1.0
    out[1:] = np.cumprod(1.0 - alpha / j)
    return out


@functools.lru_cache(maxsize=64)
def _head_survival(alpha: float) -> np.ndarray:
    s = sibuya_survival_vector(alpha, _HEAD)
    s.setflags(write=False)
    return s


def sibuya_sample(rng, alpha: float, size=None, cap: int | None = None):
    """Draw Sibuya(alpha) variates by inverse-survival search.

    For ``U`` uniform on ``(0, 1]`` returns ``min{k >= 1 : P(Z > k) <= U}``.
    Survival values up to ``k = 1024`` are tabulated (product recursion);
    beyond that the search doubles an upper bracket and bisects on the
    closed-form survival, ``O(log Z)`` evaluations.  Values above
    :data:`ZMAX` are reported as ``ZMAX``.

    With ``cap`` set, draws above ``cap`` are reported as ``cap + 1``
    (the same uniforms give ``min(Z, cap + 1)``, skipping the tail search).
    """
    _check_alpha(alpha)
    gen = as_generator(rng)
    shape = () if size is None else size
    if alpha == 1.0:
        out = np.ones(shape, dtype=np.int64)
        return int(out) if size is None else out
    u = 1.0 - gen.random(shape)
    flat = np.atleast_1d(u).ravel()
    head = _head_survival(alpha)
    # first k in 1..HEAD with S(k) <= u; HEAD + 1 signals "beyond the table"
    k = np.searchsorted(-head[1:], -flat, side="left") + 1
    if cap is not None and cap < _HEAD:
        k = np.minimum(k, cap + 1)
    far = np.nonzero(k > _HEAD)[0]
    if far.size and cap is not None:
        # beyond the cap iff P(Z > cap) > u
        over = _survival_closed(alpha, float(cap)) > flat[far]
        k[far[over]] = cap + 1
        far = far[~over]
    if far.size:
        k[far] = _search_tail(alpha, flat[far])
    k = k.astype(np.int64)
    if cap is not None:
        k = np.minimum(k, cap + 1)
    if size is None:
        return int(k[0])
    return k.reshape(shape)


def _search_tail(alpha, u):
    lo = np.full(u.shape, float(_HEAD))
    hi = 2.0 * lo
    while True:
        s_hi = _survival_closed(alpha, hi)
        grow = (s_hi > u) & (hi < ZMAX)
        if not grow.any():
            break
        lo = np.where(grow, hi, lo)
        hi = np.where(grow, np.minimum(2.0 * hi, ZMAX), hi)
    capped = _survival_closed(alpha, hi) > u
    while True:
        gap = hi - lo > 1.0
        if not gap.any():
            break
        mid = np.floor((lo + hi) / 2.0)
        below = _survival_closed(alpha, mid) <= u
        hi = np.where(gap & below, mid, hi)
        lo = np.where(gap & ~below, mid, lo)
    hi[capped] = ZMAX
    return hi


# ---------------------------------------------------------------------------
# step distributions (the Z of the random walk)

class StepDistribution:
    """Law of a positive integer step ``Z``."""

    def pmf_vector(self, kmax: int) -> np.ndarray:
        raise NotImplementedError

    def survival_vector(self, kmax: int) -> np.ndarray:
        return np.maximum(1.0 - np.cumsum(self.pmf_vector(kmax)), 0.0)

    def sample(self, rng, size=None):
        raise NotImplementedError

    def sample_capped(self, rng, size, cap: int) -> np.ndarray:
        """Draws of ``min(Z, cap + 1)``; same stream use as :meth:`sample`."""
        return np.minimum(np.asarray(self.sample(rng, size), dtype=np.int64), cap + 1)

    def to_pmf(self, kmax: int) -> DiscretePmf:
        mass = self.pmf_vector(kmax)
        return DiscretePmf(mass, float(self.survival_vector(kmax)[-1]))

    def to_json(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class Sibuya(StepDistribution):
    alpha: float

    def __post_init__(self):
        _check_alpha(self.alpha)

    def pmf_vector(self, kmax):
        return sibuya_pmf_vector(self.alpha, kmax)

    def survival_vector(self, kmax):
        return sibuya_survival_vector(self.alpha, kmax)

    def sample(self, rng, size=None):
        return sibuya_sample(rng, self.alpha, size)

    def sample_capped(self, rng, size, cap):
        return sibuya_sample(rng, self.alpha, size, cap)

    def to_json(self):
        return {"alpha": self.alpha}


@dataclass(frozen=True)
class PointMass(StepDistribution):
    """``Z = k`` almost surely (``k = 1`` recovers the plain Markov clock)."""

    k: int = 1

    def __post_init__(self):
        if self.k < 1:
            raise DomainError(f"point mass must sit on a positive integer, got {self.k}")

    def pmf_vector(self, kmax):
        out = np.zeros(kmax + 1)
        if self.k <= kmax:
            out[self.k] = 1.0
        return out

    def survival_vector(self, kmax):
        return (np.arange(kmax + 1) < self.k).astype(float)

    def sample(self, rng, size=None):
        if size is None:
            return self.k
        return np.full(size, self.k, dtype=np.int64)

    def to_json(self):
        return {"step_pmf": [0.0] * self.k + [1.0]}


@dataclass(frozen=True, eq=False)
class FiniteStep(StepDistribution):
    """Step law given by a finite mass vector on ``{1, ..., K}`` (index 0 must be 0)."""

    mass: np.ndarray = field(default_factory=lambda: np.array([0.0, 1.0]))

    def __post_init__(self):
        pmf = DiscretePmf(self.mass)
        if pmf.mass[0] != 0.0:
            raise ValidationError("step law must put no mass at 0")
        object.__setattr__(self, "mass", pmf.mass)
        cdf = np.cumsum(pmf.mass)
        cdf[-1] = 1.0
        object.__setattr__(self, "_cdf", cdf)

    def __eq__(self, other):
        return isinstance(other, FiniteStep) and np.array_equal(self.mass, other.mass)

    def __hash__(self):
        return hash(self.mass.tobytes())

    def pmf_vector(self, kmax):
        out = np.zeros(kmax + 1)
        n = min(kmax + 1, self.mass.size)
        out[:n] = self.mass[:n]
        return out

    def sample(self, rng, size=None):
        gen = as_generator(rng)
        u = gen.random(() if size is None else size)
        k = np.searchsorted(self._cdf, u, side="right").astype(np.int64)
        return int(k) if size is None else k

    def to_json(self):
        return {"step_pmf": self.mass.tolist()}


def step_from_json(doc: dict) -> StepDistribution:
    """Build a step law from ``{"alpha": a}`` or ``{"step_pmf": [...]}``."""
    if doc.get("step_pmf") is not None:
        mass = np.asarray(doc["step_pmf"], dtype=float)
        nz = np.nonzero(mass)[0]
        if nz.size == 1 and mass[nz[0]] == 1.0:
            return PointMass(int(nz[0]))
        return FiniteStep(mass)
    if doc.get("alpha") is not None:
        alpha = float(doc["alpha"])
        return PointMass(1) if alpha == 1.0 else Sibuya(alpha)
    raise ValidationError("step law needs either 'alpha' or 'step_pmf'")


# ---------------------------------------------------------------------------
# geometric and compound geometric laws

def geometric_pmf_vector(p: float, kmax: int) -> np.ndarray:
    """``P(M = k) = p q^{k-1}`` for ``k = 0..kmax`` (index 0 holds 0)."""
    _check_p(p)
    out = np.zeros(kmax + 1)
    k = np.arange(1, kmax + 1)
    out[1:] = p * (1.0 - p) ** (k - 1)
    return out


def _check_p(p):
    if not 0.0 < p <= 1.0:
        raise DomainError(f"geometric parameter p must lie in (0, 1], got {p}")


def _check_kind(kind):
    kind = str(kind).upper()
    if kind not in ("A", "B"):
        raise ValidationError(f"kind must be 'A' or 'B', got {kind!r}")
    return kind


def compound_geometric_sample(rng, kind: str, p, step: StepDistribution, size=None):
    """Sample ``sum_{k<=M} Z_k`` (kind A) or ``1 + sum_{k<M} Z_k`` (kind B).

    ``M`` is geometric on ``{1, 2, ...}`` with success probability ``p``,
    which may be an array broadcast against ``size``.
    """
    kind = _check_kind(kind)
    gen = as_generator(rng)
    shape = () if size is None else size
    p_arr = np.broadcast_to(np.asarray(p, dtype=float), shape)
    if np.any((p_arr <= 0.0) | (p_arr > 1.0)):
        raise DomainError("geometric parameter p must lie in (0, 1]")
    m = np.asarray(gen.geometric(p_arr), dtype=np.int64).ravel()
    n_steps = m if kind == "A" else m - 1
    total = int(n_steps.sum())
    owner = np.repeat(np.arange(m.size), n_steps)
    z = np.asarray(step.sample(gen, total), dtype=float)
    sums = np.bincount(owner, weights=z, minlength=m.size)
    out = (sums if kind == "A" else 1.0 + sums).astype(np.int64)
    if size is None:
        return int(out[0])
    return out.reshape(shape)


def dml_sample(rng, kind: str, p: float, alpha: float, size=None):
    """Discrete Mittag-Leffler sampler: compound (shifted) geometric sum of Sibuya steps."""
    _check_p(p)
    _check_alpha(alpha)
    step = PointMass(1) if alpha == 1.0 else Sibuya(alpha)
    return compound_geometric_sample(rng, kind, p, step, size)


def compound_geometric_pmf(kind: str, p: float, step: StepDistribution, horizon: int) -> DiscretePmf:
    """Exact law of the compound (shifted) geometric sum on ``0..horizon``.

    Conditions on ``M`` and accumulates convolution powers of the step law;
    since ``Z >= 1`` only ``M <= horizon + 1`` can reach the horizon, so the
    sum is finite and exact.
    """
    kind = _check_kind(kind)
    _check_p(p)
    q = 1.0 - p
    z = step.pmf_vector(horizon)
    n = horizon + 1
    power = np.zeros(n)
    power[0] = 1.0  # Z^{*0}
    out = np.zeros(n)
    weight = p
    for m in range(1, n + 1):
        if kind == "A":
            power = np.convolve(power, z)[:n]
            out += weight * power
        else:
            out[1:] += weight * power[:-1]
            power = np.convolve(power, z)[:n]
        weight *= q
        if weight == 0.0:
            break
    tail = max(1.0 - out.sum(), 0.0)
    return DiscretePmf(out, tail)


def dml_pmf(kind: str, p: float, alpha: float, horizon: int) -> DiscretePmf:
    _check_alpha(alpha)
    step = PointMass(1) if alpha == 1.0 else Sibuya(alpha)
    return compound_geometric_pmf(kind, p, step, horizon)


def dml_generating_function(kind: str, p: float, alpha: float, u):
    """Closed-form ``E u^J`` for DML_A / DML_B."""
    kind = _check_kind(kind)
    u = np.asarray(u, dtype=float)
    w = (1.0 - u) ** alpha
    q = 1.0 - p
    if kind == "A":
        return p * (1.0 - w) / (p + q * w)
    return p * u / (p + q * w)


# ---------------------------------------------------------------------------
# renewal paths and counting processes

@dataclass(frozen=True, eq=False)
class RenewalPath:
    """Renewal times ``T_0 = 0 < T_1 < ...``; the first overshoot of the horizon is kept."""

    renewal_times: np.ndarray
    horizon: int

    def count(self, t: int) -> int:
        """``C(t) = max{n : T_n <= t}``."""
        return int(np.searchsorted(self.renewal_times, t, side="right")) - 1


def renewal_path(rng, step_sampler: Callable, horizon: int) -> RenewalPath:
    """Accumulate i.i.d. steps until the partial sum first exceeds ``horizon``.

    ``step_sampler(gen)`` must return one positive integer; a
    :class:`StepDistribution` is accepted too.
    """
    if horizon < 0:
        raise ValidationError(f"horizon must be nonnegative, got {horizon}")
    gen = as_generator(rng)
    draw = step_sampler.sample if isinstance(step_sampler, StepDistribution) else step_sampler
    times = [0]
    while times[-1] <= horizon:
        z = int(draw(gen))
        if z < 1:
            raise ValidationError(f"steps must be positive integers, got {z}")
        times.append(times[-1] + z)
    return RenewalPath(np.asarray(times, dtype=np.int64), horizon)


def counting_samples(rng, step_sampler: Callable, times, size: int) -> np.ndarray:
    """Vectorized ``C(t)`` for ``size`` independent renewal paths.

    ``step_sampler(gen, n)`` returns ``n`` positive integer steps; a
    :class:`StepDistribution` is accepted too.  Returns an integer array
    of shape ``(size, len(times))``.
    """
    gen = as_generator(rng)
    times = np.atleast_1d(np.asarray(times, dtype=np.int64))
    if np.any(times < 0):
        raise ValidationError("times must be nonnegative")
    t_max = int(times.max())
    if isinstance(step_sampler, StepDistribution):
        def draw(g, n):
            return step_sampler.sample_capped(g, n, t_max)
    else:
        draw = step_sampler
    pos = np.zeros(size, dtype=np.int64)
    active = np.arange(size)
    dense = (t_max + 1) * size <= 50_000_000
    if dense:
        hits = np.zeros((size, t_max + 1), dtype=np.int32)
    else:
        counts = np.zeros((size, times.size), dtype=np.int64)
    while active.size:
        z = np.asarray(draw(gen, active.size), dtype=np.int64)
        # overshoots only need to be known as overshoots
        new = np.minimum(pos[active] + z, t_max + 1)
        pos[active] = new
        keep = new <= t_max
        active, new = active[keep], new[keep]
        if dense:
            hits[active, new] += 1
        else:
            counts[active] += new[:, None] <= times[None, :]
    if dense:
        return np.cumsum(hits, axis=1)[:, times].astype(np.int64)
    return counts


# ---------------------------------------------------------------------------
# Sibuya counting process closed forms

def _mpfr_context(t_max):
    # terms of the alternating sum reach ~e^{alpha(t+1)} 2^t; keep 60+ spare bits
    return gmpy2.context(gmpy2.get_context(), precision=128 + 3 * int(t_max))


def sibuya_counting_pmf(alpha: float, t: int, m: int) -> float:
    """``P(L(t) = m) = sum_{r=0}^m (-1)^r C(m, r) gen_binom(t - a r - a, t)``.

    The alternating sum cancels catastrophically in double precision, so
    it is evaluated in MPFR arithmetic with precision growing with ``t``
    and ``m``; the result is then rounded to double.
    """
    _check_alpha(alpha)
    if t < 0 or m < 0:
        raise DomainError("t and m must be nonnegative")
    with _mpfr_context(max(t, m)):
        a = gmpy2.mpfr(alpha)
        total = gmpy2.mpfr(0)
        for r in range(m + 1):
            c = a * (r + 1)
            b = gmpy2.mpfr(1)
            for i in range(1, t + 1):
                b *= 1 - c / i
            term = math.comb(m, r) * b
            total = total - term if r % 2 else total + term
        return float(total)


def sibuya_counting_pmf_table(alpha: float, t_max: int) -> np.ndarray:
    """Matrix ``P[m, t] = P(L(t) = m)`` for ``0 <= m, t <= t_max`` from the closed form.

    Uses the same alternating binomial sum as :func:`sibuya_counting_pmf`,
    organised as iterated forward differences of ``r -> gen_binom(t - a(r+1), t)``.
    """
    _check_alpha(alpha)
    out = np.zeros((t_max + 1, t_max + 1))
    with _mpfr_context(t_max):
        a = gmpy2.mpfr(alpha)
        c = [a * (r + 1) for r in range(t_max + 1)]
        b = [gmpy2.mpfr(1)] * (t_max + 1)
        for t in range(t_max + 1):
            if t:
                b = [bi * (1 - ci / t) for bi, ci in zip(b, c)]
            d = b[: t + 1]
            for m in range(t + 1):
                out[m, t] = float(d[0])
                d = [x - y for x, y in zip(d, d[1:])]
    return out


def sibuya_potential(alpha: float, t: int) -> float:
    """Mean number of visits of the Sibuya walk to level ``t``: ``gen_binom(a + t - 1, t)``."""
    _check_alpha(alpha)
    if t < 0:
        raise DomainError(f"t must be nonnegative, got {t}")
    return gen_binom(alpha + t - 1.0, t)


@dataclass(frozen=True)
class SibuyaMoments:
    t1: int
    t2: int
    mean_t1: float
    mean_t2: float
    second_t1: float
    second_t2: float
    cross: float

    @property
    def var_t1(self):
        return self.second_t1 - self.mean_t1**2

    @property
    def var_t2(self):
        return self.second_t2 - self.mean_t2**2

    @property
    def cov(self):
        return self.cross - self.mean_t1 * self.mean_t2

    @property
    def corr(self):
        return self.cov / math.sqrt(self.var_t1 * self.var_t2)

    def as_tuple(self):
        return (self.mean_t1, self.mean_t2, self.second_t1, self.second_t2, self.cross)


def sibuya_counting_moments(alpha: float, t1: int, t2: int) -> SibuyaMoments:
    """First, second and cross moments of the Sibuya counting process.

    ``E L(t) = B(t) - 1`` and ``E L(t)^2 = 2 B2(t) - 3 B(t) + 1`` with
    ``B(t) = gen_binom(t + a, t)``, ``B2(t) = gen_binom(t + 2a, t)``;
    ``E L(t1) L(t2) = sum_{l=1}^{t1} gen_binom(l + a - 1, l) [B(t1 - l) + B(t2 - l) - 1]``.
    """
    _check_alpha(alpha)
    if not 0 <= t1 <= t2:
        raise DomainError(f"need 0 <= t1 <= t2, got t1={t1}, t2={t2}")
    b1 = rising_binom_seq(alpha, t2)
    b2 = rising_binom_seq(2.0 * alpha, t2)
    pot = rising_binom_seq(alpha - 1.0, t1)
    ell = np.arange(1, t1 + 1)
    cross = float(np.sum(pot[1:] * (b1[t1 - ell] + b1[t2 - ell] - 1.0)))
    return SibuyaMoments(
        t1=t1,
        t2=t2,
        mean_t1=b1[t1] - 1.0,
        mean_t2=b1[t2] - 1.0,
        second_t1=2.0 * b2[t1] - 3.0 * b1[t1] + 1.0,
        second_t2=2.0 * b2[t2] - 3.0 * b1[t2] + 1.0,
        cross=cross,
    )


# ---------------------------------------------------------------------------
# chunked Monte Carlo

DEFAULT_CHUNK = 10_000


def chunk_generator(seed: int, stream_id: int, chunk: int) -> np.random.Generator:
    """Generator for one fixed-size chunk of replicas of stream ``stream_id``."""
    ss = np.random.SeedSequence(int(seed), spawn_key=(int(stream_id), int(chunk)))
    return np.random.Generator(np.random.PCG64(ss))


def run_chunks(worker: Callable, total: int, seed: int, stream_id: int = 0,
               threads: int = 1, chunk_size: int = DEFAULT_CHUNK) -> np.ndarray:
    """Run ``worker(gen, n)`` over replica chunks and concatenate in chunk order.

    Replicas are cut into chunks of ``chunk_size`` with one random stream
    per chunk, so the output depends only on ``(seed, stream_id, total)``
    and never on ``threads``.
    """
    if total < 1:
        raise ValidationError(f"number of replicas must be positive, got {total}")
    if threads < 1:
        raise ValidationError(f"threads must be positive, got {threads}")
    sizes = [chunk_size] * (total // chunk_size)
    if total % chunk_size:
        sizes.append(total % chunk_size)

    def job(k):
        return np.asarray(worker(chunk_generator(seed, stream_id, k), sizes[k]))

    if threads == 1 or len(sizes) == 1:
        parts = [job(k) for k in range(len(sizes))]
    else:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(job, range(len(sizes))))
    return np.concatenate(parts, axis=0)
