"""Special functions and real-argument binomial primitives.

Everything here is a pure function of its arguments.  The two entire
series (Mittag-Leffler and Wright) suffer from severe cancellation for
moderately large negative arguments, so they are summed in double
precision only when the largest term is small; otherwise the sum is
carried out in :mod:`mpmath` with a working precision sized from the
largest term.
"""

from __future__ import annotations

import math
import warnings

import mpmath
import numpy as np
from scipy import integrate, special

from .errors import AccuracyError, DomainError, NumericRangeError

MAX_SERIES_TERMS = 100_000
ML_MAX_ABS_ARG = 50.0
WRIGHT_MAX_ABS_ARG = 30.0

# Double precision is used only when the largest term is below 2**10 and
# exceeds the result by at most this factor.
_FLOAT_PATH_MAX_LOG2 = 10.0
_MAX_CANCELLATION = 1e3
_REL_STOP = 1e-16
# Beyond these the mpmath sum is slow; an integral representation takes over.
_MP_MAX_PEAK_INDEX = 300
_MP_MAX_PEAK_LOG2 = 900.0


def log_gamma(x: float) -> float:
    """Return ``ln Gamma(x)`` for ``x > 0``."""
    x = float(x)
    if not x > 0.0 or math.isinf(x):
        raise DomainError(f"log_gamma requires a positive finite argument, got {x!r}")
    return math.lgamma(x)


def gamma_ratio(z: float, c: float, d: float) -> float:
    """Return ``Gamma(z + c) / Gamma(z + d)``.

    Evaluated as a Pochhammer symbol so large ``z`` does not lose
    precision to the difference of two huge log-gammas.
    """
    return float(special.poch(z + d, c - d))


def gen_binom(a: float, k: int) -> float:
    """Generalized binomial coefficient ``a (a-1) ... (a-k+1) / k!``.

    Computed by the product recursion so that integer ``a`` with
    ``k > a >= 0`` gives an exact zero and signs stay exact for negative
    ``a``.
    """
    k = int(k)
    if k < 0:
        raise DomainError(f"lower index must be nonnegative, got {k}")
    out = 1.0
    for j in range(1, k + 1):
        out *= (a - j + 1) / j
    return out


def gen_binom_seq(a: float, kmax: int) -> np.ndarray:
    """Vector of ``gen_binom(a, k)`` for ``k = 0..kmax``."""
    if kmax < 0:
        raise DomainError(f"kmax must be nonnegative, got {kmax}")
    j = np.arange(1, kmax + 1, dtype=float)
    out = np.empty(kmax + 1)
    out[0] = 1.0
    out[1:] = np.cumprod((a - j + 1.0) / j)
    return out


def rising_binom_seq(a: float, tmax: int) -> np.ndarray:
    """Vector of ``gen_binom(t + a, t)`` for ``t = 0..tmax``.

    This is the product of ``(1 + a/j)`` for ``j <= t``.
    """
    if tmax < 0:
        raise DomainError(f"tmax must be nonnegative, got {tmax}")
    j = np.arange(1, tmax + 1, dtype=float)
    out = np.empty(tmax + 1)
    out[0] = 1.0
    out[1:] = np.cumprod(1.0 + a / j)
    return out


def log_abs_rgamma(y: float) -> tuple[float, int]:
    """Return ``(log|1/Gamma(y)|, sign(1/Gamma(y)))``.

    Negative arguments go through the reflection formula
    ``1/Gamma(y) = Gamma(1-y) sin(pi y) / pi``.  At non-positive integers
    the reciprocal vanishes and ``(-inf, 0)`` is returned.
    """
    if y > 0.0:
        return -math.lgamma(y), 1
    n = round(y)
    frac = y - n
    if frac == 0.0:
        return -math.inf, 0
    # sin(pi*y) = (-1)^n sin(pi*frac), accurate near the integers
    s = math.sin(math.pi * frac)
    sign = 1 if s > 0 else -1
    if n % 2:
        sign = -sign
    return math.lgamma(1.0 - y) + math.log(abs(s)) - math.log(math.pi), sign


def _sum_entire_series(log_term, mp_term):
    """Sum ``sum_r term(r)`` for an entire series with factorial decay.

    ``log_term(r)`` returns ``(log|term_r|, sign, envelope)`` in floats,
    where ``envelope >= log|term_r|`` ignores factors that vanish near
    poles; truncation decisions use the envelope so an accidental near-zero
    term cannot stop the sum early.  ``mp_term(r)`` returns the exact term
    as an mpmath number in the current context.
    Returns ``None`` when the extended-precision sum would be too costly,
    so the caller can switch to an integral representation.
    """
    # Locate the peak term so the working precision can be chosen.
    peak_log = -math.inf
    peak_r = 0
    r = 0
    while True:
        lg, sg, env = log_term(r)
        if sg != 0 and lg > peak_log:
            peak_log, peak_r = lg, r
        if r > peak_r + 2 and env < peak_log - 80.0:
            break
        r += 1
        if r > _MP_MAX_PEAK_INDEX:
            return None

    peak_log2 = peak_log / math.log(2.0)
    if peak_log2 <= _FLOAT_PATH_MAX_LOG2:
        total = 0.0
        comp = 0.0
        for r in range(MAX_SERIES_TERMS + 1):
            lg, sg, env = log_term(r)
            term = sg * math.exp(lg) if sg else 0.0
            # Kahan-Babuska summation
            y = term - comp
            t = total + y
            comp = (t - total) - y
            total = t
            if r > peak_r and math.exp(env) < _REL_STOP * max(abs(total), 1e-300):
                break
        else:
            raise NumericRangeError("series exceeded the term cap")
        if math.exp(peak_log) <= _MAX_CANCELLATION * abs(total):
            return total

    if peak_log2 > _MP_MAX_PEAK_LOG2:
        return None
    prec = int(53 + 2 * peak_log2 + 40)
    with mpmath.workprec(prec):
        total = mpmath.mpf(0)
        for r in range(MAX_SERIES_TERMS + 1):
            total += mp_term(r)
            if r > peak_r:
                env = log_term(r)[2]
                if env < -745.0 or mpmath.exp(env) < _REL_STOP * abs(total):
                    return float(total)
    raise NumericRangeError("series exceeded the term cap")


def _kanter(alpha: float, u):
    """Kanter's function ``A(u)`` on ``(0, pi)``; increasing from ``A(0+)``."""
    sa = np.sin(alpha * u)
    return (sa / np.sin(u)) ** (1.0 / (1.0 - alpha)) * np.sin((1.0 - alpha) * u) / sa


def _log_kanter(alpha: float, u: float) -> float:
    """``log A(u)`` without overflow near ``u = pi``."""
    if u <= 0.0:
        return math.log(_kanter_at_zero(alpha))
    sa = math.sin(alpha * u)
    return (math.log(sa / math.sin(u)) / (1.0 - alpha)) + math.log(math.sin((1.0 - alpha) * u) / sa)


def _kanter_at_zero(alpha: float) -> float:
    return (1.0 - alpha) * alpha ** (alpha / (1.0 - alpha))


def _quad(f, a, b, epsrel, epsabs=0.0, limit=400, check_rel=1e-8, check_abs=None):
    """``integrate.quad`` whose roundoff warnings are replaced by an explicit error check."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, err = integrate.quad(f, a, b, epsabs=epsabs, epsrel=epsrel, limit=limit)
    floor = 10.0 * max(epsabs, 1e-300) if check_abs is None else check_abs
    if not err <= check_rel * abs(val) + floor:
        raise AccuracyError(f"quadrature error estimate {err:.3g} too large for value {val:.6g}")
    return val


def _wright_integral(alpha: float, x: float) -> float:
    """``W_{-alpha,1-alpha}(-x)`` for ``x > 0`` from the Zolotarev integral.

    ``x^{a/(1-a)} / ((1-a) pi) * int_0^pi A(u) exp(-x^{1/(1-a)} A(u)) du``.
    The integrand is positive, so there is no cancellation.
    """
    big = x ** (1.0 / (1.0 - alpha))
    a0 = _kanter_at_zero(alpha)

    def f(u):
        au = _kanter(alpha, u)
        return au * math.exp(-big * (au - a0))

    val = _quad(f, 0.0, math.pi, 1e-13)
    if val <= 0.0:
        return 0.0
    logv = math.log(val) + (alpha / (1.0 - alpha)) * math.log(x) - math.log((1.0 - alpha) * math.pi) - big * a0
    return math.exp(logv) if logv > -745.0 else 0.0


def _mittag_leffler_integral(alpha: float, x: float) -> float:
    """``E_alpha(-x)`` for ``x > 0`` and ``0 < alpha < 1``.

    Completely monotone representation after the substitution
    ``y = (r x^{1/alpha})^alpha``, which removes the endpoint singularity:
    ``sin(a pi)/(a pi x) * int_0^inf exp(-y^{1/a}) / ((y/x)^2 + 2 (y/x) cos(a pi) + 1) dy``.
    """
    c = math.cos(alpha * math.pi)
    inv = 1.0 / alpha

    def f(y):
        rho = y / x
        return math.exp(-(y**inv)) / (rho * rho + 2.0 * rho * c + 1.0)

    val = _quad(f, 0.0, math.inf, 1e-13)
    return math.sin(alpha * math.pi) / (alpha * math.pi * x) * val


def mittag_leffler(alpha: float, x: float) -> float:
    """One-parameter Mittag-Leffler function ``sum_k x^k / Gamma(1 + alpha k)``.

    Only the relaxation branch ``-50 <= x <= 0`` is supported.
    """
    if not 0.0 < alpha <= 1.0:
        raise DomainError(f"alpha must lie in (0, 1], got {alpha}")
    if x > 0.0:
        raise DomainError(f"mittag_leffler supports x <= 0 only, got {x}")
    if abs(x) > ML_MAX_ABS_ARG:
        raise NumericRangeError(f"|x| = {abs(x)} exceeds the supported bound |x| <= {ML_MAX_ABS_ARG}")
    if x == 0.0:
        return 1.0
    lx = math.log(-x)

    def log_term(k):
        lg = k * lx - math.lgamma(1.0 + alpha * k)
        return lg, (-1) ** k, lg

    def mp_term(k):
        return mpmath.mpf(x) ** k * mpmath.rgamma(1 + mpmath.mpf(alpha) * k)

    out = _sum_entire_series(log_term, mp_term)
    if out is None:
        out = math.exp(x) if alpha == 1.0 else _mittag_leffler_integral(alpha, -x)
    return out


def wright_density_kernel(alpha: float, z: float) -> float:
    """Wright function ``W_{-alpha, 1-alpha}(z)`` for ``-30 <= z <= 0``.

    ``sum_r z^r / (r! Gamma(1 - alpha - alpha r))``; the reciprocal gamma
    at negative arguments is handled by reflection with explicit sign.
    """
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    if z > 0.0:
        raise DomainError(f"wright_density_kernel supports z <= 0 only, got {z}")
    if abs(z) > WRIGHT_MAX_ABS_ARG:
        raise NumericRangeError(f"|z| = {abs(z)} exceeds the supported bound |z| <= {WRIGHT_MAX_ABS_ARG}")
    if z == 0.0:
        return math.exp(log_abs_rgamma(1.0 - alpha)[0])
    lz = math.log(-z)

    def log_term(r):
        y = 1.0 - alpha - alpha * r
        base = r * lz - math.lgamma(r + 1.0)
        # |1/Gamma(y)| <= Gamma(1-y)/pi for y <= 0
        env = base + (math.lgamma(1.0 - y) - math.log(math.pi) if y <= 0.0 else -math.lgamma(y))
        lg, sg = log_abs_rgamma(y)
        if sg == 0:
            return -math.inf, 0, env
        return base + lg, sg * (-1) ** r, env

    def mp_term(r):
        a = mpmath.mpf(alpha)
        return mpmath.mpf(z) ** r * mpmath.rgamma(r + 1) * mpmath.rgamma(1 - a - a * r)

    out = _sum_entire_series(log_term, mp_term)
    if out is None:
        out = _wright_integral(alpha, -z)
    return out
