"""Finite-state Markov and semi-Markov chains in discrete time.

A Markov chain with matrix ``A`` is split into a jump chain ``H`` (zero
diagonal) and geometric holding times with parameters ``p_i = 1 - A_ii``.
Replacing the geometric holding time ``M`` by ``sum_{k<=M} Z_k`` (type A)
or ``1 + sum_{k<M} Z_k`` (type B) for i.i.d. positive integer steps ``Z``
gives the semi-Markov chains of this module.  Time-changing the Markov
chain by the inverse of the random walk with steps ``Z`` gives a chain
with the type-A law.
"""

from __future__ import annotations

import functools
import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInputError, UnsupportedInputError, ValidationError
from .series import counting_pmf_table_via_gf
from .stochastic import (
    PointMass,
    StepDistribution,
    as_generator,
    compound_geometric_pmf,
    compound_geometric_sample,
    counting_samples,
    renewal_path,
    step_from_json,
)

ENUMERATION_MAX_T = 12
_ROW_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class MarkovSpec:
    """Row-stochastic matrix ``A`` on a finite labelled state set."""

    A: np.ndarray
    states: tuple = None

    def __post_init__(self):
        a = np.array(self.A, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
            raise ValidationError(f"A must be a nonempty square matrix, got shape {a.shape}")
        if not np.all(np.isfinite(a)) or np.any(a < 0.0) or np.any(a > 1.0):
            raise ValidationError("entries of A must lie in [0, 1]")
        rows = a.sum(axis=1)
        if np.any(np.abs(rows - 1.0) > _ROW_TOL):
            raise ValidationError(f"rows of A must sum to 1 within {_ROW_TOL} (got {rows.tolist()})")
        a.setflags(write=False)
        object.__setattr__(self, "A", a)
        states = tuple(range(a.shape[0])) if self.states is None else tuple(self.states)
        if len(states) != a.shape[0] or len(set(states)) != len(states):
            raise ValidationError("states must be distinct labels, one per row of A")
        object.__setattr__(self, "states", states)

    @property
    def size(self) -> int:
        return self.A.shape[0]

    @property
    def q(self) -> np.ndarray:
        return np.diag(self.A).copy()

    @property
    def p(self) -> np.ndarray:
        return 1.0 - self.q

    def index(self, state) -> int:
        """Position of a state label (integer positions are accepted as well)."""
        if state in self.states:
            return self.states.index(state)
        if isinstance(state, (int, np.integer)) and 0 <= state < self.size:
            return int(state)
        raise ValidationError(f"unknown state {state!r}")

    def __eq__(self, other):
        return isinstance(other, MarkovSpec) and self.states == other.states and np.array_equal(self.A, other.A)

    def __hash__(self):
        return hash((self.states, self.A.tobytes()))


@dataclass(frozen=True, eq=False)
class JumpChain:
    """Jump matrix ``H`` (zero diagonal) and jump probabilities ``p``."""

    H: np.ndarray
    p: np.ndarray

    @property
    def q(self) -> np.ndarray:
        return 1.0 - self.p

    @property
    def size(self) -> int:
        return self.H.shape[0]

    @property
    def lam(self) -> np.ndarray:
        """``lambda_i = p_i / q_i``; needs every ``q_i > 0``."""
        q = self.q
        bad = np.nonzero(q <= 0.0)[0]
        if bad.size:
            raise UnsupportedInputError(
                f"lambda_i = p_i/q_i is undefined for states {bad.tolist()} with q_i = 0 (p_i = 1)"
            )
        return self.p / q

    def reconstruct(self) -> np.ndarray:
        """``A = diag(q) + diag(p) H``."""
        return np.diag(self.q) + self.p[:, None] * self.H


def decompose(spec: MarkovSpec) -> JumpChain:
    """Split ``A`` into its jump chain and geometric holding parameters."""
    a = spec.A
    q = np.diag(a).copy()
    absorbing = np.nonzero(q >= 1.0)[0]
    if absorbing.size:
        raise UnsupportedInputError(
            f"states {absorbing.tolist()} are absorbing (A_ii = 1); the chain must have no absorbing states"
        )
    p = 1.0 - q
    h = a / p[:, None]
    np.fill_diagonal(h, 0.0)
    # renormalise rows so they sum to 1 to full precision
    h /= h.sum(axis=1, keepdims=True)
    h.setflags(write=False)
    p.setflags(write=False)
    return JumpChain(h, p)


def markov_pmf(spec: MarkovSpec, t: int) -> np.ndarray:
    """``P(t) = A^t`` by repeated squaring."""
    if t < 0:
        raise ValidationError(f"t must be nonnegative, got {t}")
    return np.linalg.matrix_power(spec.A, int(t))


# ---------------------------------------------------------------------------
# semi-Markov specs

_KINDS = ("A", "B")


@dataclass(frozen=True, eq=False)
class SemiMarkovSpec:
    """Semi-Markov chain built from a Markov spec, a step law and a kind (A or B)."""

    markov: MarkovSpec
    step: StepDistribution
    kind: str = "A"

    def __post_init__(self):
        kind = str(self.kind).upper()
        if kind not in _KINDS:
            raise ValidationError(f"kind must be 'A' or 'B', got {self.kind!r}")
        object.__setattr__(self, "kind", kind)
        if not isinstance(self.step, StepDistribution):
            raise ValidationError("step must be a StepDistribution")
        decompose(self.markov)  # reject absorbing states early

    @property
    def jump_chain(self) -> JumpChain:
        return _cached_decompose(self.markov)

    @property
    def states(self):
        return self.markov.states

    def sojourn_pmf(self, state_index: int, horizon: int):
        """Exact law of the holding time in a state on ``0..horizon``."""
        p = float(self.jump_chain.p[state_index])
        return compound_geometric_pmf(self.kind, p, self.step, horizon)

    def __eq__(self, other):
        return (
            isinstance(other, SemiMarkovSpec)
            and self.kind == other.kind
            and self.markov == other.markov
            and self.step == other.step
        )

    def __hash__(self):
        return hash((self.kind, self.markov))


@dataclass(frozen=True, eq=False)
class TimeChangeSpec:
    """``X(L(t))``: Markov chain ``X`` run on the inverse of an independent walk with steps ``Z``."""

    markov: MarkovSpec
    step: StepDistribution

    def __post_init__(self):
        decompose(self.markov)

    def __eq__(self, other):
        return isinstance(other, TimeChangeSpec) and self.markov == other.markov and self.step == other.step

    def __hash__(self):
        return hash(self.markov)


@functools.lru_cache(maxsize=128)
def _cached_decompose(markov: MarkovSpec) -> JumpChain:
    return decompose(markov)


# ---------------------------------------------------------------------------
# trajectories

@dataclass(frozen=True)
class PathSample:
    """Trajectory on ``0..horizon`` as ``(state, sojourn)`` epochs.

    The last sojourn is cut at the horizon, so the sojourns add up to
    ``horizon + 1``.  ``age`` is the number of time points spent in the
    current state at the horizon (1 right after a jump).
    """

    epochs: tuple
    horizon: int

    @property
    def age(self) -> int:
        return self.epochs[-1][1]

    def states(self) -> np.ndarray:
        """State at every time ``0..horizon``."""
        labels = [s for s, _ in self.epochs]
        lengths = [d for _, d in self.epochs]
        return np.repeat(np.array(labels, dtype=object), lengths)

    def state_at(self, t: int):
        if not 0 <= t <= self.horizon:
            raise ValidationError(f"t must lie in [0, {self.horizon}]")
        acc = 0
        for s, d in self.epochs:
            acc += d
            if t < acc:
                return s
        raise AssertionError("unreachable")

    def age_at(self, t: int) -> int:
        if not 0 <= t <= self.horizon:
            raise ValidationError(f"t must lie in [0, {self.horizon}]")
        start = 0
        for _, d in self.epochs:
            if t < start + d:
                return t - start + 1
            start += d
        raise AssertionError("unreachable")


def _epochs_from_runs(labels, lengths, horizon):
    epochs = []
    left = horizon + 1
    for s, d in zip(labels, lengths):
        d = min(int(d), left)
        if epochs and epochs[-1][0] == s:
            epochs[-1] = (s, epochs[-1][1] + d)
        else:
            epochs.append((s, d))
        left -= d
        if left == 0:
            break
    return PathSample(tuple(epochs), horizon)


def _next_state(gen, h_row):
    return int(np.searchsorted(np.cumsum(h_row)[:-1], gen.random(), side="right"))


def simulate(spec, rng, initial, horizon: int) -> PathSample:
    """Simulate one trajectory of a Markov or semi-Markov spec on ``0..horizon``.

    Holding times are geometric(``p_i``) for a :class:`MarkovSpec` and the
    compound (shifted) geometric law for a :class:`SemiMarkovSpec`; the
    next state is drawn from the jump chain.
    """
    if horizon < 0:
        raise ValidationError(f"horizon must be nonnegative, got {horizon}")
    gen = as_generator(rng)
    markov = spec.markov if isinstance(spec, SemiMarkovSpec) else spec
    if not isinstance(markov, MarkovSpec):
        raise ValidationError("spec must be a MarkovSpec or SemiMarkovSpec")
    jump = _cached_decompose(markov)
    i = markov.index(initial)
    labels, lengths = [], []
    elapsed = 0
    while elapsed <= horizon:
        p = float(jump.p[i])
        if isinstance(spec, SemiMarkovSpec):
            d = compound_geometric_sample(gen, spec.kind, p, spec.step)
        else:
            d = int(gen.geometric(p))
        labels.append(markov.states[i])
        lengths.append(d)
        elapsed += d
        i = _next_state(gen, jump.H[i])
    return _epochs_from_runs(labels, lengths, horizon)


def time_change_sample(markov: MarkovSpec, step: StepDistribution, rng, initial, horizon: int) -> PathSample:
    """Simulate ``X(L(t))`` for ``t = 0..horizon``.

    ``X`` moves with matrix ``A`` (self-loops included) and ``L`` is the
    inverse of an independent walk with steps ``step``; ``X`` advances one
    step at every renewal of the walk.
    """
    decompose(markov)
    gen = as_generator(rng)
    path = renewal_path(gen, step, horizon)
    times = path.renewal_times
    n = times.size - 2  # renewals at or before the horizon
    i = markov.index(initial)
    xs = [i]
    cum = np.cumsum(markov.A, axis=1)
    for _ in range(n):
        i = int(np.searchsorted(cum[i][:-1], gen.random(), side="right"))
        xs.append(i)
    lengths = np.diff(times)
    return _epochs_from_runs([markov.states[k] for k in xs], lengths, horizon)


def sample_states(spec, rng, initial, times, size: int) -> np.ndarray:
    """State indices at the given times for ``size`` independent paths.

    Vectorized counterpart of :func:`simulate` (also accepts a
    :class:`TimeChangeSpec`).  Returns an integer array of shape
    ``(size, len(times))`` holding state positions.
    """
    gen = as_generator(rng)
    times = np.atleast_1d(np.asarray(times, dtype=np.int64))
    if isinstance(spec, TimeChangeSpec):
        return _sample_time_change_states(spec, gen, initial, times, size)
    markov = spec.markov if isinstance(spec, SemiMarkovSpec) else spec
    jump = _cached_decompose(markov)
    cum_h = np.cumsum(jump.H, axis=1)
    cum_h[:, -1] = 1.0
    state = np.full(size, markov.index(initial), dtype=np.int64)
    start = np.zeros(size, dtype=np.int64)
    out = np.zeros((size, times.size), dtype=np.int64)
    t_max = int(times.max())
    active = np.arange(size)
    while active.size:
        s = state[active]
        p = jump.p[s]
        if isinstance(spec, SemiMarkovSpec):
            d = compound_geometric_sample(gen, spec.kind, p, spec.step, size=active.size)
        else:
            d = gen.geometric(p).astype(np.int64)
        lo, hi = start[active], start[active] + d
        inside = (times[None, :] >= lo[:, None]) & (times[None, :] < hi[:, None])
        rows = np.nonzero(inside)
        out[active[rows[0]], rows[1]] = s[rows[0]]
        start[active] = hi
        u = gen.random(active.size)
        state[active] = (u[:, None] >= cum_h[s]).sum(axis=1)
        active = active[hi <= t_max]
    return out


def _sample_time_change_states(spec, gen, initial, times, size):
    counts = counting_samples(gen, spec.step, times, size)
    markov = spec.markov
    cum = np.cumsum(markov.A, axis=1)
    cum[:, -1] = 1.0
    x = np.full(size, markov.index(initial), dtype=np.int64)
    out = np.zeros((size, times.size), dtype=np.int64)
    for n in range(int(counts.max()) + 1):
        hit = counts == n
        r, c = np.nonzero(hit)
        out[r, c] = x[r]
        x = (gen.random(size)[:, None] >= cum[x]).sum(axis=1)
    return out


# ---------------------------------------------------------------------------
# exact laws

def renewal_law(spec: SemiMarkovSpec | MarkovSpec, initial, horizon: int) -> np.ndarray:
    """Exact ``P(Y(t) = j)`` for ``t = 0..horizon`` from a fresh start in ``initial``.

    Markov renewal recursion over entrance times: ``r_j(t)`` is the
    probability of entering ``j`` at time ``t``, and
    ``P(Y(t) = j) = sum_s r_j(s) P(J_j > t - s)``.
    Returns an array of shape ``(horizon + 1, S)``.
    """
    if isinstance(spec, MarkovSpec):
        spec = SemiMarkovSpec(spec, PointMass(1), "A")
    n = horizon + 1
    S = spec.markov.size
    jump = spec.jump_chain
    f = np.zeros((S, n))
    surv = np.zeros((S, n))
    for i in range(S):
        law = spec.sojourn_pmf(i, horizon)
        f[i] = law.mass
        # P(J > a) = P(a < J <= horizon) + mass beyond the horizon
        within = law.mass[::-1].cumsum()[::-1]
        surv[i, :-1] = within[1:] + law.tail_bound
        surv[i, -1] = law.tail_bound
    entry = np.zeros((n, S))
    entry[0, spec.markov.index(initial)] = 1.0
    for t in range(1, n):
        # sum_s entry[s, i] f_i(t - s), then jump with H
        lag = f[:, t - np.arange(t)]  # (S, t): f_i(t - s) for s = 0..t-1
        leave = np.einsum("si,is->i", entry[:t], lag)
        entry[t] = leave @ jump.H
    out = np.zeros((n, S))
    for t in range(n):
        out[t] = np.einsum("si,is->i", entry[: t + 1], surv[:, t - np.arange(t + 1)])
    return out


def time_change_law(spec: TimeChangeSpec, initial, horizon: int) -> np.ndarray:
    """Exact ``P(X(L(t)) = j) = sum_n P(L(t) = n) (A^n)_{ij}`` for ``t = 0..horizon``."""
    markov = spec.markov
    table = counting_pmf_table_via_gf(spec.step.to_pmf(horizon), horizon)  # [n, t]
    S = markov.size
    rows = np.zeros((horizon + 1, S))
    v = np.zeros(S)
    v[markov.index(initial)] = 1.0
    for n in range(horizon + 1):
        rows[n] = v
        v = v @ markov.A
    return table.T @ rows


def enumerate_exact(spec, initial, t_max: int) -> np.ndarray:
    """Exact state pmf for ``t = 0..t_max`` (``t_max <= 12``), oracle for tests.

    * :class:`MarkovSpec`: rows of ``A^t``;
    * :class:`SemiMarkovSpec`: Markov renewal recursion with exact sojourn laws;
    * :class:`TimeChangeSpec`: conditioning on the number of walk renewals.
    """
    if not 0 <= t_max <= ENUMERATION_MAX_T:
        raise ValidationError(f"t_max must lie in [0, {ENUMERATION_MAX_T}], got {t_max}")
    if isinstance(spec, MarkovSpec):
        i = spec.index(initial)
        out = np.zeros((t_max + 1, spec.size))
        v = np.zeros(spec.size)
        v[i] = 1.0
        for t in range(t_max + 1):
            out[t] = v
            v = v @ spec.A
        return out
    if isinstance(spec, SemiMarkovSpec):
        return renewal_law(spec, initial, t_max)
    if isinstance(spec, TimeChangeSpec):
        return time_change_law(spec, initial, t_max)
    raise ValidationError(f"unsupported spec type {type(spec).__name__}")


# ---------------------------------------------------------------------------
# autocorrelation of time-changed random walks

def timechange_autocorr(moments, mean_x: float, var_x: float) -> float:
    """Autocorrelation of ``Y(t) = X(L(t))`` for a walk ``X`` with i.i.d. increments.

    ``moments`` carries the first, second and cross moments of ``L`` at
    ``s = moments.t1 <= t = moments.t2`` (see
    :func:`~fracchain.stochastic.sibuya_counting_moments`).
    """
    m2 = mean_x * mean_x
    num = moments.cov * m2 + moments.mean_t1 * var_x
    d_s = moments.var_t1 * m2 + moments.mean_t1 * var_x
    d_t = moments.var_t2 * m2 + moments.mean_t2 * var_x
    if d_s <= 0.0 or d_t <= 0.0:
        raise DegenerateInputError("Var Y(s) or Var Y(t) vanishes; the autocorrelation is undefined")
    return num / (math.sqrt(d_s) * math.sqrt(d_t))


def loglog_slope(x, y) -> float:
    """Least-squares slope of ``log y`` against ``log x``."""
    lx, ly = np.log(np.asarray(x, dtype=float)), np.log(np.asarray(y, dtype=float))
    return float(np.polyfit(lx, ly, 1)[0])


# ---------------------------------------------------------------------------
# JSON specs
#
#   {"states": [...], "A": [[...], ...], "kind": "markov" | "A" | "B" | "timechange",
#    "alpha": a  or  "step_pmf": [0, m1, m2, ...], "seed": int (optional)}

def spec_to_json(spec, seed: int | None = None) -> dict:
    if isinstance(spec, MarkovSpec):
        doc = {"states": list(spec.states), "A": spec.A.tolist(), "kind": "markov"}
    elif isinstance(spec, SemiMarkovSpec):
        doc = {"states": list(spec.states), "A": spec.markov.A.tolist(), "kind": spec.kind}
        doc.update(spec.step.to_json())
    elif isinstance(spec, TimeChangeSpec):
        doc = {"states": list(spec.markov.states), "A": spec.markov.A.tolist(), "kind": "timechange"}
        doc.update(spec.step.to_json())
    else:
        raise ValidationError(f"unsupported spec type {type(spec).__name__}")
    if seed is not None:
        doc["seed"] = int(seed)
    return doc


def spec_from_json(doc: dict):
    """Inverse of :func:`spec_to_json`; the optional ``seed`` field is ignored here."""
    if not isinstance(doc, dict):
        raise ValidationError("spec document must be a JSON object")
    if "A" not in doc:
        raise ValidationError("spec document needs field 'A'")
    states = doc.get("states")
    markov = MarkovSpec(np.asarray(doc["A"], dtype=float), None if states is None else tuple(states))
    kind = str(doc.get("kind", "markov"))
    if kind.lower() == "markov":
        return markov
    step = step_from_json(doc)
    if kind.lower() == "timechange":
        return TimeChangeSpec(markov, step)
    return SemiMarkovSpec(markov, step, kind)


def read_spec_doc(path) -> dict:
    """Raw JSON document of a spec file."""
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read spec file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValidationError(f"spec file {path} is not valid JSON: {exc}") from exc
    return doc


def load_spec(path):
    return spec_from_json(read_spec_doc(path))


def dump_spec(spec, path, seed: int | None = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(spec_to_json(spec, seed), fh, indent=2)
        fh.write("\n")
