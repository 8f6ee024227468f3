"""Command-line front end.

Every command writes one table (CSV with a versioned schema line, or a
JSON object with a ``results`` array) to ``--output`` or standard output,
and a one-line summary naming the seed to standard error.

Exit codes: 0 success, 2 invalid input, 3 numeric range problem.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__
from .errors import FracChainError, NumericRangeError, ValidationError
from .fracops import FracKernel, frac_bernoulli_pmf_table, nb_forward_solve, residual_backward, solve_backward
from .limits import ScalingExperiment, inverse_stable_density, frac_poisson_limit_experiment, ml_waiting_time_sample, sibuya_limit_experiment
from .numerics import mittag_leffler
from .output import atomic_write, csv_text, json_text
from .semimarkov import (
    MarkovSpec,
    SemiMarkovSpec,
    TimeChangeSpec,
    decompose,
    dump_spec,
    read_spec_doc,
    renewal_law,
    sample_states,
    spec_from_json,
    time_change_law,
    timechange_autocorr,
)
from .stochastic import (
    PointMass,
    Sibuya,
    counting_samples,
    dml_pmf,
    dml_sample,
    run_chunks,
    sibuya_counting_moments,
    sibuya_counting_pmf_table,
    sibuya_pmf_vector,
    sibuya_sample,
    step_from_json,
)

EXIT_OK, EXIT_VALIDATION, EXIT_RANGE = 0, 2, 3
DEFAULT_SEED = 0


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ValidationError(message)


def _int_list(text):
    try:
        return [int(v) for v in str(text).split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _float_list(text):
    try:
        return [float(v) for v in str(text).split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with option values (command-line flags take precedence)")
    common.add_argument("--seed", type=int)
    common.add_argument("--threads", type=int, help="worker threads for Monte Carlo (output does not depend on it)")
    common.add_argument("--replicas", type=int)
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--output", help="output file (default: standard output)")

    model = argparse.ArgumentParser(add_help=False)
    model.add_argument("--alpha", type=float)
    model.add_argument("--p", type=float, help="geometric parameter")
    model.add_argument("--lambda", dest="lam", type=float, help="rate lambda = p/q")
    model.add_argument("--kind", help="A or B")
    model.add_argument("--spec", help="chain spec JSON file")
    model.add_argument("--step-pmf", type=_float_list, help="step masses on 0,1,2,... (index 0 must be 0)")
    model.add_argument("--initial", help="initial state label (default: first state)")
    model.add_argument("--horizon", type=int)
    model.add_argument("--t", type=float)
    model.add_argument("--save-spec", help="also write the effective chain spec as JSON")

    parser = _Parser(prog="fracchain", description="Discrete-time semi-Markov chains and fractional difference operators.")
    parser.add_argument("--version", action="version", version=f"fracchain {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("pmf", parents=[common, model], help="exact probability mass functions")
    p.add_argument("--process", required=False,
                   choices=("sibuya", "sibuya-counting", "dml", "frac-bernoulli", "chain",
                            "inverse-stable", "mittag-leffler"))
    p.add_argument("--kmax", type=int)
    p.add_argument("--x", type=_float_list, help="comma-separated evaluation points")

    p = sub.add_parser("sample", parents=[common, model], help="Monte Carlo draws")
    p.add_argument("--process", choices=("sibuya", "dml", "ml-waiting", "sibuya-counting", "chain"))

    p = sub.add_parser("moments", parents=[common, model], help="moments of the Sibuya counting process")
    p.add_argument("--t1", type=int)
    p.add_argument("--t2", type=int)

    p = sub.add_parser("solve", parents=[common, model], help="solve a governing system")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--backward", action="store_true", default=None)
    mode.add_argument("--forward", action="store_true", default=None)
    p.add_argument("--kmax", type=int)

    sub.add_parser("residual", parents=[common, model], help="residual of the backward system for the solver output")

    p = sub.add_parser("autocorr", parents=[common, model], help="autocorrelation of a time-changed random walk")
    p.add_argument("--mean", type=float, help="mean of the walk increments")
    p.add_argument("--var", type=float, help="variance of the walk increments")
    p.add_argument("--s", type=int)
    p.add_argument("--times", type=_int_list, help="comma-separated t values (default: --t)")

    p = sub.add_parser("converge", parents=[common, model], help="scaling-limit experiments")
    p.add_argument("--target", choices=("inverse-stable", "frac-poisson"))
    p.add_argument("--n", type=_int_list, help="comma-separated scales")
    return parser


# ---------------------------------------------------------------------------
# option resolution

def _merge_config(args) -> dict:
    opts = {k: v for k, v in vars(args).items()}
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                cfg = json.load(fh)
        except OSError as exc:
            raise ValidationError(f"cannot read config {args.config}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ValidationError(f"config {args.config} is not valid JSON: {exc}") from exc
        if not isinstance(cfg, dict):
            raise ValidationError("config must be a JSON object")
        if "command" in cfg and cfg["command"] != args.command:
            raise ValidationError(f"config is for command {cfg['command']!r}, not {args.command!r}")
        for key, value in cfg.items():
            name = {"lambda": "lam"}.get(key, key.replace("-", "_"))
            if name == "command":
                continue
            if name not in opts:
                raise ValidationError(f"unknown config field {key!r}")
            if opts[name] is None:
                if name in ("n", "times") and isinstance(value, str):
                    value = _int_list(value)
                opts[name] = value
    opts.setdefault("format", None)
    opts["format"] = opts["format"] or "csv"
    opts["threads"] = 1 if opts["threads"] is None else opts["threads"]
    for name in ("threads", "replicas"):
        if opts.get(name) is not None and int(opts[name]) < 1:
            raise ValidationError(f"--{name} must be a positive integer")
    return opts


def _need(opts, *names):
    for name in names:
        if opts.get(name) is None:
            raise ValidationError(f"missing required option --{name.replace('_', '-')}")
    return [opts[n] for n in names]


def _step(opts):
    if opts.get("step_pmf") is not None:
        return step_from_json({"step_pmf": opts["step_pmf"]})
    if opts.get("alpha") is not None:
        return step_from_json({"alpha": opts["alpha"]})
    return None


def _chain(opts):
    """Spec from --spec, with --alpha/--step-pmf/--kind overriding the file."""
    (path,) = _need(opts, "spec")
    doc = read_spec_doc(path)
    if not isinstance(doc, dict):
        raise ValidationError("spec document must be a JSON object")
    doc = dict(doc)
    if opts.get("seed") is None and "seed" in doc:
        opts["seed"] = int(doc["seed"])
    if opts.get("step_pmf") is not None:
        doc.pop("alpha", None)
        doc["step_pmf"] = opts["step_pmf"]
    elif opts.get("alpha") is not None:
        doc.pop("step_pmf", None)
        doc["alpha"] = opts["alpha"]
    if opts.get("kind") is not None:
        doc["kind"] = opts["kind"]
    return spec_from_json(doc)


def _initial(opts, markov):
    init = opts.get("initial")
    if init is None:
        return markov.states[0]
    for s in markov.states:
        if str(s) == str(init):
            return s
    raise ValidationError(f"unknown initial state {init!r}; states are {list(markov.states)}")


def _seed(opts):
    if opts.get("seed") is None:
        opts["seed"] = DEFAULT_SEED
    return int(opts["seed"])


def _as_int(opts, name):
    value = opts[name]
    if value is None:
        return None
    if int(value) != value:
        raise ValidationError(f"--{name} must be an integer, got {value}")
    return int(value)


# ---------------------------------------------------------------------------
# commands; each returns (schema, columns, rows, extra)

def cmd_pmf(opts):
    process = _need(opts, "process")[0]
    if process == "sibuya":
        alpha, kmax = _need(opts, "alpha", "kmax")
        mass = sibuya_pmf_vector(alpha, kmax)
        return "pmf sibuya", ("k", "prob"), [(k, mass[k]) for k in range(1, kmax + 1)], {}
    if process == "sibuya-counting":
        alpha = _need(opts, "alpha")[0]
        t = _as_int(opts, "t") if opts.get("t") is not None else _need(opts, "horizon")[0]
        table = sibuya_counting_pmf_table(alpha, t)
        return "pmf sibuya-counting", ("m", "prob"), [(m, table[m, t]) for m in range(t + 1)], {}
    if process == "dml":
        kind, alpha, horizon = _need(opts, "kind", "alpha", "horizon")
        p = _rate_to_p(opts)
        law = dml_pmf(kind, p, alpha, horizon)
        return "pmf dml", ("k", "prob"), [(k, law.mass[k]) for k in range(horizon + 1)], {"tail_bound": law.tail_bound}
    if process == "frac-bernoulli":
        kind, alpha = _need(opts, "kind", "alpha")
        t = _as_int(opts, "t") if opts.get("t") is not None else _need(opts, "horizon")[0]
        p = _rate_to_p(opts)
        table = frac_bernoulli_pmf_table(kind, alpha, p, t)
        return "pmf frac-bernoulli", ("m", "prob"), [(m, table[m, t]) for m in range(t + 1)], {}
    if process == "chain":
        spec = _chain(opts)
        horizon = _need(opts, "horizon")[0]
        markov = spec if isinstance(spec, MarkovSpec) else spec.markov
        init = _initial(opts, markov)
        law = time_change_law(spec, init, horizon) if isinstance(spec, TimeChangeSpec) else renewal_law(spec, init, horizon)
        rows = [(t, markov.states[j], law[t, j]) for t in range(horizon + 1) for j in range(markov.size)]
        _maybe_save(opts, spec)
        return "pmf chain", ("t", "state", "prob"), rows, {}
    if process == "inverse-stable":
        alpha, xs = _need(opts, "alpha", "x")
        t = 1.0 if opts.get("t") is None else float(opts["t"])
        return "pmf inverse-stable density", ("x", "density"), [(x, inverse_stable_density(alpha, x, t)) for x in xs], {}
    if process == "mittag-leffler":
        alpha, xs = _need(opts, "alpha", "x")
        return "pmf mittag-leffler", ("x", "value"), [(x, mittag_leffler(alpha, x)) for x in xs], {}
    raise ValidationError(f"unknown process {process!r}")


def _rate_to_p(opts):
    if opts.get("p") is not None:
        return float(opts["p"])
    if opts.get("lam") is not None:
        lam = float(opts["lam"])
        if not lam > 0.0:
            raise ValidationError("--lambda must be positive")
        return lam / (1.0 + lam)
    raise ValidationError("missing required option --p or --lambda")


def _maybe_save(opts, spec):
    if opts.get("save_spec"):
        dump_spec(spec, opts["save_spec"], opts.get("seed"))


def cmd_sample(opts):
    process = _need(opts, "process")[0]
    spec = _chain(opts) if process == "chain" else None
    seed = _seed(opts)
    n = int(opts.get("replicas") or 1000)
    threads = int(opts["threads"])
    if process == "sibuya":
        alpha = _need(opts, "alpha")[0]
        draws = run_chunks(lambda g, k: sibuya_sample(g, alpha, k), n, seed, 0, threads)
    elif process == "dml":
        kind, alpha = _need(opts, "kind", "alpha")
        p = _rate_to_p(opts)
        draws = run_chunks(lambda g, k: dml_sample(g, kind, p, alpha, k), n, seed, 0, threads)
    elif process == "ml-waiting":
        alpha, lam = _need(opts, "alpha", "lam")
        draws = run_chunks(lambda g, k: ml_waiting_time_sample(g, alpha, lam, k), n, seed, 0, threads)
    elif process == "sibuya-counting":
        alpha = _need(opts, "alpha")[0]
        t = _as_int(opts, "t") if opts.get("t") is not None else _need(opts, "horizon")[0]
        step = PointMass(1) if alpha == 1.0 else Sibuya(alpha)
        draws = run_chunks(lambda g, k: counting_samples(g, step, [t], k)[:, 0], n, seed, 0, threads)
    elif process == "chain":
        horizon = _need(opts, "horizon")[0]
        markov = spec if isinstance(spec, MarkovSpec) else spec.markov
        init = _initial(opts, markov)
        draws = run_chunks(lambda g, k: sample_states(spec, g, init, [horizon], k)[:, 0], n, seed, 0, threads)
        _maybe_save(opts, spec)
        rows = [(i, markov.states[int(s)]) for i, s in enumerate(draws)]
        return "sample chain", ("replica", "state"), rows, {}
    else:
        raise ValidationError(f"unknown process {process!r}")
    return f"sample {process}", ("replica", "value"), list(enumerate(draws.tolist())), {}


def cmd_moments(opts):
    alpha, t1 = _need(opts, "alpha", "t1")
    t2 = opts.get("t2")
    t2 = t1 if t2 is None else t2
    m = sibuya_counting_moments(alpha, int(t1), int(t2))
    rows = [
        ("mean_t1", m.mean_t1), ("mean_t2", m.mean_t2), ("second_t1", m.second_t1),
        ("second_t2", m.second_t2), ("cross", m.cross), ("cov", m.cov),
    ]
    if m.var_t1 > 0 and m.var_t2 > 0:
        rows.append(("corr", m.corr))
    return "moments sibuya-counting", ("quantity", "value"), rows, {}


def cmd_solve(opts):
    if opts.get("forward"):
        alpha, lam, horizon = _need(opts, "alpha", "lam", "horizon")
        kmax = opts.get("kmax")
        kmax = horizon if kmax is None else kmax
        grid = nb_forward_solve(alpha, lam, horizon, kmax)
        rows = [(k, t, grid[k, t]) for t in range(horizon + 1) for k in range(kmax + 1)]
        return "solve forward", ("k", "t", "prob"), rows, {}
    spec, grid, jump, kernel = _backward(opts)
    states = spec.markov.states if not isinstance(spec, MarkovSpec) else spec.states
    v = grid.values
    rows = [(states[i], states[j], t, v[i, j, t]) for t in range(grid.horizon + 1)
            for i in range(grid.size) for j in range(grid.size)]
    return "solve backward", ("i", "j", "t", "prob"), rows, {}


def _backward(opts):
    spec = _chain(opts)
    horizon = _need(opts, "horizon")[0]
    if isinstance(spec, TimeChangeSpec):
        raise ValidationError("the backward system applies to type-B chains; got a time-change spec")
    if isinstance(spec, SemiMarkovSpec) and spec.kind != "B":
        raise ValidationError("the backward system applies to type-B chains; use --kind B")
    markov = spec if isinstance(spec, MarkovSpec) else spec.markov
    step = PointMass(1) if isinstance(spec, MarkovSpec) else spec.step
    jump = decompose(markov)
    kernel = FracKernel.from_step(step, horizon)
    _maybe_save(opts, spec)
    return spec, solve_backward(jump, kernel, horizon), jump, kernel


def cmd_residual(opts):
    _, grid, jump, kernel = _backward(opts)
    rows = [(t, float(np.abs(residual_backward(grid, jump, kernel, t)).max())) for t in range(grid.horizon + 1)]
    return "residual backward", ("t", "max_abs_residual"), rows, {}


def cmd_autocorr(opts):
    alpha, mean, var, s = _need(opts, "alpha", "mean", "var", "s")
    times = opts.get("times")
    if times is None:
        times = [_as_int(opts, "t") if opts.get("t") is not None else _need(opts, "t")[0]]
    rows = []
    for t in times:
        if t < s:
            raise ValidationError(f"need s <= t, got s={s}, t={t}")
        rows.append((t, timechange_autocorr(sibuya_counting_moments(alpha, int(s), int(t)), mean, var)))
    return "autocorr timechange", ("t", "rho"), rows, {}


def cmd_converge(opts):
    target, alpha, n_grid = _need(opts, "target", "alpha", "n")
    seed = _seed(opts)
    t = opts.get("t")
    t = 1.0 if t is None else float(t)
    replicas = int(opts.get("replicas") or 100_000)
    if target == "inverse-stable":
        report = sibuya_limit_experiment(ScalingExperiment(alpha, t, tuple(n_grid), replicas, seed), int(opts["threads"]))
    else:
        lam = _need(opts, "lam")[0]
        kind = opts.get("kind") or "B"
        report = frac_poisson_limit_experiment(kind, alpha, lam, t, n_grid, replicas, seed, int(opts["threads"]))
    return f"distance-report metric={report.metric}", ("n", "distance", "mc_stderr"), report.rows(), {
        "report": report
    }


COMMANDS = {
    "pmf": cmd_pmf,
    "sample": cmd_sample,
    "moments": cmd_moments,
    "solve": cmd_solve,
    "residual": cmd_residual,
    "autocorr": cmd_autocorr,
    "converge": cmd_converge,
}

_RECORDED = ("alpha", "p", "lam", "kind", "spec", "step_pmf", "initial", "horizon", "t", "process", "kmax",
             "x", "t1", "t2", "mean", "var", "s", "times", "target", "n", "replicas", "backward", "forward")


def run(argv=None) -> int:
    """Parse ``argv``, run the command and return the exit code."""
    try:
        args = build_parser().parse_args(argv)
        opts = _merge_config(args)
        schema, columns, rows, extra = COMMANDS[args.command](opts)
        if opts["format"] == "csv":
            text = csv_text(schema, columns, rows)
        else:
            params = {("lambda" if k == "lam" else k.replace("_", "-")): opts[k] for k in _RECORDED if opts.get(k) is not None}
            doc = {"command": args.command, "version": __version__, "schema": schema,
                   "seed": opts.get("seed"), "params": params,
                   "results": [dict(zip(columns, row)) for row in rows]}
            if "tail_bound" in extra:
                doc["tail_bound"] = extra["tail_bound"]
            if "report" in extra:
                doc["extras"] = extra["report"].extras
            text = json_text(doc)
        if opts.get("output"):
            atomic_write(opts["output"], text)
            where = opts["output"]
        else:
            sys.stdout.write(text)
            where = "stdout"
        seed = opts.get("seed")
        print(f"fracchain {args.command}: {len(rows)} rows -> {where} (seed={'none' if seed is None else seed})",
              file=sys.stderr)
        return EXIT_OK
    except NumericRangeError as exc:
        print(f"fracchain: numeric range error: {exc}", file=sys.stderr)
        return EXIT_RANGE
    except (ValidationError, FracChainError) as exc:
        print(f"fracchain: invalid input: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (TypeError, ValueError) as exc:
        print(f"fracchain: invalid input: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
