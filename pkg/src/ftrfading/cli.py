"""Command-line interface: ``ftr {eval,sweep,validate,selftest}``.

Exit codes: 0 success, 1 validation rejected (or selftest failure),
2 usage error, 3 numerical failure (the failing kernel is named).
"""
from __future__ import annotations

import argparse
import contextlib
import csv
import functools
import io
import json
import os
import secrets
import shlex
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import metrics, presets, selftest
from .errors import DomainError, FtrError
from .ftr import FtrParams, SeriesControl, build_coefficients, ftr_cdf, ftr_pdf, linear_to_db, db_to_linear
from .montecarlo import DEFAULT_KS_CONTROL, ks_test

METRICS = ("pdf", "cdf", "capacity", "ber_exact", "ber_asymptotic")
SWEEP_PARAMS = ("m", "K", "delta", "avg_snr_db")
FULL_GRID = {
    "m": (0.5, 1.5, 5.5, 10.0, 25.5),
    "K": (0.0, 1.0, 5.0, 15.0, 30.0),
    "delta": (0.0, 0.35, 0.5, 0.9, 1.0),
}
# the CLI evaluates arbitrary parameters, so its default budget is generous
CLI_CONTROL = SeriesControl(max_terms=5000, rel_tol=1e-12)

# flag pairs where giving either on the command line overrides both config keys
_EXCLUSIVE = (("snr", "snr_db"), ("table1", "full"), ("figure", "param"))


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def _float_list(text):
    return [float(v) for v in str(text).split(",") if v.strip()]


def _common(p):
    p.add_argument("--config", help="key = value file mirroring the flags; flags win")
    p.add_argument("--format", choices=("csv", "jsonl"), default=None, help="output encoding (default csv)")
    p.add_argument("--max-terms", type=int, default=None, help="series term cap (env FTR_MAX_TERMS)")
    p.add_argument("--rel-tol", type=float, default=None, help="series tolerance (env FTR_REL_TOL)")
    p.add_argument("--workers", type=int, default=None, help="worker threads")
    p.add_argument("--timing", action="store_true", default=None, help="add a wall_time column")


def _channel(p):
    p.add_argument("--m", type=float, default=None, help="shadowing severity m > 0")
    p.add_argument("--k", dest="K", type=float, default=None, help="specular-to-diffuse power ratio K >= 0")
    p.add_argument("--delta", type=float, default=None, help="specular balance in [0, 1]")
    p.add_argument("--snr", type=float, default=None, help="average SNR, linear")
    p.add_argument("--snr-db", type=float, default=None, help="average SNR in dB")
    p.add_argument("--mod", default=None, choices=sorted(metrics.MODULATIONS), help="modulation for BER (default bpsk)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ftr", description="Fluctuating two-ray fading statistics")
    sub = parser.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("eval", help="evaluate one metric")
    _common(ev)
    _channel(ev)
    ev.add_argument("--metric", choices=METRICS, default=None)
    ev.add_argument("--x", type=_float_list, default=None, help="SNR point(s) for pdf/cdf, comma separated")

    sw = sub.add_parser("sweep", help="evaluate a metric along one parameter")
    _common(sw)
    _channel(sw)
    sw.add_argument("--figure", choices=sorted(presets.FIGURES), default=None, help="load a figure preset")
    sw.add_argument("--param", choices=SWEEP_PARAMS, default=None)
    sw.add_argument("--values", default=None, help="comma list or start:stop:step (stop inclusive)")
    sw.add_argument("--metric", choices=METRICS, default=None)
    sw.add_argument("--x", type=float, default=None, help="SNR point for pdf/cdf sweeps")

    va = sub.add_parser("validate", help="KS goodness-of-fit against simulation")
    _common(va)
    va.add_argument("--table1", action="store_true", default=None, help="the six published rows")
    va.add_argument("--full", action="store_true", default=None, help="the 125-point test grid")
    va.add_argument("--v", type=int, default=None, help="samples per row (default 10000)")
    va.add_argument("--alpha", type=float, default=None, help="significance level (default 0.05)")
    va.add_argument("--seed", type=int, default=None, help="random seed (printed when omitted)")

    st = sub.add_parser("selftest", help="run the embedded oracle suite")
    st.add_argument("--format", choices=("csv", "jsonl"), default=None)
    st.add_argument("--inject-branch-fault", action="store_true", help=argparse.SUPPRESS)
    return parser


# ---------------------------------------------------------------------------
# Config files
# ---------------------------------------------------------------------------

def read_config(path) -> dict:
    """Parse ``key = value`` lines; ``#`` comments and ``[section]`` headers are ignored."""
    out = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip() if not raw.lstrip().startswith(("'", '"')) else raw.strip()
            if not line or (line.startswith("[") and line.endswith("]")):
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key = value")
            key, value = (s.strip() for s in line.split("=", 1))
            parts = shlex.split(value) if value else [""]
            out[key.replace("-", "_")] = parts[0] if len(parts) == 1 else " ".join(parts)
    return out


def _action_types(subparser) -> dict:
    types = {}
    for action in subparser._actions:
        if action.dest in ("help", "config"):
            continue
        if isinstance(action, argparse._StoreTrueAction):
            types[action.dest] = "flag"
        else:
            types[action.dest] = (action.type or str, action.choices)
    return types


def _coerce(key, raw, spec):
    if spec == "flag":
        lowered = str(raw).lower()
        if lowered in ("1", "true", "yes", "on"):
            return True
        if lowered in ("0", "false", "no", "off"):
            return None
        raise UsageError(f"config key {key!r} expects a boolean, got {raw!r}")
    kind, choices = spec
    try:
        value = kind(raw)
    except (TypeError, ValueError):
        raise UsageError(f"config key {key!r}: cannot parse {raw!r}") from None
    if choices is not None and value not in choices:
        raise UsageError(f"config key {key!r}: {value!r} not in {sorted(choices)}")
    return value


def merge_config(args, subparser) -> None:
    if not getattr(args, "config", None):
        return
    try:
        config = read_config(args.config)
    except OSError as exc:
        raise UsageError(f"cannot read config: {exc}") from None
    types = _action_types(subparser)
    aliases = {"k": "K", "snr_linear": "snr"}
    config = {aliases.get(k, k): v for k, v in config.items()}
    blocked = set()
    for group in _EXCLUSIVE:
        if any(getattr(args, name, None) is not None for name in group):
            blocked.update(group)
    for key, raw in config.items():
        if key not in types:
            raise UsageError(f"unknown config key {key!r}")
        if key in blocked or getattr(args, key, None) is not None:
            continue
        setattr(args, key, _coerce(key, raw, types[key]))


# ---------------------------------------------------------------------------
# Evaluation helpers
# ---------------------------------------------------------------------------

def series_control(args, base: SeriesControl = CLI_CONTROL) -> SeriesControl:
    kwargs = {"max_terms": base.max_terms, "rel_tol": base.rel_tol, "tail_window": base.tail_window}
    for key, var, kind in (("max_terms", "FTR_MAX_TERMS", int), ("rel_tol", "FTR_REL_TOL", float)):
        if os.environ.get(var):
            try:
                kwargs[key] = kind(os.environ[var])
            except ValueError:
                raise UsageError(f"{var}={os.environ[var]!r} is not a valid {kind.__name__}") from None
    if args.max_terms is not None:
        kwargs["max_terms"] = args.max_terms
    if args.rel_tol is not None:
        kwargs["rel_tol"] = args.rel_tol
    try:
        return SeriesControl(**kwargs)
    except DomainError as exc:
        raise UsageError(str(exc)) from None


@functools.lru_cache(maxsize=512)
def _table(params: FtrParams, ctl: SeriesControl):
    return build_coefficients(params, ctl)


def _require(args, *names):
    missing = [n for n in names if getattr(args, n, None) is None]
    if missing:
        flags = ", ".join("--" + ("k" if n == "K" else n.replace("_", "-")) for n in missing)
        raise UsageError(f"missing required option(s): {flags}")


def _avg_snr(args) -> float:
    if args.snr is not None and args.snr_db is not None:
        raise UsageError("--snr and --snr-db are mutually exclusive")
    if args.snr is None and args.snr_db is None:
        raise UsageError("one of --snr or --snr-db is required")
    return float(args.snr) if args.snr is not None else float(db_to_linear(args.snr_db))


def _params(m, K, delta, avg_snr) -> FtrParams:
    try:
        return FtrParams(float(m), float(K), float(delta), float(avg_snr))
    except DomainError as exc:
        raise UsageError(str(exc)) from None


def evaluate(metric: str, params: FtrParams, ctl: SeriesControl, mod: metrics.ModulationScheme,
             x: float | None = None, timing: bool = False) -> dict:
    """One self-describing output record."""
    start = time.perf_counter()
    record = {
        "metric": metric, "m": params.m, "K": params.K, "delta": params.delta,
        "avg_snr": params.avg_snr, "avg_snr_db": float(linear_to_db(params.avg_snr)),
    }
    if metric in ("pdf", "cdf"):
        record["x"] = x
    if metric.startswith("ber"):
        record["modulation"] = mod.name
    if metric == "ber_asymptotic":
        value, bound, terms = metrics.ber_asymptotic(params, mod), 0.0, 1
        record["in_regime"] = metrics.asymptote_in_regime(params)
    else:
        table = _table(params, ctl)
        if metric == "pdf":
            value, bound, terms = ftr_pdf(x, table), table.truncation_error_bound, len(table)
        elif metric == "cdf":
            value, bound, terms = ftr_cdf(x, table), table.truncation_error_bound, len(table)
        else:
            res = metrics.capacity(table, ctl) if metric == "capacity" else metrics.ber_exact(table, mod, ctl)
            value, bound, terms = res.value, res.truncation_bound, res.terms_used
    record.update(value=float(value), truncation_bound=float(bound), terms_used=int(terms))
    if timing:
        record["wall_time"] = time.perf_counter() - start
    return record


def write_records(records, fmt: str, stream) -> None:
    records = list(records)
    if fmt == "jsonl":
        for rec in records:
            stream.write(json.dumps(rec) + "\n")
        return
    fields = []
    for rec in records:
        fields.extend(k for k in rec if k not in fields)
    writer = csv.DictWriter(stream, fieldnames=fields, restval="", lineterminator="\n")
    writer.writeheader()
    for rec in records:
        writer.writerow({k: (repr(float(v)) if isinstance(v, float) else v) for k, v in rec.items()})


def parse_values(spec: str) -> list[float]:
    try:
        if ":" in spec:
            start, stop, step = (float(v) for v in spec.split(":"))
            if step <= 0 or stop < start:
                raise ValueError
            count = int(np.floor((stop - start) / step + 1e-9)) + 1
            return [float(v) for v in np.round(start + step * np.arange(count), 12)]
        return _float_list(spec)
    except ValueError:
        raise UsageError(f"bad --values {spec!r}; use a,b,c or start:stop:step") from None


def _pool_map(fn, items, workers):
    if not workers or workers <= 1:
        return [fn(i) for i in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_eval(args) -> list[dict]:
    _require(args, "metric", "m", "K", "delta")
    params = _params(args.m, args.K, args.delta, _avg_snr(args))
    mod = metrics.modulation(args.mod or "bpsk")
    ctl = series_control(args)
    if args.metric in ("pdf", "cdf"):
        _require(args, "x")
        xs = args.x if isinstance(args.x, list) else [float(args.x)]
        if any(v < 0 for v in xs):
            raise UsageError("--x must be >= 0")
        return [evaluate(args.metric, params, ctl, mod, x, bool(args.timing)) for x in xs]
    return [evaluate(args.metric, params, ctl, mod, None, bool(args.timing))]


@dataclass(frozen=True)
class SweepSpec:
    param: str
    values: tuple
    fixed: dict
    metric: str


def _sweep_jobs(args):
    """Ordered list of (metric, params, x, extra_fields)."""
    ctl = series_control(args)
    if args.figure is not None:
        if args.param is not None:
            raise UsageError("--figure and --param are mutually exclusive")
        fig = presets.figure(args.figure)
        jobs = []
        for m, K, delta in fig.curves:
            for point in fig.axis:
                if fig.axis_name == "x":
                    jobs.append((fig.metric, _params(m, K, delta, fig.avg_snr), point, {"figure": fig.name}))
                else:
                    jobs.append((fig.metric, _params(m, K, delta, float(db_to_linear(point))), None,
                                 {"figure": fig.name, "asymptote": fig.asymptote}))
        return jobs, ctl, metrics.modulation(args.mod or fig.modulation)

    _require(args, "param", "values", "metric")
    given = {"m": args.m, "K": args.K, "delta": args.delta}
    if args.param == "avg_snr_db":
        if args.snr is not None or args.snr_db is not None:
            raise UsageError("avg_snr_db is swept; do not also pass --snr/--snr-db")
        _require(args, "m", "K", "delta")
    else:
        if given[args.param] is not None:
            name = "k" if args.param == "K" else args.param
            raise UsageError(f"{args.param} is swept; do not also pass --{name}")
        given["avg_snr"] = _avg_snr(args)
        _require(args, *(n for n in ("m", "K", "delta") if n != args.param))
    spec = SweepSpec(args.param, tuple(parse_values(args.values)),
                     {k: v for k, v in given.items() if v is not None}, args.metric)
    if spec.metric in ("pdf", "cdf"):
        _require(args, "x")
    jobs = []
    for value in spec.values:
        fields = dict(spec.fixed)
        if spec.param == "avg_snr_db":
            fields["avg_snr"] = float(db_to_linear(value))
        else:
            fields[spec.param] = value
        jobs.append((spec.metric, _params(fields["m"], fields["K"], fields["delta"], fields["avg_snr"]),
                     args.x, {}))
    return jobs, ctl, metrics.modulation(args.mod or "bpsk")


def cmd_sweep(args) -> list[dict]:
    jobs, ctl, mod = _sweep_jobs(args)
    timing = bool(args.timing)

    def run(job):
        metric, params, x, extra = job
        asymptote = extra.pop("asymptote", False) if extra else False
        rec = dict(extra)
        rec.update(evaluate(metric, params, ctl, mod, x, timing))
        if asymptote:
            rec["ber_asymptotic"] = metrics.ber_asymptotic(params, mod)
            rec["asymptote_in_regime"] = metrics.asymptote_in_regime(params)
        return rec

    return _pool_map(run, [(a, b, c, dict(d)) for a, b, c, d in jobs], args.workers)


def cmd_validate(args, stderr) -> tuple[list[dict], int]:
    if bool(args.table1) == bool(args.full):
        raise UsageError("choose exactly one of --table1 or --full")
    seed = args.seed
    if seed is None:
        seed = secrets.randbits(32)
        stderr.write(f"seed: {seed}\n")
    v = args.v if args.v is not None else 10_000
    alpha = args.alpha if args.alpha is not None else 0.05
    if v < 100:
        raise UsageError("--v must be at least 100")
    if not 0 < alpha < 1:
        raise UsageError("--alpha must lie in (0, 1)")
    ctl = series_control(args, DEFAULT_KS_CONTROL)
    if args.table1:
        rows = presets.TABLE1
    else:
        rows = [(m, K, d) for m in FULL_GRID["m"] for K in FULL_GRID["K"] for d in FULL_GRID["delta"]]

    def run(row):
        start = time.perf_counter()
        params = FtrParams(*row, avg_snr=1.0)
        rep = ks_test(params, v, alpha, seed, ctl=ctl)
        rec = {"m": params.m, "K": params.K, "delta": params.delta, "avg_snr": params.avg_snr,
               "v": v, "alpha": alpha, "seed": seed, "statistic": rep.statistic,
               "critical": rep.critical, "accepted": rep.accepted}
        if args.timing:
            rec["wall_time"] = time.perf_counter() - start
        return rec

    records = _pool_map(run, rows, args.workers)
    rejected = [r for r in records if not r["accepted"]]
    summary = {"rows": len(records), "accepted": len(records) - len(rejected), "seed": seed, "v": v,
               "alpha": alpha, "rejected": [[r["m"], r["K"], r["delta"], r["statistic"]] for r in rejected]}
    stderr.write(json.dumps(summary) + "\n")
    return records, (1 if rejected else 0)


def cmd_selftest(args, stderr) -> tuple[list[dict], int]:
    start = time.perf_counter()
    results = selftest.run(flip_branch=args.inject_branch_fault)
    records = [{"invariant": r.name, "passed": r.passed, "detail": r.detail} for r in results]
    failed = [r.name for r in results if not r.passed]
    stderr.write(f"{len(results) - len(failed)}/{len(results)} invariants passed "
                 f"in {time.perf_counter() - start:.1f} s\n")
    for name in failed:
        stderr.write(f"FAILED: {name}\n")
    return records, (1 if failed else 0)


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        with contextlib.redirect_stderr(stderr), contextlib.redirect_stdout(stdout):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    subparser = parser._subparsers._group_actions[0].choices[args.command]
    try:
        merge_config(args, subparser)
        fmt = args.format or "csv"
        if args.command == "eval":
            records, code = cmd_eval(args), 0
        elif args.command == "sweep":
            records, code = cmd_sweep(args), 0
        elif args.command == "validate":
            records, code = cmd_validate(args, stderr)
        else:
            records, code = cmd_selftest(args, stderr)
    except UsageError as exc:
        subparser.print_usage(stderr)
        stderr.write(f"ftr {args.command}: error: {exc}\n")
        return 2
    except FtrError as exc:
        # caller input is validated up front, so anything here is numerical
        stderr.write(f"ftr {args.command}: numerical failure in {exc.kernel or 'unknown kernel'}: {exc}\n")
        return 3
    except (OverflowError, ArithmeticError) as exc:
        stderr.write(f"ftr {args.command}: numerical failure: {exc}\n")
        return 3
    buf = io.StringIO()
    write_records(records, fmt, buf)
    stdout.write(buf.getvalue())
    return code


def main_entry():
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
