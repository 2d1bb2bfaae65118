"""Command-line interface.

Subcommands: ``models``, ``pc``, ``compare``, ``nml``, ``select``, ``sweep``.
Exit status is 0 on success, 1 for configuration or input errors and 2 for
numerical failures (non-convergence, non-integrable characteristic
functions).
"""

import argparse
import csv
import io
import json
import math
import os
import sys

from . import fourier_engine, oracle
from .closed_form import log_lpc_asymptotic, spec_lpc
from .errors import ConfigError, NMLError, NumericalError
from .mdl import Dataset, nml_code_length, select_model, sweep_asymptotic
from .models import MODEL_IDS, REGISTRY, Luckiness, ModelSpec, registry_get
from .quadrature import QuadConfig

PARAM_FLAGS = ("sigma2", "mean", "kappa", "shape", "beta")
PC_METHODS = ("auto", "closed-form", "fourier", "asymptotic", "oracle-quad", "oracle-mc", "theorem1-mc")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(f"{self.prog}: {message}")


# ---------------------------------------------------------------------------
# Parsing helpers
# ---------------------------------------------------------------------------

def _floats(text, what):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ConfigError(f"cannot parse {what} {text!r}") from None


def _ints(text, what):
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ConfigError(f"cannot parse {what} {text!r}") from None


def default_window(model_id, **params):
    """``[1, e]`` on half-line expectation domains, ``[0, 1]`` on the real line."""
    model = registry_get(model_id, **params)
    lo, hi = model.expectation_domain[0]
    return (1.0, math.e) if lo == 0.0 and math.isinf(hi) else (0.0, 1.0)


def _spec_from(model_id, params, window):
    if model_id not in REGISTRY:
        raise ConfigError(f"unknown model {model_id!r}; valid ids: {', '.join(MODEL_IDS)}")
    names = {name for name, _, _ in REGISTRY[model_id].params}
    used = {k: v for k, v in params.items() if k in names and v is not None}
    if window is None:
        window = default_window(model_id, **used)
    if len(window) != 2:
        raise ConfigError(f"window needs two numbers, got {window}")
    return ModelSpec(model_id, used, Luckiness.indicator(*window))


def _parse_candidate(text):
    # "model;param=value;window=lo,hi"
    parts = [p.strip() for p in text.split(";") if p.strip()]
    if not parts:
        raise ConfigError("empty candidate")
    params, window = {}, None
    for token in parts[1:]:
        key, sep, value = token.partition("=")
        if not sep:
            raise ConfigError(f"candidate token {token!r} is not key=value")
        if key == "window":
            window = _floats(value, "window")
        else:
            params[key] = _floats(value, key)[0]
    return _spec_from(parts[0], params, window)


def _candidate_from_json(obj):
    return _spec_from(obj["model"], obj.get("params", {}), obj.get("window"))


def _load_config(path):
    if path is None:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    if not isinstance(cfg, dict):
        raise ConfigError("config file must hold a JSON object")
    return cfg


def _merged(args):
    """Command-line flags override JSON config keys of the same name."""
    cfg = _load_config(getattr(args, "config", None))
    merged = dict(cfg)
    for key, value in vars(args).items():
        if value is not None:
            merged[key] = value
    return merged


def _seed(opts):
    if opts.get("seed") is not None:
        return int(opts["seed"])
    env = os.environ.get("NMLKIT_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ConfigError(f"NMLKIT_SEED must be an integer, got {env!r}") from None
    return 0


def _quad_config(opts):
    kw = {"seed": _seed(opts)}
    if opts.get("mc_samples") is not None:
        kw["mc_samples"] = int(opts["mc_samples"])
    if opts.get("rel_tol") is not None:
        kw["rel_tol"] = float(opts["rel_tol"])
    return QuadConfig(**kw)


def _spec_from_opts(opts):
    if not opts.get("model"):
        raise ConfigError("--model is required")
    window = opts.get("window")
    if isinstance(window, str):
        window = _floats(window, "window")
    params = {k: opts.get(k) for k in PARAM_FLAGS}
    return _spec_from(opts["model"], params, window)


# ---------------------------------------------------------------------------
# Output
# ---------------------------------------------------------------------------

def _csv_cell(value):
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        if math.isnan(value):
            return "nan"
        return repr(value)
    return "" if value is None else str(value)


def _json_row(row):
    out, nonfinite = {}, []
    for key, value in row.items():
        if isinstance(value, float) and not math.isfinite(value):
            out[key] = None
            nonfinite.append({"field": key, "value": _csv_cell(value)})
        else:
            out[key] = value
    if nonfinite:
        out["nonfinite"] = nonfinite
    return out


def emit(rows, fmt, stream, extra=None):
    """Write ``rows`` (list of dicts) as CSV or JSON."""
    if fmt == "json":
        payload = {"rows": [_json_row(r) for r in rows]}
        if extra:
            payload.update(extra)
        stream.write(json.dumps(payload, indent=2) + "\n")
        return
    if not rows:
        return
    writer = csv.writer(stream, lineterminator="\n")
    header = list(rows[0])
    writer.writerow(header)
    for r in rows:
        writer.writerow([_csv_cell(r.get(k)) for k in header])


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def _pc(spec, n, method, cfg):
    model = spec.model()
    w = spec.luckiness
    if method == "auto":
        return spec_lpc(spec, n, "auto", cfg)
    if method == "closed-form":
        return spec_lpc(spec, n, "closed_form", cfg)
    if method == "fourier":
        return spec_lpc(spec, n, "fourier", cfg)
    if method == "asymptotic":
        return log_lpc_asymptotic(model, w, n, cfg)
    if method == "oracle-quad":
        return oracle.lpc_oracle_quadrature(model, w, n, oracle.OracleConfig(quad=cfg))
    if method == "oracle-mc":
        refs = oracle.proposal_grid(model, w, 12)
        return oracle.lpc_oracle_mc(model, w, n, oracle.OracleConfig("importance_sampling", refs, quad=cfg))
    if method == "theorem1-mc":
        return fourier_engine.lpc_theorem1_mc(model, w, n, cfg)
    raise ConfigError(f"unknown method {method!r}")


def _pc_row(spec, n, res):
    return {"model": spec.model_id,
            "params": ";".join(f"{k}={v:g}" for k, v in spec.model().fixed_params.items()),
            "window": ",".join(f"{v:g}" for v in spec.luckiness.box[0]),
            "n": n, "method": res.method, "log_lpc": res.log_value,
            "error_estimate": res.error_estimate}


def cmd_models(opts, out):
    rows = []
    for model_id in MODEL_IDS:
        model = registry_get(model_id)
        rows.append({"model": model_id, "name": model.label.split(" (")[0],
                     "params": ",".join(name for name, _, _ in REGISTRY[model_id].params),
                     "statistic": model.table_row.get("statistic", ""),
                     "partition": model.table_row.get("partition", ""),
                     "complexity": model.table_row.get("complexity", "")})
    emit(rows, opts["format"], out)


def cmd_pc(opts, out):
    spec = _spec_from_opts(opts)
    cfg = _quad_config(opts)
    rows = []
    for n in _ints(str(opts.get("n") or ""), "n"):
        rows.append(_pc_row(spec, n, _pc(spec, n, opts.get("method", "auto"), cfg)))
    if not rows:
        raise ConfigError("--n is required")
    emit(rows, opts["format"], out)


def cmd_compare(opts, out):
    spec = _spec_from_opts(opts)
    cfg = _quad_config(opts)
    model = spec.model()
    rows = []
    for n in _ints(str(opts.get("n") or ""), "n"):
        row = {"model": spec.model_id, "n": n}
        for label, method in (("closed_form", "closed-form"), ("fourier", "fourier"),
                              ("oracle", "oracle-quad" if n * model.data_dim <= 3 else "oracle-mc")):
            try:
                res = _pc(spec, n, method, cfg)
                row[label] = res.log_value
                row[label + "_error"] = res.error_estimate
            except NMLError as exc:
                row[label] = math.nan
                row[label + "_error"] = math.nan
                row.setdefault("notes", [])
                row["notes"].append(f"{label}: {type(exc).__name__}")
        row["notes"] = "; ".join(row.pop("notes", []))
        rows.append(row)
    emit(rows, opts["format"], out)


def cmd_nml(opts, out):
    spec = _spec_from_opts(opts)
    if not opts.get("data"):
        raise ConfigError("--data is required")
    data = Dataset.from_csv(opts["data"])
    method = {"closed-form": "closed_form"}.get(opts.get("method", "auto"), opts.get("method", "auto"))
    res = nml_code_length(spec, data, method, _quad_config(opts))
    emit([res.as_row()], opts["format"], out)


def cmd_select(opts, out):
    if not opts.get("data"):
        raise ConfigError("--data is required")
    specs = [_parse_candidate(c) for c in opts.get("candidate") or []]
    specs += [_candidate_from_json(c) for c in opts.get("candidates", [])]
    data = Dataset.from_csv(opts["data"])
    method = {"closed-form": "closed_form"}.get(opts.get("method", "auto"), opts.get("method", "auto"))
    report = select_model(specs, data, _quad_config(opts), method)
    emit(report.rows(), opts["format"], out, {"dataset": report.dataset, "config": report.config})


def cmd_sweep(opts, out):
    spec = _spec_from_opts(opts)
    n_list = _ints(str(opts.get("n_list") or ""), "n list")
    rows = sweep_asymptotic(spec, n_list, _quad_config(opts))
    emit(rows, opts["format"], out)


def build_parser():
    parser = _Parser(prog="nmlkit", description="NML code lengths and luckiness parametric complexities.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def common(p, model=True):
        p.add_argument("--format", choices=("csv", "json"), default=None)
        p.add_argument("--config", help="JSON file with defaults for any flag")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--mc-samples", type=int, default=None)
        p.add_argument("--rel-tol", type=float, default=None)
        if model:
            p.add_argument("--model", choices=MODEL_IDS, default=None)
            for name in PARAM_FLAGS:
                p.add_argument(f"--{name}", type=float, default=None)
            p.add_argument("--window", default=None, help="lo,hi of the indicator luckiness")

    p = sub.add_parser("models", help="list registry models")
    common(p, model=False)
    p = sub.add_parser("pc", help="log LPC by a chosen method")
    common(p)
    p.add_argument("--n", default=None, help="sample size(s), comma separated")
    p.add_argument("--method", choices=PC_METHODS, default=None)
    p = sub.add_parser("compare", help="closed form vs Fourier vs oracle")
    common(p)
    p.add_argument("--n", default=None)
    p = sub.add_parser("nml", help="NML code length of a dataset")
    common(p)
    p.add_argument("--data", default=None)
    p.add_argument("--method", choices=("auto", "closed-form", "fourier"), default=None)
    p = sub.add_parser("select", help="rank candidate models on a dataset")
    common(p, model=False)
    p.add_argument("--data", default=None)
    p.add_argument("--candidate", action="append", default=None,
                   help="'model;param=value;window=lo,hi' (repeatable)")
    p.add_argument("--method", choices=("auto", "closed-form", "fourier"), default=None)
    p = sub.add_parser("sweep", help="exact vs asymptotic log LPC over n")
    common(p)
    p.add_argument("--n-list", default=None)
    return parser


COMMANDS = {"models": cmd_models, "pc": cmd_pc, "compare": cmd_compare,
            "nml": cmd_nml, "select": cmd_select, "sweep": cmd_sweep}


def _attach_windows(argv):
    # argparse reads "--window -8,8" as two options; bind the value explicitly
    argv = list(sys.argv[1:] if argv is None else argv)
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok == "--window" and i + 1 < len(argv) and argv[i + 1][:1] == "-" and argv[i + 1][1:2].isdigit():
            out.append(f"--window={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def run(argv=None, out=None, err=None):
    """Run the CLI and return its exit code."""
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(_attach_windows(argv))
        if args.command is None:
            raise ConfigError("a subcommand is required: " + ", ".join(COMMANDS))
        opts = _merged(args)
        opts.setdefault("format", "csv")
        opts.setdefault("method", "auto")
        COMMANDS[args.command](opts, out)
    except NumericalError as exc:
        err.write(f"error: {type(exc).__name__}: {exc}\n")
        return 2
    except NMLError as exc:
        err.write(f"error: {type(exc).__name__}: {exc}\n")
        return 1
    except (KeyError, TypeError, ValueError) as exc:
        err.write(f"error: malformed input: {exc}\n")
        return 1
    return 0


def main():
    sys.exit(run())


def run_capture(argv):
    """Run the CLI and return ``(code, stdout, stderr)``; convenient for tests."""
    out, err = io.StringIO(), io.StringIO()
    code = run(argv, out, err)
    return code, out.getvalue(), err.getvalue()
