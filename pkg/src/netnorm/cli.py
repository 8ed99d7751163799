"""Command-line interface: ``netnorm {describe,test,simulate,diagnose}``.

Exit codes: 0 success, 1 rejection under ``--fail-on-reject``, 2 usage or
data error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import __version__
from .errors import NetnormError
from .io import IngestOptions, load_network, network_to_json
from .network import align
from .opnorm import SolverOptions
from .randomization import format_reports, run_battery
from .simulation import (
    PRESETS,
    STUDY_OPTIONS,
    model_from_spec,
    population_diagnostics,
    power_study,
)
from .statistics import StatisticOptions, describe, format_summaries, parse_statistics

log = logging.getLogger("netnorm")


class UsageError(Exception):
    pass


def _threads_default() -> int:
    raw = os.environ.get("NETNORM_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


# command -> {option: default}; also the set of keys a --config file may use
DEFAULTS = {
    "describe": {"input": None, "a": None, "b": None, "format": "text", "out": None,
                 "clustering": "standard", "symmetrize": "or", "with_network": False},
    "test": {"a": None, "b": None, "stats": "all", "R": 999, "alpha": 0.05, "seed": 0,
             "format": "text", "out": None, "threads": None, "fail_on_reject": False,
             "clustering": "standard", "symmetrize": "or", "sdp_restarts": 5, "sdp_tol": 1e-7,
             "sdp": None},
    "simulate": {"preset": None, "n": None, "f1": None, "f2": None, "trials": 200, "R": 999,
                 "alpha": 0.05, "seed": 0, "stats": "t22,s_inf1", "format": "text", "out": None,
                 "threads": None, "clustering": "standard", "sdp_restarts": 1, "sdp_tol": 1e-7,
                 "sdp": None},
    "diagnose": {"preset": None, "n": None, "f1": None, "f2": None, "format": "text", "out": None,
                 "sdp_restarts": 5, "sdp_tol": 1e-7, "sdp": None},
}


def _add_common(p, *, formats=("text", "csv", "json")):
    p.add_argument("--config", type=Path, help="JSON file of option values; flags override it")
    p.add_argument("--format", choices=formats)
    p.add_argument("--out", type=Path, help="write output here instead of stdout")


def _add_solver(p):
    p.add_argument("--sdp-restarts", type=int, dest="sdp_restarts")
    p.add_argument("--sdp-tol", type=float, dest="sdp_tol")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="netnorm", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"netnorm {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("describe", help="degree, centrality, clustering and diameter summaries")
    _add_common(p)
    p.add_argument("--input", action="append", help="network file (repeatable)")
    p.add_argument("--a", help="first network file")
    p.add_argument("--b", help="second network file")
    p.add_argument("--clustering", choices=("standard", "literal"))
    p.add_argument("--symmetrize", choices=("or", "and", "strict"))
    p.add_argument("--with-network", action="store_true", default=None, dest="with_network",
                   help="include the parsed weight matrix in JSON output")

    p = sub.add_parser("test", help="randomization test of two networks")
    _add_common(p)
    p.add_argument("--a", help="first network file")
    p.add_argument("--b", help="second network file")
    p.add_argument("--stats", help="comma-separated statistics, or 'all'")
    p.add_argument("--R", type=int, dest="R")
    p.add_argument("--alpha", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--threads", type=int)
    p.add_argument("--fail-on-reject", action="store_true", default=None, dest="fail_on_reject")
    p.add_argument("--clustering", choices=("standard", "literal"))
    p.add_argument("--symmetrize", choices=("or", "and", "strict"))
    _add_solver(p)

    p = sub.add_parser("simulate", help="Monte Carlo power study")
    _add_common(p, formats=("text", "json"))
    p.add_argument("--preset", choices=sorted(PRESETS))
    p.add_argument("--n", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--R", type=int, dest="R")
    p.add_argument("--alpha", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--stats")
    p.add_argument("--threads", type=int)
    p.add_argument("--clustering", choices=("standard", "literal"))
    _add_solver(p)

    p = sub.add_parser("diagnose", help="population-level norms and null scales for two models")
    _add_common(p, formats=("text", "json"))
    p.add_argument("--preset", choices=sorted(PRESETS))
    p.add_argument("--n", type=int)
    p.add_argument("--f1", help="model file: JSON spec or CSV link-probability matrix")
    p.add_argument("--f2", help="model file: JSON spec or CSV link-probability matrix")
    _add_solver(p)
    return parser


def resolve_config(args: argparse.Namespace) -> dict:
    """Merge command defaults, the ``--config`` file, then explicit flags."""
    defaults = DEFAULTS[args.command]
    cfg = dict(defaults)
    if getattr(args, "config", None):
        try:
            loaded = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from None
        if not isinstance(loaded, dict):
            raise UsageError("config must be a JSON object")
        loaded = {k.replace("-", "_"): v for k, v in loaded.items()}
        loaded = {("stats" if k == "statistics" else k): v for k, v in loaded.items()}
        unknown = sorted(set(loaded) - set(defaults))
        if unknown:
            raise UsageError(f"unknown config key(s) for {args.command}: {', '.join(unknown)}")
        cfg.update(loaded)
    for key in defaults:
        value = getattr(args, key, None)
        if value is not None:
            cfg[key] = value
    if "threads" in cfg and cfg["threads"] is None:
        cfg["threads"] = _threads_default()
    return cfg


def _solver(cfg) -> SolverOptions:
    extra = dict(cfg.get("sdp") or {})
    extra.setdefault("restarts", cfg["sdp_restarts"])
    extra.setdefault("tol", cfg["sdp_tol"])
    return SolverOptions.from_dict(extra)


def _emit(text: str, out) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _ingest(cfg) -> IngestOptions:
    return IngestOptions(symmetrize=cfg.get("symmetrize", "or"))


def cmd_describe(cfg) -> int:
    paths = list(cfg["input"] or [])
    if isinstance(cfg["input"], str):
        paths = [cfg["input"]]
    paths += [p for p in (cfg["a"], cfg["b"]) if p]
    if not paths:
        raise UsageError("describe needs --input (or --a/--b)")
    names = [Path(p).stem for p in paths]
    if len(set(names)) != len(names):
        names = [str(p) for p in paths]
    nets = {name: load_network(p, _ingest(cfg)) for name, p in zip(names, paths)}
    summaries = {name: describe(net, clustering=cfg["clustering"]) for name, net in nets.items()}
    fmt = cfg["format"]
    if fmt == "json":
        doc = {}
        for name, s in summaries.items():
            entry = s.to_dict()
            if cfg["with_network"]:
                entry["network"] = network_to_json(nets[name])
            doc[name] = entry
        text = json.dumps(doc, indent=2) + "\n"
    elif fmt == "csv":
        fields = list(next(iter(summaries.values())).to_dict())
        rows = [",".join(["network"] + fields)]
        rows += [",".join([name] + [str(v) for v in s.to_dict().values()]) for name, s in summaries.items()]
        text = "\n".join(rows) + "\n"
    else:
        text = format_summaries(summaries)
    _emit(text, cfg["out"])
    return 0


def cmd_test(cfg) -> int:
    if not cfg["a"] or not cfg["b"]:
        raise UsageError("test needs --a and --b")
    stats = parse_statistics(cfg["stats"])
    pair = align(load_network(cfg["a"], _ingest(cfg)), load_network(cfg["b"], _ingest(cfg)))
    options = StatisticOptions(clustering=cfg["clustering"], solver=_solver(cfg))
    reports = run_battery(pair, stats, int(cfg["R"]), float(cfg["alpha"]), int(cfg["seed"]),
                          options, threads=int(cfg["threads"]))
    _emit(format_reports(reports, cfg["format"], max_reference=1000), cfg["out"])
    if cfg["fail_on_reject"] and any(r.reject for r in reports):
        return 1
    return 0


def _load_model(ref, n):
    if isinstance(ref, dict):
        return model_from_spec(ref, n)
    path = Path(ref)
    if path.suffix.lower() == ".json":
        return model_from_spec(json.loads(path.read_text()), n)
    return model_from_spec({"kind": "matrix", "path": str(path)}, n)


def _models(cfg):
    if cfg["preset"]:
        if cfg["n"] is None:
            raise UsageError("--preset needs --n")
        return PRESETS[cfg["preset"]](int(cfg["n"]))
    if cfg["f1"] is None or cfg["f2"] is None:
        raise UsageError("give --preset/--n or both model specs f1 and f2")
    return _load_model(cfg["f1"], cfg["n"]), _load_model(cfg["f2"], cfg["n"])


def cmd_simulate(cfg) -> int:
    f1, f2 = _models(cfg)
    stats = parse_statistics(cfg["stats"])
    options = StatisticOptions(clustering=cfg["clustering"], solver=_solver(cfg),
                               spectral_method=STUDY_OPTIONS.spectral_method)
    result = power_study(f1, f2, int(cfg["trials"]), int(cfg["R"]), float(cfg["alpha"]), stats,
                         int(cfg["seed"]), options, threads=int(cfg["threads"]))
    result.config = {k: cfg[k] for k in ("preset", "n", "f1", "f2", "trials", "R", "alpha", "seed", "stats")}
    if cfg["out"]:
        out = Path(cfg["out"])
        out.parent.mkdir(parents=True, exist_ok=True)
        out.with_suffix(".csv").write_text(result.to_csv())
        out.with_suffix(".json").write_text(result.summary_json())
    if cfg["format"] == "json":
        sys.stdout.write(result.summary_json())
    else:
        sys.stdout.write(result.format_summary())
    return 0


def cmd_diagnose(cfg) -> int:
    f1, f2 = _models(cfg)
    diag = population_diagnostics(f1, f2, solver=_solver(cfg))
    if cfg["format"] == "json":
        text = json.dumps(diag.to_dict(), indent=2) + "\n"
    else:
        d = diag.to_dict()
        keys = ["tau", "sigma", "t22_pop", "t_inf1_pop", "t22_pop_over_tau", "t_inf1_pop_over_sigma"]
        text = "".join(f"{k:<24}{d[k]:>14.6f}\n" for k in keys)
        text += f"{'t_inf1 method':<24}{'exact' if diag.t_inf1_exact else 'sdp':>14}\n"
    _emit(text, cfg["out"])
    return 0


COMMANDS = {"describe": cmd_describe, "test": cmd_test, "simulate": cmd_simulate, "diagnose": cmd_diagnose}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = resolve_config(args)
        return COMMANDS[args.command](cfg)
    except (UsageError, NetnormError, ValueError, OSError) as exc:
        print(f"netnorm: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
