"""Command-line front end.

Every task is driven by a JSON configuration document (see
:mod:`ncres.config`); flags only pick the file, override dotted paths and
redirect output.  Each run writes ``<task>.csv`` and ``<task>.txt`` into
the output directory, both stamped with the library version and the sha256
of the effective configuration, and is bit-reproducible for a fixed
document (thread count included: parallel reductions are chunk-ordered).

Exit codes: 0 success, 2 configuration error, 3 tolerance/verification
failure, 4 resource cap.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from ._version import __version__
from .config import (build_bdm, build_model, build_symbol, build_t_grid,
                     build_weight, config_hash, load_config, validate_config)
from .errors import (ConfigError, IllConditionedFitError, NcresError,
                     ResourceCapError, TailBoundError)
from .heatzeta import fit_expansion, heat_samples, zeta_residue
from .parametric import (resolvent_log_coefficient,
                         resolvent_log_coefficient_closed)
from .residue import boundary_residue
from .spectral import dixmier_estimate, dixmier_formula
from . import writers
from .verify import run_all


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="ncres",
        description="residue / Dixmier / heat-zeta cross-checks on model "
                    "geometries")
    parser.add_argument("--version", action="version",
                        version=f"ncres {__version__}")
    sub = parser.add_subparsers(dest="task", required=True)
    for task in ("residue", "dixmier", "heat", "zeta", "parametric"):
        p = sub.add_parser(task, help=f"run a {task} job from a config file")
        p.add_argument("--config", required=True, help="JSON job document")
        _common_flags(p)
    v = sub.add_parser("verify", help="run the cross-check suite")
    v.add_argument("--config", help="optional JSON job document")
    v.add_argument("--fast", action="store_true",
                   help="skip the slow cylinder heat-trace check")
    _common_flags(v)

    args = parser.parse_args(argv)
    try:
        cfg = _effective_config(args)
        return _dispatch(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except ResourceCapError as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return 4
    except (TailBoundError, IllConditionedFitError) as exc:
        print(f"tolerance failure: {exc}", file=sys.stderr)
        return 3
    except NcresError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _common_flags(p):
    p.add_argument("--set", action="append", default=[], metavar="PATH=JSON",
                   help="override a config entry, e.g. --set threads=8")
    p.add_argument("--out", help="output directory (overrides output_dir)")
    p.add_argument("--seed", type=int, help="override the RNG seed")
    p.add_argument("--threads", type=int, help="override the thread count")


def _effective_config(args):
    if getattr(args, "config", None):
        cfg = load_config(args.config)
        if cfg.get("task") != args.task:
            raise ConfigError(
                f"config task {cfg.get('task')!r} != subcommand {args.task!r}")
    else:
        cfg = {"task": args.task}
    for item in args.set:
        if "=" not in item:
            raise ConfigError(f"--set needs PATH=VALUE, got {item!r}")
        path, _, raw = item.partition("=")
        try:
            value = json.loads(raw)
        except json.JSONDecodeError:
            value = raw
        node = cfg
        keys = path.split(".")
        for key in keys[:-1]:
            node = node.setdefault(key, {})
        node[keys[-1]] = value
    if args.out:
        cfg["output_dir"] = args.out
    if args.seed is not None:
        cfg["seed"] = args.seed
    if args.threads is not None:
        cfg["threads"] = args.threads
    if getattr(args, "fast", False):
        cfg.setdefault("verify", {})["fast"] = True
    validate_config(cfg, text=json.dumps(cfg, indent=1))
    return cfg


def _outputs(cfg):
    out = Path(cfg.get("output_dir", "out"))
    out.mkdir(parents=True, exist_ok=True)
    meta = {"config_sha256": config_hash(cfg), "seed": cfg.get("seed", 0)}
    return out, meta


def _write(out_dir, task, csv_data, report):
    (out_dir / f"{task}.csv").write_bytes(csv_data)
    (out_dir / f"{task}.txt").write_text(report)
    sys.stdout.write(report)


def _dispatch(cfg):
    task = cfg["task"]
    threads = cfg.get("threads", 1)
    out_dir, meta = _outputs(cfg)

    if task == "residue":
        A = build_bdm(cfg["residue"])
        breakdown = boundary_residue(A)
        _write(out_dir, task, writers.residue_csv(breakdown, meta),
               writers.residue_report(breakdown, meta))
        return 0

    if task == "dixmier":
        section = cfg["dixmier"]
        model = build_model({**section["model"],
                             "weight": section["weight"]})
        est = dixmier_estimate(model,
                               window_decades=section.get("window_decades",
                                                          2.0))
        report = writers.dixmier_report(est, meta)
        if "formula" in section:
            ref = dixmier_formula(build_bdm(section["formula"])).real
            report += writers.dixmier_report(est, meta, expected=ref)
        _write(out_dir, task, writers.dixmier_csv(est, meta), report)
        return 0

    if task == "heat":
        section = cfg["heat"]
        samples = heat_samples(build_weight(section["p_weight"]),
                               build_weight(section["a_weight"]),
                               build_model(section["model"]),
                               build_t_grid(section["t_grid"]),
                               threads=threads)
        report = writers._report_head("heat", meta) + "\n"
        if "exponents" in section:
            fit = fit_expansion(samples, section["exponents"],
                                section.get("log_exponents", []))
            report += writers.fit_report(fit, meta, title="heat fit")
        _write(out_dir, task, writers.heat_csv(samples, meta), report)
        return 0

    if task == "zeta":
        section = cfg["zeta"]
        result = zeta_residue(build_weight(section["p_weight"]),
                              build_weight(section["a_weight"]),
                              build_model(section["model"]),
                              section["sigma"],
                              t_grid=build_t_grid(section["t_grid"])
                              if "t_grid" in section else None,
                              exponents=section.get("exponents"),
                              log_exponents=section.get("log_exponents"),
                              threads=threads)
        report = writers._report_head("zeta", meta) + "\n"
        report += (f"  residue at s={result.sigma:g}: {result.residue!r}\n"
                   f"  entire part (diagnostic): {result.entire_part!r}\n")
        report += writers.fit_report(result.fit, meta, title="zeta fit")
        _write(out_dir, task, writers.zeta_csv(result, meta), report)
        return 0

    if task == "parametric":
        section = cfg["parametric"]
        n = section["dim"]
        p = build_symbol(section["p"], n)
        a = build_symbol(section["a"], n)
        k = section["power"]
        closed = resolvent_log_coefficient_closed(p, a.order, k)
        route = resolvent_log_coefficient(p, a, k,
                                          levels=section.get("levels"),
                                          depth=section.get("depth"))
        report = writers._report_head("parametric", meta) + "\n"
        report += (f"  closed form      {closed:.12g}\n"
                   f"  expansion route  {route:.12g}\n"
                   f"  difference       {abs(route - closed):.3e}\n")
        _write(out_dir, task,
               writers.parametric_csv(closed, route, meta), report)
        return 0

    if task == "verify":
        fast = cfg.get("verify", {}).get("fast", False)
        results, ok = run_all(fast=fast, seed=cfg.get("seed", 0),
                              threads=threads,
                              progress=lambda r: print(r.line(), flush=True))
        (out_dir / "verify.csv").write_bytes(writers.verify_csv(results, meta))
        (out_dir / "verify.txt").write_text(
            "\n".join(r.line() for r in results) + "\n")
        print("all checks passed" if ok else "FAILURES above", flush=True)
        return 0 if ok else 3

    raise ConfigError(f"unknown task {task!r}")


if __name__ == "__main__":
    sys.exit(main())
