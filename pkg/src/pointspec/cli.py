"""Command-line interface: reproducible runs from JSON configs.

Subcommands: generate | classes | freq | autocorr | diffract | metric |
partition | verify.  Every run writes a manifest echoing the fully
resolved config next to its outputs; re-running from a manifest
reproduces the outputs byte for byte (no timestamps, fixed float
formatting, deterministic seeds).

Exit codes: 0 ok, 2 config error, 3 numerical check failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .geometry import Interval, cluster_1d
from .hull import build_partition_1d, hull_metric
from .sources import SourceError, save_patch, source_from_config
from .stats import (
    VanHoveSpec,
    default_offsets,
    estimate_frequency,
    write_frequency_csv,
    write_frequency_json,
)
from .spectra import (
    autocorr_direct,
    autocorr_from_frequencies,
    peak_scan,
    write_autocorr_csv,
)
from .verify import SUITES, run_suite
from .geometry import enumerate_cluster_classes
from .coords import as_float


class ConfigError(ValueError):
    pass


def _load_config(path):
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except FileNotFoundError:
        raise ConfigError("config file not found: %s" % path)
    except json.JSONDecodeError as e:
        raise ConfigError("config is not valid JSON: %s" % e)
    if not isinstance(cfg, dict):
        raise ConfigError("config root must be a JSON object")
    if "config" in cfg and "command" in cfg:  # a manifest: unwrap
        cfg = cfg["config"]
    return cfg


def _require(cfg, key, typ, what="config"):
    if key not in cfg:
        raise ConfigError("missing %r in %s" % (key, what))
    v = cfg[key]
    if typ is float and isinstance(v, int):
        v = float(v)
    if not isinstance(v, typ):
        raise ConfigError("%r in %s must be %s" % (key, what, typ))
    return v


def _van_hove(cfg, dim=1):
    sub = cfg.get("van_hove", {})
    if not isinstance(sub, dict):
        raise ConfigError("'van_hove' must be an object")
    return VanHoveSpec(n0=float(sub.get("n0", 125)),
                       doublings=int(sub.get("doublings", 4)),
                       dim=int(sub.get("dim", dim)))


def _weights(cfg, m):
    w = cfg.get("weights", [1] * m)
    out = []
    for entry in w:
        if isinstance(entry, (list, tuple)):
            out.append(complex(entry[0], entry[1]))
        else:
            out.append(complex(entry))
    if len(out) != m:
        raise ConfigError("weights must have one entry per color (m=%d)" % m)
    return out


def _source(cfg, seed=None):
    try:
        return source_from_config(_require(cfg, "source", dict), seed=seed)
    except SourceError as e:
        raise ConfigError(str(e))


def _cluster(doc, m):
    """Cluster from per-color coordinate lists, e.g. [[0.0, 1.0], []] (1D)."""
    if not isinstance(doc, list) or len(doc) != m \
            or not all(isinstance(part, list) for part in doc):
        raise ConfigError("cluster must be a list of %d per-color coordinate lists" % m)
    return cluster_1d(*[[float(c) for c in part] for part in doc])


def _outdir(args):
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_manifest(out: Path, command: str, cfg: dict, outputs):
    doc = {"command": command, "config": cfg, "outputs": sorted(outputs)}
    with open(out / "manifest.json", "w") as fh:
        json.dump(doc, fh, indent=1, sort_keys=True)
        fh.write("\n")


def _region_1d(doc):
    if isinstance(doc, (list, tuple)) and len(doc) == 2:
        return Interval(float(doc[0]), float(doc[1]))
    raise ConfigError("region must be [lo, hi]")


# ---------------------------------------------------------------------------
# subcommands


def cmd_generate(args, cfg):
    src = _source(cfg, seed=args.seed)
    gen = cfg.get("generate", {})
    region = _region_1d(_require(gen, "region", (list, tuple), "'generate'"))
    patch = src.window(region)
    out = _outdir(args)
    save_patch(patch, out / "points.json", field=getattr(src, "field", None))
    _write_manifest(out, "generate", cfg, ["points.json"])
    return 0


def cmd_classes(args, cfg):
    src = _source(cfg, seed=args.seed)
    sub = cfg.get("classes", {})
    R = float(sub.get("R", 1.0))
    scan = _region_1d(sub.get("scan", [0, 200]))
    table = enumerate_cluster_classes(src, R, scan)
    rows = []
    for rep, count in zip(table.representatives, table.counts):
        rows.append({
            "count": count,
            "cluster": [[[as_float(c) for c in p] for p in part] for part in rep.parts],
        })
    out = _outdir(args)
    with open(out / "classes.json", "w") as fh:
        json.dump({"radius": R, "n_classes": table.n_classes, "classes": rows},
                  fh, indent=1, sort_keys=True)
        fh.write("\n")
    _write_manifest(out, "classes", cfg, ["classes.json"])
    return 0


def cmd_freq(args, cfg):
    src = _source(cfg, seed=args.seed)
    sub = cfg.get("freq", {})
    spec = _van_hove(cfg, dim=src.dim)
    P = _cluster(sub.get("cluster", [[0.0]] + [[]] * (src.m - 1)), src.m)
    n_off = int(sub.get("offsets", 50))
    span = float(sub.get("offset_span", 10.0))
    offsets = [(0.0,)] + list(default_offsets(n_off - 1, span)) if n_off > 1 else [(0.0,)]
    est = estimate_frequency(src, P, spec, offsets, threads=args.threads)
    out = _outdir(args)
    write_frequency_csv(est, out / "freq.csv")
    write_frequency_json(est, out / "freq.json")
    _write_manifest(out, "freq", cfg, ["freq.csv", "freq.json"])
    return 0


def cmd_autocorr(args, cfg):
    src = _source(cfg, seed=args.seed)
    sub = cfg.get("autocorr", {})
    spec = _van_hove(cfg, dim=src.dim)
    radius = float(sub.get("radius", 10.0))
    n = float(sub.get("n", spec.schedule()[-1]))
    w = _weights(cfg, src.m)
    method = sub.get("method", "both")
    measures = []
    if method in ("direct", "both"):
        measures.append(autocorr_direct(src, w, radius, spec, n))
    if method in ("frequencies", "both"):
        measures.append(autocorr_from_frequencies(src, w, radius, spec, n))
    if not measures:
        raise ConfigError("autocorr method must be direct|frequencies|both")
    out = _outdir(args)
    outputs = ["autocorr.csv"]
    write_autocorr_csv(measures, out / "autocorr.csv")
    if args.plot_data:
        with open(out / "autocorr.dat", "w") as fh:
            fh.write("# t re_c im_c\n")
            for t, c in measures[0].items():
                fh.write("%.17g %.17g %.17g\n" % (t, c.real, c.imag))
        outputs.append("autocorr.dat")
    _write_manifest(out, "autocorr", cfg, outputs)
    return 0


def cmd_diffract(args, cfg):
    src = _source(cfg, seed=args.seed)
    sub = cfg.get("diffract", {})
    spec = _van_hove(cfg, dim=src.dim)
    k_lo = float(sub.get("k_min", -3.0))
    k_hi = float(sub.get("k_max", 3.0))
    resolution = float(sub.get("resolution", 0.01))
    schedule = [float(x) for x in sub.get("n_schedule", [1000, 2000])]
    w = _weights(cfg, src.m)
    est = peak_scan(src, w, (k_lo, k_hi), resolution, schedule, spec)
    out = _outdir(args)
    est.to_csv(out / "diffract.csv")
    outputs = ["diffract.csv"]
    if args.plot_data:
        with open(out / "diffract.dat", "w") as fh:
            fh.write("# k intensity retained\n")
            for e in est.entries:
                fh.write("%.17g %.17g %d\n" % (e.k, e.intensity, int(e.retained)))
        outputs.append("diffract.dat")
    _write_manifest(out, "diffract", cfg, outputs)
    return 0


def cmd_metric(args, cfg):
    src = _source(cfg, seed=args.seed)
    sub = cfg.get("metric", {})
    other_cfg = _require(sub, "other_source", dict, "'metric'")
    try:
        other = source_from_config(other_cfg, seed=args.seed)
    except SourceError as e:
        raise ConfigError(str(e))
    eps_grid = float(sub.get("eps_grid", 0.01))
    bracket = hull_metric(src, other, eps_grid=eps_grid)
    out = _outdir(args)
    with open(out / "metric.json", "w") as fh:
        json.dump(bracket.to_json(), fh, indent=1, sort_keys=True)
        fh.write("\n")
    _write_manifest(out, "metric", cfg, ["metric.json"])
    return 0


def cmd_partition(args, cfg):
    src = _source(cfg, seed=args.seed)
    sub = cfg.get("partition", {})
    R = float(sub.get("R", 3.0))
    delta = float(sub.get("delta", 0.2))
    scan_length = sub.get("scan_length")
    part = build_partition_1d(src, R, delta,
                              scan_length=float(scan_length) if scan_length else None)
    out = _outdir(args)
    with open(out / "partition.json", "w") as fh:
        json.dump({"radius": R, "delta": delta, "n_cells": part.n_cells,
                   "cells": part.to_json()}, fh, indent=1, sort_keys=True)
        fh.write("\n")
    _write_manifest(out, "partition", cfg, ["partition.json"])
    return 0


def cmd_verify(args, cfg):
    suite = args.suite
    if suite not in SUITES:
        print("unknown suite %r; available: %s" % (suite, ", ".join(sorted(SUITES))),
              file=sys.stderr)
        return 2
    results = run_suite(suite, fast=args.fast)
    lines = [r.line() for r in results]
    for line in lines:
        print(line)
    n_fail = sum(not r.passed for r in results)
    print("%d/%d checks passed" % (len(results) - n_fail, len(results)))
    if args.out:
        out = _outdir(args)
        with open(out / "verify.txt", "w") as fh:
            fh.write("\n".join(lines) + "\n")
    return 3 if n_fail else 0


COMMANDS = {
    "generate": cmd_generate,
    "classes": cmd_classes,
    "freq": cmd_freq,
    "autocorr": cmd_autocorr,
    "diffract": cmd_diffract,
    "metric": cmd_metric,
    "partition": cmd_partition,
}


def build_parser():
    ap = argparse.ArgumentParser(
        prog="pointspec",
        description="colored Delone point sets: generators, statistics, spectra")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="JSON config (or a manifest)")
        p.add_argument("--out", default="out", help="output directory")
        p.add_argument("--threads", type=int, default=1,
                       help="bound on internal data parallelism (results identical)")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--plot-data", action="store_true", dest="plot_data")
    v = sub.add_parser("verify")
    v.add_argument("suite", help="one of: %s" % ", ".join(sorted(SUITES)))
    v.add_argument("--fast", action="store_true", help="smoke mode: reduced n and samples")
    v.add_argument("--out", default=None)
    v.add_argument("--threads", type=int, default=1)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.command == "verify":
        return cmd_verify(args, None)
    if getattr(args, "threads", 1) < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return 2
    try:
        cfg = _load_config(args.config)
        return COMMANDS[args.command](args, cfg)
    except ConfigError as e:
        print("config error: %s" % e, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
