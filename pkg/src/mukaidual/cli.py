"""Command line front end.

Exit codes: 0 on success, 1 when a verification check fails, 2 on bad usage.
Settings come from flags, then from the ``key=value`` file named by the
``MDL_CONFIG`` environment variable, then from built-in defaults.
"""

from __future__ import annotations

import argparse
import configparser
import json
import os
import sys
from datetime import datetime, timezone
from fractions import Fraction

from . import __version__, kernels, lattice, nilorbit, strata
from .lattice import MukaiVector
from .strata import RegionError
from .verify import SUITES, VerifyConfig, run_suite

MAX_SAFE_INT = 2**53 - 1


class UsageError(Exception):
    pass


# JSON helpers

def jsonable(obj):
    """Convert to JSON types; integers beyond 2^53 - 1 become decimal strings."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str) or isinstance(obj, float):
        return obj
    if isinstance(obj, int):
        return str(obj) if abs(obj) > MAX_SAFE_INT else obj
    if isinstance(obj, Fraction):
        return jsonable(obj.numerator) if obj.denominator == 1 else str(obj)
    if isinstance(obj, MukaiVector):
        return [jsonable(x) for x in obj.as_tuple()]
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(x) for x in obj]
    if hasattr(obj, "to_dict"):
        return jsonable(obj.to_dict())
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def emit_json(command, params, results, timestamp=True):
    doc = {"version": __version__, "command": command, "params": params, "results": results}
    if timestamp:
        doc["timestamp"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    print(json.dumps(jsonable(doc), indent=2, sort_keys=True))


# configuration

def load_config(path):
    """Flat ``key=value`` file; ``#`` starts a comment line."""
    parser = configparser.ConfigParser(interpolation=None, comment_prefixes=("#", ";"))
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_string("[mdl]\n" + fh.read())
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    except configparser.Error as exc:
        raise UsageError(f"malformed config {path}: {exc}") from exc
    known = set(VerifyConfig.keys())
    out = {}
    for key, value in parser["mdl"].items():
        if key not in known:
            raise UsageError(f"unknown config key {key!r} in {path}")
        try:
            out[key] = int(value)
        except ValueError as exc:
            raise UsageError(f"config key {key!r} needs an integer, got {value!r}") from exc
    return out


def base_config():
    path = os.environ.get("MDL_CONFIG")
    cfg = VerifyConfig()
    if path:
        cfg = cfg.updated(**load_config(path))
    return cfg


# vector

def vector_report(v, g):
    region = lattice.in_region(v, g)
    norm = lattice.normalize(v)
    out = {
        "vector": v,
        "g": g,
        "chi": v.chi,
        "dim": lattice.dim_moduli(v, g),
        "in_V": region["in_V"],
        "in_H": lattice.in_h(v, g),
        "mu": None,
        "sigma": lattice.sigma(v),
        "tau": lattice.tau(v),
        "sigma_tau": lattice.sigma_tau(v),
        "contraction_targets": [],
    }
    if out["in_H"]:
        out["mu"] = strata.mu(v, g)
    chi = norm.chi
    for w in strata.contraction_target(norm):
        t = abs(chi - w.chi) // 2
        entry = {"vector": w, "t": t, "in_H": lattice.in_h(w, g), "grassmannian": None}
        # M(v) is the base of the t-th stratum of M(w) when w lies on the same side
        if t and entry["in_H"] and w.chi * chi >= 0:
            entry["grassmannian"] = [t, abs(chi)]
            entry["grassmannian_dim"] = strata.grassmannian_dim(t, abs(chi))
        out["contraction_targets"].append(entry)
    return out


def cmd_vector(args, cfg):
    v = MukaiVector(args.r, args.d, args.s)
    rep = vector_report(v, args.g)
    if args.json:
        emit_json("vector", {"g": args.g, "v": v}, [rep], not args.no_timestamp)
        return 0
    print(f"v = {v}  g = {args.g}")
    print(f"chi = {rep['chi']}")
    print(f"dim M(v) = {rep['dim']}")
    print(f"in V: {'yes' if rep['in_V'] else 'no'}   in H: {'yes' if rep['in_H'] else 'no'}")
    print(f"mu = {rep['mu'] if rep['mu'] is not None else 'n/a (not in H)'}")
    print(f"sigma(v) = {rep['sigma']}   tau(v) = {rep['tau']}   sigma.tau(v) = {rep['sigma_tau']}")
    for tgt in rep["contraction_targets"]:
        line = f"contraction target {tgt['vector']}"
        if tgt["grassmannian"]:
            k, n = tgt["grassmannian"]
            line += f"  (M(v) carries the G({k},{n}) fibre of stratum {tgt['t']})"
        print(line)
    return 0


# collection

def node_id(d):
    return f"n{d.row}_{d.column}"


def node_label(c, d):
    return f"M{d.base}^{d.t} dim={d.dim} codim={d.codim}"


def collection_dot(c):
    lines = [
        "digraph collection {",
        "  rankdir=LR;",
        f'  label="g={c.g} v={c.source} mu={c.mu}";',
        "  node [shape=box];",
    ]
    for d in c.descriptors():
        lines.append(f'  {node_id(d)} [label="{node_label(c, d)}"];')
    for i, row in enumerate(c.rows):
        for a, b in zip(row[1:], row):
            lines.append(f"  {node_id(a)} -> {node_id(b)} [style=solid];")
    for d in c.descriptors():
        if d.t:
            k, n = d.fiber
            target = c.diagonal(d.column)
            lines.append(f'  {node_id(d)} -> {node_id(target)} [style=dashed, label="G({k},{n})"];')
    lines.append("}")
    return "\n".join(lines)


def collection_table(c):
    out = [f"g={c.g}  v={c.source}  mu={c.mu}  n={c.n(0)}"]
    for (label, base), row in zip(strata.display_rows(c), c.rows):
        cells = []
        for d in row:
            fib = f" G({d.fiber[0]},{d.fiber[1]})" if d.fiber else ""
            cells.append(f"[t={d.t} dim={d.dim} codim={d.codim}{fib}]")
        out.append(f"X({label}) = M{base}: " + " ".join(cells))
    return "\n".join(out)


def cmd_collection(args, cfg):
    v = MukaiVector(args.r, args.d, args.s)
    if not lattice.in_h(v, args.g):
        raise UsageError(f"{v} is not in H at g={args.g}")
    c = strata.build_collection(v, args.g, args.direction)
    if args.format == "dot":
        print(collection_dot(c))
    elif args.format == "json":
        emit_json("collection", {"g": args.g, "v": v}, [c.to_dict()], not args.no_timestamp)
    else:
        print(collection_table(c))
    return 0


# group

def group_report(g, depth):
    gens = {name: f(g) for name, f in lattice.GENERATORS.items()}
    checks = {f"isometry {name}": lattice.is_isometry(m, g) for name, m in sorted(gens.items())}
    checks["O(2) = sigma' tau' sigma tau"] = lattice.verify_o2_identity(g)
    out = {"g": g, "checks": checks, "example": None, "bfs": None}
    ok = all(checks.values())
    if g == 7:
        from .verify import G7_MATRIX

        m = G7_MATRIX
        out["example"] = {
            "matrix": [list(r) for r in m],
            "isometry": lattice.is_isometry(m, 7),
            "image": lattice.apply(m, MukaiVector(0, 0, 1)),
            "criterion": lattice.gamma_criterion(m, 7),
        }
        ok = ok and out["example"]["isometry"] and not out["example"]["criterion"]
    if depth:
        images = lattice.bfs_images(g, depth)
        # every element of Gamma satisfies the criterion, so a failure here is a bug
        failing = [w for w in images if not lattice.vector_criterion(w, g)]
        out["bfs"] = {
            "depth": depth,
            "reached": len(images),
            "images": [{"vector": w, "word": list(word)} for w, word in sorted(images.items())],
            "criterion_failures": sorted(failing),
        }
        ok = ok and not failing
    return out, ok


def cmd_group(args, cfg):
    if args.bfs_depth < 0:
        raise UsageError("--bfs-depth must be >= 0")
    rep, ok = group_report(args.g, args.bfs_depth)
    if args.json:
        emit_json("group", {"g": args.g, "bfs_depth": args.bfs_depth}, [rep], not args.no_timestamp)
        return 0 if ok else 1
    print(f"g = {args.g}")
    for name, val in rep["checks"].items():
        print(f"  {name}: {'ok' if val else 'FAILED'}")
    ex = rep["example"]
    if ex:
        print(f"  example matrix {ex['matrix']}: isometry={'yes' if ex['isometry'] else 'no'}, "
              f"image of (0,0,1) = {ex['image']}, criterion={'pass' if ex['criterion'] else 'fail'}")
    if rep["bfs"]:
        b = rep["bfs"]
        print(f"  BFS depth {b['depth']}: {b['reached']} images of (0,0,1)")
        for item in b["images"]:
            word = " ".join(item["word"]) or "(empty word)"
            print(f"    {item['vector']}  <- {word}")
        if b["criterion_failures"]:
            print(f"  criterion failures: {', '.join(map(str, b['criterion_failures']))}")
    return 0 if ok else 1


# springer

def cmd_springer(args, cfg):
    h, t = args.h, args.t
    if not 1 <= t or 2 * t > h:
        raise UsageError(f"need 1 <= t <= h/2, got h={h}, t={t}")
    samples = cfg.springer_samples if args.samples is None else args.samples
    seed = cfg.seed if args.seed is None else args.seed
    if samples < 1:
        raise UsageError("--samples must be >= 1")
    stats = nilorbit.springer_campaign(h, t, samples, seed)
    ok = not stats.failures
    if args.json:
        emit_json("springer", {"h": h, "t": t, "samples": samples, "seed": seed}, [stats.to_dict()],
                  not args.no_timestamp)
        return 0 if ok else 1
    print(f"h={h} t={t} samples={samples} seed={seed} backend={kernels.BACKEND}")
    print(f"failures: {len(stats.failures)}")
    print(f"round trip: {'OK' if ok else 'FAILED'} ({stats.round_trips} dense-orbit samples)")
    width = max(stats.histogram.values()) or 1
    for k, count in sorted(stats.histogram.items()):
        bar = "#" * round(40 * count / width)
        print(f"  rank {k}: {count:7d} {bar}")
    for f in stats.failures[:5]:
        print(f"  failure at sample {f['sample']}: {', '.join(f['rules'])}", file=sys.stderr)
    return 0 if ok else 1


# verify

def cmd_verify(args, cfg):
    if args.seed is not None:
        cfg = cfg.updated(seed=args.seed)
    report = run_suite(args.suite, cfg)
    if args.json:
        params = {"suite": args.suite, "seed": cfg.seed, "config": {k: getattr(cfg, k) for k in VerifyConfig.keys()}}
        emit_json("verify", params, report.to_dict(not args.no_timestamp)["checks"], not args.no_timestamp)
    else:
        for rec in sorted(report.checks, key=lambda c: c.name):
            timing = "" if args.no_timestamp else f"  ({rec.elapsed:.2f}s)"
            print(f"{rec.status.upper():4s}  {rec.name}{timing}")
            if rec.counterexample is not None:
                print(f"      counterexample: {json.dumps(jsonable(rec.counterexample))}")
        print(f"{'all checks passed' if report.passed else 'some checks FAILED'} (seed {cfg.seed})")
    return 0 if report.passed else 1


# parser

def _add_vector_args(p):
    p.add_argument("--g", type=int, required=True, help="genus, at least 2")
    p.add_argument("r", type=int)
    p.add_argument("d", type=int)
    p.add_argument("s", type=int)


def _add_output_flags(p):
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--no-timestamp", action="store_true", help="omit timestamps and timings")


def build_parser():
    parser = argparse.ArgumentParser(prog="mukaidual", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("vector", help="numerics of one Mukai vector")
    _add_vector_args(p)
    _add_output_flags(p)
    p.set_defaults(func=cmd_vector)

    p = sub.add_parser("collection", help="render the stratified collection of a vector in H")
    _add_vector_args(p)
    p.add_argument("--format", choices=["table", "json", "dot"], default="table")
    p.add_argument("--direction", type=int, choices=[1, -1], default=None,
                   help="shift direction when chi = 0")
    p.add_argument("--no-timestamp", action="store_true")
    p.set_defaults(func=cmd_collection)

    p = sub.add_parser("group", help="generators of Gamma and the O(2) identity")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--bfs-depth", type=int, default=0)
    _add_output_flags(p)
    p.set_defaults(func=cmd_group)

    p = sub.add_parser("springer", help="randomized Springer resolution checks")
    p.add_argument("h", type=int)
    p.add_argument("t", type=int)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    _add_output_flags(p)
    p.set_defaults(func=cmd_springer)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("--suite", choices=["all", *SUITES], default="all")
    p.add_argument("--seed", type=int, default=None)
    _add_output_flags(p)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if hasattr(args, "g"):
            lattice.check_genus(args.g)
        cfg = base_config()
        return args.func(args, cfg)
    except (UsageError, RegionError, ValueError) as exc:
        print(f"mukaidual: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
