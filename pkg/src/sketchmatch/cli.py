"""Command-line entry point: ``sketchmatch {gen,run,sweep,verify}``.

Exit codes: 0 success, 1 a verified property failed, 2 usage or
configuration error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import bench, kernels, verify
from .data import BIPARTITE, POSTPONED, gen_synthetic, load_csv, load_instance_csv, write_csv
from .errors import SketchMatchError
from .sketch import recommended_s

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _default_seed() -> int:
    raw = os.environ.get("SKETCHMATCH_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"SKETCHMATCH_SEED must be an integer, got {raw!r}")


def _write_meta(path: Path, meta: dict) -> None:
    meta_path = path.with_name(path.name + ".meta.json")
    meta_path.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def cmd_gen(args) -> int:
    inst = gen_synthetic(args.n, args.d, args.dl, args.seed, args.mode)
    out = Path(args.out)
    write_csv(inst, out)
    _write_meta(out, {"command": "gen", "n": args.n, "d": args.d, "dl": args.dl,
                      "seed": args.seed, "mode": args.mode, "format": "role,id,arrival,deadline,x*"})
    print(f"wrote {out} ({len(inst.stream)} nodes, d={inst.d})")
    return EXIT_OK


def _is_instance_file(path: Path) -> bool:
    with open(path, encoding="utf-8") as fh:
        first = fh.readline()
    return first.replace(" ", "").startswith("role,id,arrival,deadline")


def _load_input(args, algo):
    if args.input:
        path = Path(args.input)
        if not path.exists():
            raise UsageError(f"input file {path} does not exist")
        if _is_instance_file(path):
            inst = load_instance_csv(path)
            if algo.postponed and not inst.postponed:
                inst = inst.as_postponed()
            return inst
        if args.dl is None and args.deadline_column is None:
            raise UsageError("--dl or --deadline-column is required for plain CSV input")
        return load_csv(path, args.dl, header=args.header, role_column=args.role_column,
                        deadline_column=args.deadline_column, postponed=algo.postponed)
    mode = POSTPONED if algo.postponed else BIPARTITE
    dl = args.dl if args.dl is not None else bench.SweepConfig.dl
    return gen_synthetic(args.n, args.d, dl, args.seed, mode)


def cmd_run(args) -> int:
    algo = bench.Algorithm.parse(args.algo)
    if algo.sketched and args.s is None and not args.auto_s:
        raise UsageError(f"{args.algo} needs --s or --auto-s")
    if not args.input and not args.synthetic:
        raise UsageError("give --in PATH or --synthetic")
    inst = _load_input(args, algo)
    s = args.s
    if algo.sketched and s is None:
        s = recommended_s(max(inst.n, 2), args.eps, args.delta)
    params = bench.RunParams(s=s, eps=args.eps, delta=args.delta, dl=args.dl)
    rec = bench.run_once(algo, inst, params, args.seed)
    print(f"total_weight={rec.total_weight:.10g} wall_ms={rec.wall_nanos / 1e6:.3f}")
    if args.record:
        bench.write_records([rec], args.record, append=True)
    return EXIT_OK


def _parse_values(text: str):
    parts = [p for p in text.split(",") if p.strip()]
    if not parts:
        raise UsageError("--values must list at least one integer")
    try:
        return [int(p) for p in parts]
    except ValueError:
        raise UsageError(f"--values must be comma-separated integers, got {text!r}")


def cmd_sweep(args) -> int:
    values = _parse_values(args.values)
    algos = [bench.Algorithm.parse(a) for a in args.algos.split(",") if a.strip()]
    fixed = bench.SweepConfig(n=args.n, d=args.d, s=args.s, dl=args.dl, eps=args.eps, delta=args.delta)
    records = bench.sweep(args.axis, values, fixed, args.repeats, args.seed, algos,
                          fixed_instance=args.fixed_instance, keep_iters=args.iters)
    out = Path(args.out)
    bench.write_records(records, out)
    rows = bench.summarize(records)
    bench.write_summary(rows, out.with_name(out.stem + ".summary.csv"))
    _write_meta(out, {"command": "sweep", "axis": args.axis, "values": values,
                      "repeats": args.repeats, "seed": args.seed, "fixed": vars(fixed),
                      "algorithms": [a.value for a in algos], "fixed_instance": args.fixed_instance,
                      "backend": kernels.BACKEND})
    print(bench.weight_table(rows, args.axis))
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.instances < 1:
        raise UsageError("--instances must be >= 1")
    if args.max_n < 1:
        raise UsageError("--max-n must be >= 1")
    results = verify.run_suite(args.instances, args.max_n, args.eps, args.delta, args.seed,
                               s=args.s, jl_points=args.jl_points, jl_dim=args.jl_dim,
                               jl_trials=args.jl_trials)
    for r in results:
        print(r.line())
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


def build_parser(default_seed: int) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sketchmatch", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="write a synthetic instance CSV plus a .meta.json sidecar")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--d", type=int, required=True)
    g.add_argument("--dl", type=int, required=True, help="deadline duration in steps")
    g.add_argument("--seed", type=int, default=default_seed)
    g.add_argument("--mode", choices=[BIPARTITE, POSTPONED], default=BIPARTITE)
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_gen)

    r = sub.add_parser("run", help="run one algorithm once and print its total weight")
    r.add_argument("--algo", required=True, help="greedy | fast-greedy | pgreedy | fast-pgreedy")
    r.add_argument("--in", dest="input")
    r.add_argument("--synthetic", action="store_true")
    r.add_argument("--n", type=int, default=1000)
    r.add_argument("--d", type=int, default=50000)
    r.add_argument("--dl", type=int)
    r.add_argument("--s", type=int)
    r.add_argument("--eps", type=float, default=0.1)
    r.add_argument("--delta", type=float, default=0.01)
    r.add_argument("--auto-s", action="store_true", help="derive s from --eps/--delta")
    r.add_argument("--seed", type=int, default=default_seed)
    r.add_argument("--record", help="append a SweepRecord row to this CSV")
    r.add_argument("--header", action="store_true", help="plain CSV input has a header line")
    r.add_argument("--role-column")
    r.add_argument("--deadline-column")
    r.set_defaults(func=cmd_run)

    w = sub.add_parser("sweep", help="vary one parameter and record timings and weights")
    w.add_argument("--axis", choices=bench.AXES, required=True)
    w.add_argument("--values", required=True, help="comma-separated integers")
    w.add_argument("--repeats", type=int, default=1)
    w.add_argument("--out", required=True)
    w.add_argument("--n", type=int, default=bench.SweepConfig.n)
    w.add_argument("--d", type=int, default=bench.SweepConfig.d)
    w.add_argument("--s", type=int, default=bench.SweepConfig.s)
    w.add_argument("--dl", type=int, default=bench.SweepConfig.dl)
    w.add_argument("--eps", type=float, default=0.1)
    w.add_argument("--delta", type=float, default=0.01)
    w.add_argument("--seed", type=int, default=default_seed)
    w.add_argument("--algos", default="greedy,fast-greedy,pgreedy,fast-pgreedy")
    w.add_argument("--fixed-instance", action="store_true",
                   help="reuse one instance; repeats vary only sketch and coins")
    w.add_argument("--iters", action="store_true", help="also write <stem>.iters.csv")
    w.set_defaults(func=cmd_sweep)

    v = sub.add_parser("verify", help="check competitive ratios, dual certificates and JL distortion")
    v.add_argument("--instances", type=int, default=200)
    v.add_argument("--max-n", type=int, default=6)
    v.add_argument("--eps", type=float, default=0.1)
    v.add_argument("--delta", type=float, default=0.01)
    v.add_argument("--s", type=int, help="force a sketch dimension instead of the recommended one")
    v.add_argument("--seed", type=int, default=default_seed)
    v.add_argument("--jl-points", type=int, default=100)
    v.add_argument("--jl-dim", type=int, default=500)
    v.add_argument("--jl-trials", type=int, default=50)
    v.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    try:
        parser = build_parser(_default_seed())
    except UsageError as exc:
        print(f"sketchmatch: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return args.func(args)
    except (UsageError, SketchMatchError, OSError) as exc:
        print(f"sketchmatch: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
