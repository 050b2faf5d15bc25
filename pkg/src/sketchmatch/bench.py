"""Timing and weight experiments over the four algorithms."""

from __future__ import annotations

import csv
import enum
import statistics
import time
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, List, Optional, Sequence

from .data import BIPARTITE, POSTPONED, gen_synthetic
from .errors import BadParameter, EmptyInput
from .fast import FastGreedy, FastPostponedGreedy
from .greedy import _fold, greedy_init, greedy_update, postponed_init, postponed_update
from .market import Instance

RECORD_HEADER = ["algorithm", "n", "d", "s", "dl", "seed", "wall_nanos", "total_weight"]
ITERS_HEADER = ["seed", "iter", "nanos"]


class Algorithm(str, enum.Enum):
    GREEDY = "Greedy"
    FAST_GREEDY = "FastGreedy"
    POSTPONED_GREEDY = "PostponedGreedy"
    FAST_POSTPONED_GREEDY = "FastPostponedGreedy"

    @property
    def sketched(self) -> bool:
        return self in (Algorithm.FAST_GREEDY, Algorithm.FAST_POSTPONED_GREEDY)

    @property
    def postponed(self) -> bool:
        return self in (Algorithm.POSTPONED_GREEDY, Algorithm.FAST_POSTPONED_GREEDY)

    @classmethod
    def parse(cls, name: str) -> "Algorithm":
        key = name.strip().lower().replace("_", "-")
        aliases = {
            "greedy": cls.GREEDY,
            "fast-greedy": cls.FAST_GREEDY, "fastgreedy": cls.FAST_GREEDY, "fgreedy": cls.FAST_GREEDY,
            "pgreedy": cls.POSTPONED_GREEDY, "postponedgreedy": cls.POSTPONED_GREEDY,
            "postponed-greedy": cls.POSTPONED_GREEDY,
            "fast-pgreedy": cls.FAST_POSTPONED_GREEDY, "fpgreedy": cls.FAST_POSTPONED_GREEDY,
            "fastpostponedgreedy": cls.FAST_POSTPONED_GREEDY,
            "fast-postponed-greedy": cls.FAST_POSTPONED_GREEDY,
        }
        try:
            return aliases[key]
        except KeyError:
            raise BadParameter(f"unknown algorithm {name!r}") from None


ALL_ALGORITHMS = tuple(Algorithm)


@dataclass(frozen=True)
class RunParams:
    s: Optional[int] = None
    eps: float = 0.1
    delta: float = 0.01
    dl: Optional[int] = None  # only recorded; deadlines live in the instance


@dataclass
class SweepRecord:
    algorithm: Algorithm
    n: int
    d: int
    s: Optional[int]
    dl: Optional[int]
    seed: int
    wall_nanos: int
    total_weight: float
    per_iter_nanos: Optional[List[int]] = field(default=None, repr=False)

    def row(self) -> list:
        return [
            self.algorithm.value, self.n, self.d, "" if self.s is None else self.s,
            "" if self.dl is None else self.dl, self.seed, self.wall_nanos, repr(self.total_weight),
        ]


def _uniform_dl(instance: Instance) -> Optional[int]:
    spans = {node.deadline - node.arrival for node in instance.stream}
    return spans.pop() if len(spans) == 1 else None


def run_once(algorithm, instance: Instance, params: RunParams = RunParams(), seed: int = 0,
             keep_iters: bool = True) -> SweepRecord:
    """Time one full pass of ``algorithm`` over the instance's arrival stream.

    The clock covers construction (sketching included) plus every update.
    """
    algorithm = Algorithm.parse(algorithm) if isinstance(algorithm, str) else algorithm
    if algorithm.postponed != instance.postponed:
        want = POSTPONED if algorithm.postponed else BIPARTITE
        raise BadParameter(f"{algorithm.value} needs a {want} instance")
    stream = instance.stream
    clock = time.perf_counter_ns
    t0 = clock()
    if algorithm is Algorithm.GREEDY:
        ds = greedy_init(instance)
        iters = _fold(ds, stream, greedy_update)
        weight, s = ds.p, None
    elif algorithm is Algorithm.FAST_GREEDY:
        ds = FastGreedy.from_instance(instance, eps=params.eps, delta=params.delta, seed=seed, s=params.s)
        iters = _fold(ds, stream, FastGreedy.update)
        weight, s = ds.total_weight(), ds.s
    elif algorithm is Algorithm.POSTPONED_GREEDY:
        ds = postponed_init(instance.d, seed, capacity=len(stream))
        iters = _fold(ds, stream, postponed_update)
        ds.finish()
        weight, s = ds.p, None
    else:
        ds = FastPostponedGreedy(instance.d, params.eps, params.delta, seed, s=params.s,
                                 n_hint=max(len(stream), 2))
        iters = _fold(ds, stream, FastPostponedGreedy.update)
        ds.finish()
        weight, s = ds.total_weight(), ds.s
    wall = clock() - t0
    dl = params.dl if params.dl is not None else _uniform_dl(instance)
    return SweepRecord(algorithm, instance.n, instance.d, s, dl, seed, wall, float(weight),
                       iters if keep_iters else None)


@dataclass(frozen=True)
class SweepConfig:
    n: int = 1000
    d: int = 50000
    s: int = 20
    dl: int = 420
    eps: float = 0.1
    delta: float = 0.01


AXES = ("n", "s", "d", "dl")


def sweep(
    axis: str,
    values: Sequence[int],
    fixed: SweepConfig = SweepConfig(),
    repeats: int = 1,
    seed: int = 0,
    algorithms: Iterable = ALL_ALGORITHMS,
    fixed_instance: bool = False,
    keep_iters: bool = False,
) -> List[SweepRecord]:
    """One record per (axis value, repeat, algorithm).

    Repeat ``r`` uses seed ``seed + r`` for both the instance and the
    algorithm's randomness. With ``fixed_instance`` every repeat reuses the
    instance from ``seed`` so only the sketch and coins vary, which is how
    the total-weight table is laid out.
    """
    if axis not in AXES:
        raise BadParameter(f"axis must be one of {AXES}, got {axis!r}")
    values = list(values)
    if not values or any(v <= 0 for v in values):
        raise BadParameter("sweep values must be a non-empty list of positive integers")
    if repeats < 1:
        raise BadParameter("repeats must be >= 1")
    algorithms = [Algorithm.parse(a) if isinstance(a, str) else a for a in algorithms]
    records = []
    for value in values:
        cfg = replace(fixed, **{axis: int(value)})
        params = RunParams(s=cfg.s, eps=cfg.eps, delta=cfg.delta, dl=cfg.dl)
        cache = {}
        for r in range(repeats):
            run_seed = seed + r
            inst_seed = seed if fixed_instance else run_seed
            for algo in algorithms:
                mode = POSTPONED if algo.postponed else BIPARTITE
                key = (mode, inst_seed)
                if key not in cache:
                    cache.clear()  # one live instance at a time; large d is memory-heavy
                    cache[key] = gen_synthetic(cfg.n, cfg.d, cfg.dl, inst_seed, mode)
                rec = run_once(algo, cache[key], params, run_seed, keep_iters=keep_iters)
                records.append(rec)
    return records


@dataclass(frozen=True)
class SummaryRow:
    algorithm: Algorithm
    n: int
    d: int
    s: Optional[int]
    dl: Optional[int]
    count: int
    weight_mean: float
    weight_std: float
    wall_median_nanos: float
    wall_mean_nanos: float
    wall_std_nanos: float


def _mean_std(xs):
    mean = statistics.fmean(xs)
    std = statistics.stdev(xs) if len(xs) > 1 else 0.0
    return mean, std


def summarize(records: Sequence[SweepRecord]) -> List[SummaryRow]:
    """Sample mean and (n-1) standard deviation per (algorithm, n, d, s, dl)."""
    if not records:
        raise EmptyInput("no records to summarize")
    groups = {}
    for rec in records:
        groups.setdefault((rec.algorithm, rec.n, rec.d, rec.s, rec.dl), []).append(rec)
    rows = []
    for (algo, n, d, s, dl), recs in groups.items():
        wm, ws = _mean_std([r.total_weight for r in recs])
        walls = [r.wall_nanos for r in recs]
        tm, ts = _mean_std(walls)
        rows.append(SummaryRow(algo, n, d, s, dl, len(recs), wm, ws, statistics.median(walls), tm, ts))
    return rows


def write_records(records: Sequence[SweepRecord], path, append: bool = False) -> None:
    """Record CSV plus ``<stem>.iters.csv`` when per-iteration timings exist."""
    path = Path(path)
    new = not append or not path.exists() or path.stat().st_size == 0
    with open(path, "a" if append else "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        if new:
            w.writerow(RECORD_HEADER)
        for rec in records:
            w.writerow(rec.row())
    with_iters = [r for r in records if r.per_iter_nanos]
    if with_iters:
        ipath = path.with_name(path.stem + ".iters.csv")
        inew = not append or not ipath.exists() or ipath.stat().st_size == 0
        with open(ipath, "a" if append else "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            if inew:
                w.writerow(ITERS_HEADER)
            for rec in with_iters:
                for k, ns in enumerate(rec.per_iter_nanos):
                    w.writerow([rec.seed, k, ns])


def read_records(path) -> List[SweepRecord]:
    out = []
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            out.append(SweepRecord(
                Algorithm(row["algorithm"]), int(row["n"]), int(row["d"]),
                int(row["s"]) if row["s"] else None, int(row["dl"]) if row["dl"] else None,
                int(row["seed"]), int(row["wall_nanos"]), float(row["total_weight"]),
            ))
    return out


SUMMARY_HEADER = ["algorithm", "n", "d", "s", "dl", "count", "weight_mean", "weight_std",
                  "wall_ms_median", "wall_ms_mean", "wall_ms_std"]


def write_summary(rows: Sequence[SummaryRow], path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SUMMARY_HEADER)
        for r in rows:
            w.writerow([
                r.algorithm.value, r.n, r.d, "" if r.s is None else r.s, "" if r.dl is None else r.dl,
                r.count, f"{r.weight_mean:.6f}", f"{r.weight_std:.6f}",
                f"{r.wall_median_nanos / 1e6:.3f}", f"{r.wall_mean_nanos / 1e6:.3f}",
                f"{r.wall_std_nanos / 1e6:.3f}",
            ])


def weight_table(rows: Sequence[SummaryRow], axis: str) -> str:
    """Algorithms down, axis values across, ``mean ± std`` cells."""
    columns = sorted({getattr(r, axis) for r in rows if getattr(r, axis) is not None})
    order = [a for a in ALL_ALGORITHMS if any(r.algorithm is a for r in rows)]
    lines = ["algorithm".ljust(20) + "".join(f"{axis}={v}".rjust(18) for v in columns)]
    for algo in order:
        cells = []
        for v in columns:
            match = [r for r in rows if r.algorithm is algo and getattr(r, axis) in (v, None)]
            cells.append(f"{match[0].weight_mean:.1f} ± {match[0].weight_std:.2f}" if match else "-")
        lines.append(algo.value.ljust(20) + "".join(c.rjust(18) for c in cells))
    return "\n".join(lines)
