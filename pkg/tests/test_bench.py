import csv
import statistics

import pytest

from sketchmatch.bench import (
    ALL_ALGORITHMS, Algorithm, RECORD_HEADER, RunParams, SweepConfig, SweepRecord, read_records,
    run_once, summarize, sweep, weight_table, write_records,
)
from sketchmatch.data import gen_synthetic
from sketchmatch.errors import BadParameter, EmptyInput
from sketchmatch.greedy import greedy_run
from sketchmatch.market import Instance

from conftest import buyer, seller

SMALL = SweepConfig(n=30, d=40, s=8, dl=6)


def test_greedy_delegation():
    inst = Instance(1, [seller(0, 0.0)], [buyer(0, 2.0, 0), buyer(1, 5.0, 1)])
    rec = run_once(Algorithm.GREEDY, inst)
    assert rec.total_weight == greedy_run(inst).total_weight == 5.0
    assert rec.s is None and rec.wall_nanos > 0


def test_weights_repeat_exactly():
    inst = gen_synthetic(20, 16, 4, seed=0)
    a = run_once("fast-greedy", inst, RunParams(s=5), seed=3)
    b = run_once("fast-greedy", inst, RunParams(s=5), seed=3)
    assert repr(a.total_weight) == repr(b.total_weight)


def test_mode_mismatch_rejected():
    with pytest.raises(BadParameter):
        run_once(Algorithm.POSTPONED_GREEDY, gen_synthetic(3, 2, 2, seed=0))
    with pytest.raises(BadParameter):
        Algorithm.parse("bogus")


def test_wall_covers_iterations():
    rec = run_once(Algorithm.FAST_POSTPONED_GREEDY, gen_synthetic(20, 8, 3, 0, "postponed"), RunParams(s=4))
    assert rec.wall_nanos >= sum(rec.per_iter_nanos)


def test_sweep_single_value():
    recs = sweep("s", [4], SMALL, repeats=1, algorithms=[Algorithm.FAST_GREEDY])
    assert len(recs) == 1 and recs[0].s == 4


def test_sweep_shape_over_s_columns():
    values = [20, 60, 100, 200, 300]
    recs = sweep("s", values, SMALL, repeats=2, fixed_instance=True)
    assert len(recs) == len(values) * 2 * len(ALL_ALGORITHMS)
    fast = {r.s for r in recs if r.algorithm is Algorithm.FAST_GREEDY}
    assert fast == set(values)
    table = weight_table(summarize(recs), "s")
    assert table.splitlines()[0].split()[1:] == [f"s={v}" for v in values]
    greedy = {r.total_weight for r in recs if r.algorithm is Algorithm.GREEDY}
    assert len(greedy) == 1  # same instance every repeat


def test_sweep_validation():
    for args in [("x", [1]), ("n", []), ("n", [0])]:
        with pytest.raises(BadParameter):
            sweep(*args, fixed=SMALL)


def test_sweep_weights_timing_independent():
    a = sweep("n", [10, 20], SMALL, repeats=2, seed=5)
    b = sweep("n", [10, 20], SMALL, repeats=2, seed=5)
    assert [repr(r.total_weight) for r in a] == [repr(r.total_weight) for r in b]


def test_summarize_stats():
    def rec(w):
        return SweepRecord(Algorithm.GREEDY, 1, 1, None, 1, 0, 10, w)

    (row,) = summarize([rec(1.0)])
    assert row.weight_mean == 1.0 and row.weight_std == 0.0
    (row,) = summarize([rec(1.0), rec(3.0)])
    assert row.weight_mean == 2.0 and row.weight_std == pytest.approx(2 ** 0.5)
    with pytest.raises(EmptyInput):
        summarize([])


def test_csv_contract(tmp_path):
    recs = sweep("dl", [3], SMALL, repeats=2, keep_iters=True,
                 algorithms=[Algorithm.GREEDY, Algorithm.FAST_GREEDY])
    out = tmp_path / "sweep.csv"
    write_records(recs, out)
    with open(out) as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == RECORD_HEADER == ["algorithm", "n", "d", "s", "dl", "seed", "wall_nanos", "total_weight"]
    assert rows[1][3] == ""  # exact algorithms leave s blank
    with open(tmp_path / "sweep.iters.csv") as fh:
        iters = list(csv.reader(fh))
    assert iters[0] == ["seed", "iter", "nanos"]
    assert len(iters) - 1 == sum(len(r.per_iter_nanos) for r in recs)
    back = read_records(out)
    assert [r.total_weight for r in back] == [r.total_weight for r in recs]


@pytest.mark.slow
def test_runtime_grows_with_n():
    cfg = SweepConfig(n=500, d=2000, s=20, dl=100)
    recs = sweep("n", [500, 1000, 2000, 3000], cfg, repeats=5)
    for algo in ALL_ALGORITHMS:
        medians = [
            statistics.median(r.wall_nanos for r in recs if r.algorithm is algo and r.n == n)
            for n in (500, 1000, 2000, 3000)
        ]
        assert medians == sorted(medians), (algo, medians)
