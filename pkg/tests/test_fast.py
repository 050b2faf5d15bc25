import numpy as np
import pytest

from sketchmatch import sketch as sk
from sketchmatch.data import gen_synthetic, random_small_instance
from sketchmatch.errors import BadParameter, DimensionMismatch, RoleAlreadyFixed
from sketchmatch.fast import (
    FastGreedy, FastPostponedGreedy, fast_greedy_run, fast_postponed_greedy_run, fg_init,
    fg_query, fg_total_weight, fg_update, fpg_init, fpg_total_weight, fpg_update,
)
from sketchmatch.greedy import greedy_init, greedy_run, greedy_update, postponed_greedy_run
from sketchmatch.market import Instance, edge_weight

from conftest import buyer, seller, undetermined


def test_init_single_seller():
    ds = fg_init([seller(0, [1.0, 2.0])], 0.5, 0.1, seed=0)
    assert ds.s >= 1 and len(ds.sketched_sellers) == 1
    assert fg_total_weight(ds) == 0.0


def test_init_explicit_s_on_wide_vectors():
    inst = gen_synthetic(5, 50000, 3, seed=0)
    ds = FastGreedy.from_instance(inst, s=20, seed=1)
    assert ds.s == 20
    assert all(p.coords.shape == (20,) for p in ds.sketched_sellers)


def test_init_deterministic_and_matches_apply():
    rng = np.random.default_rng(0)
    sellers = [seller(i, rng.normal(size=12)) for i in range(4)]
    a, b = fg_init(sellers, 0.3, 0.1, seed=5), fg_init(sellers, 0.3, 0.1, seed=5)
    assert a.sketched.tobytes() == b.sketched.tobytes()
    for pt, x in zip(a.sketched_sellers, sellers):
        assert np.allclose(pt.coords, sk.apply(a.sketch, x.vector).coords, rtol=1e-12, atol=1e-12)


def test_init_bad_parameters():
    with pytest.raises(BadParameter):
        fg_init([seller(0, 0)], 1.5, 0.1, 0)
    with pytest.raises(BadParameter):
        fg_init([seller(0, 0)], 0.5, 0.0, 0)
    with pytest.raises(DimensionMismatch):
        fg_init([seller(0, [0, 0]), seller(1, [0, 0, 0])], 0.5, 0.1, 0)


def test_query_own_vector_is_zero():
    rng = np.random.default_rng(1)
    sellers = [seller(i, rng.normal(size=30)) for i in range(3)]
    ds = fg_init(sellers, 0.5, 0.1, seed=2)
    w = fg_query(ds, sellers[1].vector)
    assert w[1] == 0.0


def test_query_marks_inactive_sellers():
    ds = fg_init([seller(0, 0.0, 0, 1), seller(1, 1.0, 0, 5)], 0.5, 0.1, seed=0, s=3)
    fg_update(ds, buyer(0, 2.0, 3))
    w = fg_query(ds, np.array([2.0]))
    assert np.isnan(w[0]) and not np.isnan(w[1])
    ds.state.advance(9)
    assert np.all(np.isnan(fg_query(ds, np.array([2.0]))))


def test_query_within_band_over_seeds():
    rng = np.random.default_rng(8)
    n, d, eps, delta = 20, 300, 0.3, 0.1
    xs = rng.normal(size=(n, d))
    sellers = [seller(i, xs[i]) for i in range(n)]
    y = rng.normal(size=d)
    true = np.array([edge_weight(y, x) for x in xs])
    failed = 0
    for seed in range(50):
        w = fg_query(fg_init(sellers, eps, delta, seed=seed), y)
        if np.any(w < (1 - eps) * true) or np.any(w > (1 + eps) * true):
            failed += 1
    assert failed / 50 <= delta + 0.05


def test_update_one_dimensional_sign_sketch_is_exact():
    # with d = 1 every +-1/sqrt(1) projection preserves |x - y|
    inst = Instance(1, [seller(0, 0.0)], [buyer(0, 1.0, 0), buyer(1, 3.0, 1)])
    for seed in range(4):
        ds = FastGreedy.from_instance(inst, s=1, seed=seed)
        for ev in inst.stream:
            fg_update(ds, ev)
        assert fg_total_weight(ds) == 3.0
        assert ds.state.m[0] == 1


def test_update_all_expired_no_change():
    ds = fg_init([seller(0, 0.0, 0, 1)], 0.5, 0.1, seed=0, s=2)
    fg_update(ds, buyer(0, 4.0, 5))
    assert fg_total_weight(ds) == 0.0 and ds.state.m == [None]


def test_total_weight_equals_sum_w():
    inst = gen_synthetic(40, 64, 8, seed=3)
    ds = FastGreedy.from_instance(inst, s=16, seed=0)
    assert fg_total_weight(ds) == 0.0
    for ev in inst.stream:
        fg_update(ds, ev)
        assert fg_total_weight(ds) == pytest.approx(ds.state.w.sum(), rel=1e-9)


def test_identity_projection_reproduces_greedy():
    rng = np.random.default_rng(10)
    for _ in range(20):
        inst = random_small_instance(rng)
        a = greedy_run(inst)
        b = fast_greedy_run(inst, projection=sk.SketchMatrix.identity(inst.d))
        assert a.pairs == b.pairs and a.total_weight == b.total_weight


def test_identity_projection_reproduces_postponed():
    inst = gen_synthetic(40, 6, 5, seed=6, mode="postponed")
    for seed in range(5):
        a = postponed_greedy_run(inst, seed)
        b = fast_postponed_greedy_run(inst, seed=seed, projection=sk.SketchMatrix.identity(6))
        assert a.pairs == b.pairs and a.total_weight == b.total_weight


def test_work_accounting_counts_one_vector_per_buyer():
    inst = gen_synthetic(25, 40, 100, seed=1)
    ds = FastGreedy.from_instance(inst, s=8, seed=0)
    st = greedy_init(inst)
    for ev in inst.stream:
        before_fast, before_exact = ds.touches, st.touches
        fg_update(ds, ev)
        greedy_update(st, ev)
        if ev.role.name == "BUYER":
            assert ds.touches - before_fast == 1
            assert st.touches - before_exact == int(st.flag.sum())
    # every seller is active for the last buyer (dl exceeds the horizon)
    assert st.touches - before_exact == 25


def test_fast_close_to_exact_at_moderate_s():
    inst = gen_synthetic(100, 2000, 50, seed=0)
    exact = greedy_run(inst).total_weight
    fast = np.mean([fast_greedy_run(inst, s=20, seed=k).total_weight for k in range(10)])
    assert abs(fast - exact) / exact <= 0.03


# -- postponed ----------------------------------------------------------------------


def test_fpg_init_empty():
    ds = fpg_init(0.2, 0.1, d=7, seed=3)
    assert fpg_total_weight(ds) == 0.0 and ds.live_sellers == 0 and ds.live_buyers == 0
    assert ds.s == sk.recommended_s(1000, 0.2, 0.1)
    assert fpg_init(0.2, 0.1, d=7, seed=3, s=11).s == 11
    again = fpg_init(0.2, 0.1, d=7, seed=3)
    assert again.sketch.entries.tobytes() == ds.sketch.entries.tobytes()
    with pytest.raises(BadParameter):
        fpg_init(0.0, 0.1, d=7, seed=3)


def test_fpg_single_node():
    ds = fpg_init(0.2, 0.1, d=2, seed=0, s=5)
    fpg_update(ds, undetermined(0, [1.0, 2.0], 1, 3))
    ds.finish()
    assert fpg_total_weight(ds) == 0.0


def test_fpg_rejects_fixed_roles_and_bad_dims():
    ds = fpg_init(0.2, 0.1, d=2, seed=0, s=5)
    with pytest.raises(RoleAlreadyFixed):
        fpg_update(ds, seller(0, [0.0, 0.0]))
    with pytest.raises(DimensionMismatch):
        fpg_update(ds, undetermined(0, [0.0, 0.0, 1.0], 1, 2))


def test_fpg_two_nodes_expectation():
    rng = np.random.default_rng(4)
    x0, x1 = rng.normal(size=50), rng.normal(size=50)
    eps = 0.3
    inst = Instance(50, undetermined=[undetermined(0, x0, 1, 3), undetermined(1, x1, 2, 4)])
    true = edge_weight(x0, x1)
    seen = []
    for seed in range(200):
        ds = FastPostponedGreedy(50, eps, 0.1, seed, n_hint=2)
        for node in inst.stream:
            ds.update(node)
        approx = ds.state.w[0]  # provisional sketched weight of the only edge
        ds.finish()
        assert ds.total_weight() in (0.0, approx)
        seen.append((ds.total_weight(), approx))
    mean_p = np.mean([p for p, _ in seen])
    mean_half = np.mean([a for _, a in seen]) / 2
    assert mean_p == pytest.approx(mean_half, rel=0.25)
    assert (1 - eps) * true / 2 <= mean_half <= (1 + eps) * true / 2


def test_fpg_stores_only_sketches():
    ds = fpg_init(0.2, 0.1, d=1000, seed=0, s=12)
    for i in range(5):
        fpg_update(ds, undetermined(i, np.full(1000, float(i)), i + 1, i + 3))
    assert ds.state.rows.shape[1] == 12


def test_fpg_total_weight_is_sum_of_seller_resolutions():
    inst = gen_synthetic(80, 32, 6, seed=9, mode="postponed")
    out = fast_postponed_greedy_run(inst, s=8, seed=1)
    assert out.total_weight == pytest.approx(out.pair_weight_sum(), rel=1e-9)
