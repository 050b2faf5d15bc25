"""Sketched greedy structures.

:class:`FastGreedy` pre-sketches the sellers once and, per buyer, sketches
only the buyer before scanning the active sellers in the low dimension.
:class:`FastPostponedGreedy` keeps nothing but sketched copies of the nodes
currently in the market. Control flow is shared with :mod:`sketchmatch.greedy`,
so an identity projection reproduces the exact algorithms step for step.
"""

from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from . import kernels
from . import sketch as sk
from .errors import BadParameter, DimensionMismatch
from .greedy import GreedyState, PostponedState, _check_undetermined, _fold, _new_greedy_state
from .market import Instance, MatchOutcome, Node, Role, check_vector


def _check_eps_delta(eps, delta):
    if not 0.0 < eps < 1.0:
        raise BadParameter(f"eps must lie in (0, 1), got {eps}")
    if not 0.0 < delta < 1.0:
        raise BadParameter(f"delta must lie in (0, 1), got {delta}")


def _resolve_sketch(n, d, eps, delta, seed, s, projection) -> sk.SketchMatrix:
    if projection is not None:
        if projection.d != d:
            raise DimensionMismatch(f"projection expects d={projection.d}, data has d={d}")
        return projection
    if s is None:
        s = sk.recommended_s(max(n, 2), eps, delta)
    elif s < 1:
        raise BadParameter(f"s must be positive, got {s}")
    return sk.build(s, d, seed)


class FastGreedy:
    """Greedy over sketched distances with per-seller deadlines.

    ``s`` overrides the dimension derived from ``eps``/``delta``;
    ``projection`` injects an explicit matrix (tests use the identity).
    """

    def __init__(
        self,
        sellers: Sequence[Node],
        eps: float = 0.1,
        delta: float = 0.01,
        seed: int = 0,
        s: Optional[int] = None,
        projection: Optional[sk.SketchMatrix] = None,
        d: Optional[int] = None,
    ):
        _check_eps_delta(eps, delta)
        sellers = sorted(sellers, key=lambda x: x.id)
        if not sellers and d is None:
            raise BadParameter("need at least one seller or an explicit d")
        d = sellers[0].dim if sellers else d
        for x in sellers:
            if x.dim != d:
                raise DimensionMismatch(f"seller {x.id} has dimension {x.dim}, expected {d}")
        self.eps, self.delta, self.d = eps, delta, d
        self.sketch = _resolve_sketch(len(sellers), d, eps, delta, seed, s, projection)
        raw = np.array([x.vector for x in sellers]).reshape(len(sellers), d)
        self.sketched = sk.apply_rows(self.sketch, raw)
        self.state: GreedyState = _new_greedy_state(sellers, self.sketched)

    @classmethod
    def from_instance(cls, instance: Instance, **kw) -> "FastGreedy":
        if instance.postponed:
            raise BadParameter("FastGreedy needs a bipartite instance")
        return cls(instance.sellers, d=instance.d, **kw)

    @property
    def s(self) -> int:
        return self.sketch.s

    @property
    def sketched_sellers(self) -> list:
        return [sk.SketchedPoint(int(i), row) for i, row in zip(self.state.seller_ids, self.sketched)]

    @property
    def touches(self) -> int:
        return self.state.touches

    def query(self, y) -> np.ndarray:
        """Approximate distances to every seller; NaN marks inactive sellers."""
        y = check_vector(y, self.d)
        q = self.sketch.entries @ y
        out = np.full(self.state.n, np.nan)
        cand = np.flatnonzero(self.state.flag)
        if cand.size:
            buf = np.empty(cand.size)
            out[cand] = kernels.row_distances(self.sketched, q, cand, buf)
        return out

    def update(self, event: Node) -> "FastGreedy":
        state = self.state
        state.advance(event.arrival)
        if event.role == Role.SELLER:
            return self
        if event.role != Role.BUYER:
            raise BadParameter("FastGreedy streams carry only sellers and buyers")
        y = check_vector(event.vector, self.d)
        state.touches += 1
        state.offer(event.id, self.sketch.entries @ y)
        return self

    def total_weight(self) -> float:
        return self.state.p

    def outcome(self, per_step_nanos=()) -> MatchOutcome:
        return self.state.outcome(per_step_nanos)


class FastPostponedGreedy:
    """Postponed greedy that stores only sketched copies of live nodes.

    ``n_hint`` sizes the sketch when ``s`` is not given (the number of
    nodes is otherwise unknown up front) and pre-allocates storage.
    """

    def __init__(
        self,
        d: int,
        eps: float = 0.1,
        delta: float = 0.01,
        seed: int = 0,
        s: Optional[int] = None,
        projection: Optional[sk.SketchMatrix] = None,
        n_hint: int = 1000,
    ):
        _check_eps_delta(eps, delta)
        if d < 1:
            raise BadParameter(f"d must be positive, got {d}")
        self.eps, self.delta, self.d = eps, delta, d
        self.sketch = _resolve_sketch(n_hint, d, eps, delta, seed, s, projection)
        self.state = PostponedState(self.sketch.s, seed, capacity=n_hint)

    @property
    def s(self) -> int:
        return self.sketch.s

    @property
    def touches(self) -> int:
        return self.state.touches

    @property
    def live_sellers(self) -> int:
        return self.state.market_size

    @property
    def live_buyers(self) -> int:
        # buyer and seller copies enter and leave together
        return self.state.market_size

    def update(self, node: Node) -> "FastPostponedGreedy":
        x = _check_undetermined(node, self.d)
        self.state.touches += 1
        self.state.insert(node.id, node.arrival, node.deadline, self.sketch.entries @ x)
        return self

    def finish(self) -> "FastPostponedGreedy":
        self.state.finish()
        return self

    def total_weight(self) -> float:
        return self.state.p

    def outcome(self, per_step_nanos=()) -> MatchOutcome:
        return self.state.outcome(per_step_nanos)


# Operation-style entry points mirroring Init / Query / Update / TotalWeight.

def fg_init(sellers, eps, delta, seed, s=None, projection=None, d=None) -> FastGreedy:
    return FastGreedy(sellers, eps, delta, seed, s=s, projection=projection, d=d)


def fg_query(ds: FastGreedy, y) -> np.ndarray:
    return ds.query(y)


def fg_update(ds: FastGreedy, event: Node) -> FastGreedy:
    return ds.update(event)


def fg_total_weight(ds: FastGreedy) -> float:
    return ds.total_weight()


def fpg_init(eps, delta, d, seed, s=None, projection=None, n_hint=1000) -> FastPostponedGreedy:
    return FastPostponedGreedy(d, eps, delta, seed, s=s, projection=projection, n_hint=n_hint)


def fpg_update(ds: FastPostponedGreedy, node: Node) -> FastPostponedGreedy:
    return ds.update(node)


def fpg_total_weight(ds: FastPostponedGreedy) -> float:
    return ds.total_weight()


def fast_greedy_run(instance: Instance, eps=0.1, delta=0.01, seed=0, s=None, projection=None) -> MatchOutcome:
    ds = FastGreedy.from_instance(instance, eps=eps, delta=delta, seed=seed, s=s, projection=projection)
    nanos = _fold(ds, instance.stream, FastGreedy.update)
    return ds.outcome(nanos)


def fast_postponed_greedy_run(
    instance: Instance, eps=0.1, delta=0.01, seed=0, s=None, projection=None
) -> MatchOutcome:
    n = max(len(instance.stream), 2)
    ds = FastPostponedGreedy(instance.d, eps, delta, seed, s=s, projection=projection, n_hint=n)
    nanos = _fold(ds, instance.stream, FastPostponedGreedy.update)
    ds.finish()
    return ds.outcome(nanos)
