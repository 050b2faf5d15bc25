"""Exact online greedy matchers with deadlines.

``greedy_*`` is the free-disposal greedy over a fixed seller side;
``postponed_greedy_run`` is the role-agnostic variant where every arriving
node offers a seller copy and a buyer copy and its role is settled by a fair
coin when it leaves. Both engines are reused by the sketched structures in
:mod:`sketchmatch.fast`, which only swap the stored rows for sketches.
"""

from __future__ import annotations

import heapq
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import kernels
from .errors import BadParameter, DimensionMismatch, RoleAlreadyFixed
from .market import Instance, MatchOutcome, Node, Role, check_vector


def coin_rng(seed) -> np.random.Generator:
    """Coin-flip stream for postponed runs, independent of the sketch stream."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(1,))))


@dataclass
class GreedyState:
    w: np.ndarray
    m: list
    flag: np.ndarray
    p: float
    arrival: np.ndarray
    deadline: np.ndarray
    points: np.ndarray  # rows compared against each buyer: raw or sketched sellers
    seller_ids: np.ndarray
    increments: dict = field(default_factory=dict)
    touches: int = 0
    now: Optional[int] = None
    _by_arrival: np.ndarray = field(default=None, repr=False)
    _by_deadline: np.ndarray = field(default=None, repr=False)
    _next_arrival: int = 0
    _next_deadline: int = 0
    _buf: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        self._by_arrival = np.argsort(self.arrival, kind="stable")
        self._by_deadline = np.argsort(self.deadline, kind="stable")
        self._buf = np.empty(len(self.w))
        self._slot = {int(sid): k for k, sid in enumerate(self.seller_ids)}

    @property
    def n(self) -> int:
        return len(self.w)

    def advance(self, t: int) -> None:
        """Activate sellers that have arrived by ``t``, then drop expired ones."""
        if self.now is not None and t < self.now:
            raise BadParameter(f"events out of order: step {t} after {self.now}")
        self.now = t
        arr, dl = self.arrival, self.deadline
        while self._next_arrival < self.n and arr[self._by_arrival[self._next_arrival]] <= t:
            self.flag[self._by_arrival[self._next_arrival]] = True
            self._next_arrival += 1
        while self._next_deadline < self.n and dl[self._by_deadline[self._next_deadline]] < t:
            self.flag[self._by_deadline[self._next_deadline]] = False
            self._next_deadline += 1

    def slot(self, seller_id: int) -> int:
        return self._slot[seller_id]

    def offer(self, buyer_id: int, q: np.ndarray) -> float:
        """Let one buyer (already mapped into the rows' space) pick a seller.

        Returns the gain added to ``p``; zero when no active seller improves.
        """
        cand = np.flatnonzero(self.flag)
        gain = 0.0
        if cand.size:
            dists = kernels.row_distances(self.points, q, cand, self._buf)
            k, inc = kernels.argmax_increment(dists, self.w, cand)
            if inc > 0.0:
                i0 = cand[k]
                self.m[i0] = buyer_id
                self.p += inc
                self.w[i0] = dists[k]
                gain = inc
        self.increments[buyer_id] = gain
        return gain

    def outcome(self, per_step_nanos=()) -> MatchOutcome:
        pairs = [
            (int(self.seller_ids[i]), b, float(self.w[i]))
            for i, b in enumerate(self.m)
            if b is not None
        ]
        pairs.sort()
        return MatchOutcome(float(self.p), pairs, list(per_step_nanos))

    def certificate(self):
        """Dual prices from the run: final seller values and buyer gains."""
        seller_prices = {int(sid): float(self.w[i]) for i, sid in enumerate(self.seller_ids)}
        return seller_prices, dict(self.increments)


def _new_greedy_state(sellers, points) -> GreedyState:
    n = len(sellers)
    state = GreedyState(
        w=np.zeros(n),
        m=[None] * n,
        flag=np.zeros(n, dtype=bool),
        p=0.0,
        arrival=np.array([s.arrival for s in sellers], dtype=np.int64),
        deadline=np.array([s.deadline for s in sellers], dtype=np.int64),
        points=points,
        seller_ids=np.array([s.id for s in sellers], dtype=np.int64),
    )
    state.advance(0)
    state.now = None
    return state


def greedy_init(instance: Instance) -> GreedyState:
    if instance.postponed:
        raise BadParameter("greedy needs a bipartite instance")
    sellers = sorted(instance.sellers, key=lambda s: s.id)
    if sellers and sellers[-1].id == len(sellers) - 1:
        points = instance.matrix(Role.SELLER)
    else:
        points = np.array([s.vector for s in sellers]).reshape(len(sellers), instance.d)
    return _new_greedy_state(sellers, np.ascontiguousarray(points, dtype=np.float64))


def greedy_update(state: GreedyState, event: Node) -> GreedyState:
    state.advance(event.arrival)
    if event.role == Role.SELLER:
        # activation already happened in advance(); a late seller event is a no-op
        return state
    if event.role != Role.BUYER:
        raise BadParameter("greedy streams carry only sellers and buyers")
    if event.dim != state.points.shape[1]:
        raise DimensionMismatch(f"buyer has dimension {event.dim}, sellers {state.points.shape[1]}")
    state.touches += int(np.count_nonzero(state.flag))
    state.offer(event.id, event.vector)
    return state


def _fold(state, stream, update: Callable) -> list:
    nanos = []
    clock = time.perf_counter_ns
    for event in stream:
        t0 = clock()
        update(state, event)
        nanos.append(clock() - t0)
    return nanos


def greedy_trace(instance: Instance):
    """Run greedy and keep the final state (for dual certificates)."""
    state = greedy_init(instance)
    nanos = _fold(state, instance.stream, greedy_update)
    return state.outcome(nanos), state


def greedy_run(instance: Instance) -> MatchOutcome:
    return greedy_trace(instance)[0]


# -- postponed -----------------------------------------------------------------


class PostponedState:
    """Live seller/buyer copies of undetermined nodes and their provisional matches.

    Rows hold whatever representation distances are taken over (raw vectors
    for the exact algorithm, sketches for the fast one). Both copies of a node
    leave the market together at its deadline.
    """

    def __init__(self, width: int, seed, capacity: int = 64):
        self.width = width
        self.rng = coin_rng(seed)
        self.p = 0.0
        self.pairs = []
        self.touches = 0
        self.now = None
        self._cap = max(1, capacity)
        self.rows = np.empty((self._cap, width))
        self.live = np.zeros(self._cap, dtype=bool)
        self.w = np.zeros(self._cap)
        self.m = np.full(self._cap, -1, dtype=np.int64)  # seller slot -> buyer slot
        self.held_by = np.full(self._cap, -1, dtype=np.int64)  # buyer slot -> seller slot
        self.status = np.full(self._cap, int(Role.UNDETERMINED), dtype=np.int8)
        self.deadline = np.zeros(self._cap, dtype=np.int64)
        self.ids = np.zeros(self._cap, dtype=np.int64)
        self.size = 0
        self._heap = []
        self._buf = np.empty(self._cap)

    def _grow(self):
        cap = self._cap * 2

        def extend(arr, fill):
            out = np.full((cap,) + arr.shape[1:], fill, dtype=arr.dtype)
            out[: self._cap] = arr
            return out

        self.rows = extend(self.rows, 0.0)
        self.live = extend(self.live, False)
        self.w = extend(self.w, 0.0)
        self.m = extend(self.m, -1)
        self.held_by = extend(self.held_by, -1)
        self.status = extend(self.status, int(Role.UNDETERMINED))
        self.deadline = extend(self.deadline, 0)
        self.ids = extend(self.ids, 0)
        self._buf = np.empty(cap)
        self._cap = cap

    @property
    def market_size(self) -> int:
        return int(np.count_nonzero(self.live[: self.size]))

    def expire_before(self, t: int) -> None:
        while self._heap and self._heap[0][0] < t:
            _, slot = heapq.heappop(self._heap)
            self._resolve(slot)

    def finish(self) -> None:
        """Settle every node still in the market, earliest deadline first."""
        while self._heap:
            _, slot = heapq.heappop(self._heap)
            self._resolve(slot)

    def _resolve(self, j: int) -> None:
        if self.status[j] == Role.UNDETERMINED:
            self.status[j] = Role.SELLER if self.rng.random() < 0.5 else Role.BUYER
        seller = self.status[j] == Role.SELLER
        holder = self.held_by[j]
        if seller and holder >= 0:
            # a seller cannot also be the buyer of a pending match
            self.m[holder] = -1
            self.w[holder] = 0.0
            self.held_by[j] = -1
        partner = self.m[j]
        if partner >= 0:
            if seller:
                if self.status[partner] != Role.SELLER:
                    self.p += self.w[j]
                    self.pairs.append((int(self.ids[j]), int(self.ids[partner]), float(self.w[j])))
                    self.status[partner] = Role.BUYER
            elif self.status[partner] == Role.UNDETERMINED:
                self.status[partner] = Role.SELLER
            self.held_by[partner] = -1
            self.m[j] = -1
        self.live[j] = False

    def insert(self, node_id: int, arrival: int, deadline: int, row: np.ndarray) -> int:
        if self.now is not None and arrival < self.now:
            raise BadParameter(f"events out of order: step {arrival} after {self.now}")
        self.now = arrival
        self.expire_before(arrival)
        if self.size == self._cap:
            self._grow()
        j = self.size
        self.size += 1
        self.rows[j] = row
        self.ids[j] = node_id
        self.deadline[j] = deadline
        heapq.heappush(self._heap, (deadline, j))
        # buyer copy bids on every live seller copy except its own
        cand = np.flatnonzero(self.live[: self.size])
        if cand.size:
            dists = kernels.row_distances(self.rows, row, cand, self._buf)
            k, inc = kernels.argmax_increment(dists, self.w, cand)
            if inc > 0.0:
                i0 = cand[k]
                old = self.m[i0]
                if old >= 0:
                    self.held_by[old] = -1
                self.m[i0] = j
                self.held_by[j] = i0
                self.w[i0] = dists[k]
        self.live[j] = True
        return int(cand.size)

    def outcome(self, per_step_nanos=()) -> MatchOutcome:
        return MatchOutcome(float(self.p), sorted(self.pairs), list(per_step_nanos))

    def provisional_sum(self) -> float:
        live = self.live[: self.size]
        return float(self.w[: self.size][live].sum())


def _check_undetermined(node: Node, d: int) -> np.ndarray:
    if node.role != Role.UNDETERMINED:
        raise RoleAlreadyFixed(f"node {node.id} arrives with role {node.role.name}")
    return check_vector(node.vector, d)


def postponed_init(d: int, seed, capacity: int = 64) -> PostponedState:
    return PostponedState(d, seed, capacity)


def postponed_update(state: PostponedState, node: Node) -> PostponedState:
    x = _check_undetermined(node, state.width)
    state.touches += state.insert(node.id, node.arrival, node.deadline, x)
    return state


def postponed_greedy_run(instance: Instance, seed) -> MatchOutcome:
    for node in instance.stream:
        if node.role != Role.UNDETERMINED:
            raise RoleAlreadyFixed(f"node {node.id} arrives with role {node.role.name}")
    state = postponed_init(instance.d, seed, capacity=len(instance.stream))
    nanos = _fold(state, instance.stream, postponed_update)
    state.finish()
    return state.outcome(nanos)
