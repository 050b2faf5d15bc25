"""Deadline-market data model shared by every algorithm and the oracle."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import BadParameter, DimensionMismatch, NonFiniteInput


class Role(enum.IntEnum):
    # ordering doubles as the within-step tie-break rank
    SELLER = 0
    BUYER = 1
    UNDETERMINED = 2


@dataclass(frozen=True, eq=False)
class Node:
    id: int
    vector: np.ndarray
    arrival: int
    deadline: int
    role: Role

    def __post_init__(self):
        vec = np.asarray(self.vector, dtype=np.float64)
        if vec.ndim != 1:
            raise DimensionMismatch(f"node {self.id}: vector must be one-dimensional")
        if not np.all(np.isfinite(vec)):
            raise NonFiniteInput(f"node {self.id}: non-finite coordinate")
        if self.deadline < self.arrival:
            raise BadParameter(f"node {self.id}: deadline {self.deadline} < arrival {self.arrival}")
        object.__setattr__(self, "vector", vec)
        object.__setattr__(self, "role", Role(self.role))

    @property
    def dim(self) -> int:
        return self.vector.shape[0]

    def sort_key(self):
        return (self.arrival, int(self.role), self.id)

    def __eq__(self, other):
        if not isinstance(other, Node):
            return NotImplemented
        return (
            self.id == other.id
            and self.arrival == other.arrival
            and self.deadline == other.deadline
            and self.role == other.role
            and np.array_equal(self.vector, other.vector)
        )

    __hash__ = None


@dataclass(eq=False)
class Instance:
    """A market: sellers and buyers (bipartite mode) or undetermined nodes.

    ``stream`` is every node sorted by arrival, sellers before buyers within a
    step, then ascending id.
    """

    d: int
    sellers: list = field(default_factory=list)
    buyers: list = field(default_factory=list)
    undetermined: list = field(default_factory=list)
    stream: list = field(init=False, repr=False)
    # optional row-stacked copies of the node vectors, filled by generators
    _matrices: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        for group, role in (
            (self.sellers, Role.SELLER),
            (self.buyers, Role.BUYER),
            (self.undetermined, Role.UNDETERMINED),
        ):
            seen = set()
            for node in group:
                if node.role != role:
                    raise BadParameter(f"node {node.id} listed as {role.name} but has role {node.role.name}")
                if node.dim != self.d:
                    raise DimensionMismatch(f"node {node.id} has dimension {node.dim}, instance has {self.d}")
                if node.id in seen:
                    raise BadParameter(f"duplicate {role.name.lower()} id {node.id}")
                seen.add(node.id)
        if self.undetermined and (self.sellers or self.buyers):
            raise BadParameter("an instance is either bipartite or fully undetermined")
        self.stream = sorted(
            [*self.sellers, *self.buyers, *self.undetermined], key=Node.sort_key
        )

    @property
    def postponed(self) -> bool:
        return bool(self.undetermined)

    @property
    def n(self) -> int:
        return len(self.undetermined) if self.postponed else len(self.sellers)

    def matrix(self, role: Role) -> np.ndarray:
        """Node vectors of one role stacked by id (rows indexed by node id)."""
        cached = self._matrices.get(role)
        if cached is not None:
            return cached
        group = {Role.SELLER: self.sellers, Role.BUYER: self.buyers,
                 Role.UNDETERMINED: self.undetermined}[role]
        out = np.zeros((max((nd.id for nd in group), default=-1) + 1, self.d))
        for node in group:
            out[node.id] = node.vector
        self._matrices[role] = out
        return out

    def as_postponed(self) -> "Instance":
        """Strip roles: every seller and buyer becomes an undetermined node."""
        nodes = []
        for i, node in enumerate(sorted([*self.sellers, *self.buyers], key=Node.sort_key)):
            nodes.append(Node(i, node.vector, node.arrival, node.deadline, Role.UNDETERMINED))
        return Instance(self.d, undetermined=nodes)


@dataclass
class MatchOutcome:
    total_weight: float
    pairs: list  # (seller_id, buyer_id, weight)
    per_step_nanos: list = field(default_factory=list)

    def pair_weight_sum(self) -> float:
        return math.fsum(w for _, _, w in self.pairs)


def check_vector(x, d: Optional[int] = None) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise DimensionMismatch("expected a one-dimensional vector")
    if d is not None and x.shape[0] != d:
        raise DimensionMismatch(f"expected length {d}, got {x.shape[0]}")
    if not np.all(np.isfinite(x)):
        raise NonFiniteInput("vector has NaN or infinite entries")
    return x


def edge_weight(a: Sequence[float], b: Sequence[float]) -> float:
    """Euclidean distance between two feature vectors."""
    a = check_vector(a)
    b = check_vector(b, a.shape[0])
    diff = a - b
    return float(np.sqrt(np.dot(diff, diff)))


def feasible(seller: Node, buyer: Node) -> bool:
    """A buyer can take a seller iff it arrives within the seller's window.

    The window is closed: a buyer arriving exactly at the deadline step still
    matches.
    """
    return seller.arrival <= buyer.arrival <= seller.deadline
