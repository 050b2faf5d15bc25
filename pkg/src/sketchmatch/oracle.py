"""Offline ground truth for small instances.

Weights are recomputed here with :func:`math.dist` rather than the package's
kernels so the checks stay independent of the code they judge.
"""

from __future__ import annotations

import math

from .errors import BadValue, OracleTooLarge
from .market import Instance, MatchOutcome, feasible

MAX_SIDE = 10
MAX_GENERAL_NODES = 12
SLACK = 1e-9


def _weight(a, b) -> float:
    return math.dist(a.vector.tolist(), b.vector.tolist())


def _better(total, pairs, best_total, best_pairs) -> bool:
    return total > best_total or (total == best_total and pairs < best_pairs)


def brute_force_opt(instance: Instance) -> MatchOutcome:
    """Maximum-weight partial matching under deadline feasibility, by enumeration.

    Sellers are visited in id order; each one is either matched to a still
    free feasible buyer or left out. Ties go to the lexicographically
    smallest pair list.
    """
    sellers = sorted(instance.sellers, key=lambda x: x.id)
    buyers = sorted(instance.buyers, key=lambda x: x.id)
    if len(sellers) > MAX_SIDE or len(buyers) > MAX_SIDE:
        raise OracleTooLarge(
            f"brute force capped at {MAX_SIDE}x{MAX_SIDE}, got {len(sellers)}x{len(buyers)}"
        )
    options = []
    for s in sellers:
        options.append([(b.id, _weight(s, b)) for b in buyers if feasible(s, b)])

    best = [0.0, []]
    chosen = []
    used = set()

    def recurse(k):
        if k == len(sellers):
            total = math.fsum(w for _, _, w in chosen)
            pairs = list(chosen)
            if _better(total, pairs, best[0], best[1]):
                best[0], best[1] = total, pairs
            return
        for bid, w in options[k]:
            if bid not in used:
                used.add(bid)
                chosen.append((sellers[k].id, bid, w))
                recurse(k + 1)
                chosen.pop()
                used.discard(bid)
        recurse(k + 1)

    recurse(0)
    return MatchOutcome(best[0], best[1])


def brute_force_opt_general(instance: Instance) -> MatchOutcome:
    """Optimum for a role-free instance: any node may serve as the seller of a
    later arrival that comes within its deadline window."""
    nodes = sorted(instance.stream, key=lambda x: (x.arrival, x.id))
    if len(nodes) > MAX_GENERAL_NODES:
        raise OracleTooLarge(f"general brute force capped at {MAX_GENERAL_NODES} nodes, got {len(nodes)}")
    n = len(nodes)
    weight = {}
    for i in range(n):
        for j in range(i + 1, n):
            if feasible(nodes[i], nodes[j]):
                weight[i, j] = _weight(nodes[i], nodes[j])

    best = [0.0, []]
    chosen = []
    taken = [False] * n

    def recurse(i):
        while i < n and taken[i]:
            i += 1
        if i == n:
            total = math.fsum(w for _, _, w in chosen)
            pairs = sorted(chosen)
            if _better(total, pairs, best[0], best[1]):
                best[0], best[1] = total, pairs
            return
        taken[i] = True
        for j in range(i + 1, n):
            if not taken[j] and (i, j) in weight:
                taken[j] = True
                chosen.append((nodes[i].id, nodes[j].id, weight[i, j]))
                recurse(i + 1)
                chosen.pop()
                taken[j] = False
        recurse(i + 1)
        taken[i] = False

    recurse(0)
    return MatchOutcome(best[0], best[1])


def dual_certificate_check(instance: Instance, certificate, slack: float = SLACK) -> bool:
    """True iff the vertex prices are non-negative and cover every feasible edge.

    ``certificate`` is ``(seller_prices, buyer_prices)``, two dicts keyed by
    node id: final seller values and per-buyer gains from a greedy run.
    """
    seller_prices, buyer_prices = certificate
    if any(v < -slack for v in seller_prices.values()):
        return False
    if any(v < -slack for v in buyer_prices.values()):
        return False
    for s in instance.sellers:
        a_s = seller_prices.get(s.id, 0.0)
        for b in instance.buyers:
            if feasible(s, b) and a_s + buyer_prices.get(b.id, 0.0) < _weight(s, b) - slack:
                return False
    return True


def competitive_ratio(alg_total: float, opt_total: float) -> float:
    if alg_total < 0 or opt_total < 0:
        raise BadValue(f"totals must be non-negative, got alg={alg_total}, opt={opt_total}")
    if opt_total == 0:
        return 1.0
    return alg_total / opt_total
